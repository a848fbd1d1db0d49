#include "linkcalc/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "linkcalc/philox.hpp"
#include "linkcalc/specfun.hpp"

namespace linkcalc::fitting {
namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',' || ch == '\t' || ch == ' ' || ch == '\r') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_number(const std::string& tok, std::size_t line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw InputError("row " + std::to_string(line_no) + ": not a number: '" + tok + "'");
    }
    if (pos != tok.size())
        throw InputError("row " + std::to_string(line_no) + ": trailing junk in '" + tok + "'");
    return v;
}

} // namespace

std::string model_name(FitModel m) {
    switch (m) {
        case FitModel::Rayleigh: return "rayleigh";
        case FitModel::Nakagami: return "nakagami";
        case FitModel::FisherF: return "fisherf";
    }
    return "?";
}

MeasurementSet load_measurements(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open measurement file: " + path);
    MeasurementSet ms;
    std::string line;
    std::size_t line_no = 0;
    int col_dist = -1, col_rx = -1, col_env = -1;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (!header_seen) {
            for (std::size_t i = 0; i < toks.size(); ++i) {
                if (toks[i] == "distance_m") col_dist = static_cast<int>(i);
                else if (toks[i] == "rx_power_dbm") col_rx = static_cast<int>(i);
                else if (toks[i] == "envelope") col_env = static_cast<int>(i);
            }
            if (col_env < 0 && (col_dist < 0 || col_rx < 0))
                throw InputError("header must name distance_m and rx_power_dbm, or envelope");
            header_seen = true;
            continue;
        }
        std::size_t need = static_cast<std::size_t>(
            std::max({col_dist, col_rx, col_env}) + 1);
        if (toks.size() < need)
            throw InputError("row " + std::to_string(line_no) + ": expected " +
                             std::to_string(need) + " columns, got " +
                             std::to_string(toks.size()));
        if (col_env >= 0) {
            double e = parse_number(toks[col_env], line_no);
            if (!(e > 0.0))
                throw InputError("row " + std::to_string(line_no) + ": envelope must be > 0");
            ms.envelope.push_back(e);
        } else {
            MeasurementRow r;
            r.distance_m = parse_number(toks[col_dist], line_no);
            r.rx_power_dbm = parse_number(toks[col_rx], line_no);
            if (!(r.distance_m > 0.0))
                throw InputError("row " + std::to_string(line_no) + ": distance must be > 0");
            ms.rows.push_back(r);
        }
    }
    if (!header_seen) throw InputError("empty measurement file: " + path);
    if (ms.size() == 0) throw InputError("no data rows in " + path);
    return ms;
}

std::vector<double> compensate_path_loss(const MeasurementSet& ms, double alpha, double d0,
                                         std::vector<std::string>* warnings) {
    if (!(alpha > 0.0) || !(d0 > 0.0))
        throw DomainError("compensate_path_loss: alpha and d0 must be > 0");
    std::vector<double> env;
    if (ms.preprocessed()) {
        env = ms.envelope;
    } else {
        env.reserve(ms.rows.size());
        std::size_t below = 0;
        for (const auto& r : ms.rows) {
            if (r.distance_m < d0) ++below;
            double comp_db = r.rx_power_dbm + 10.0 * alpha * std::log10(r.distance_m / d0);
            env.push_back(std::pow(10.0, comp_db / 20.0));
        }
        if (below > 0 && warnings)
            warnings->push_back(std::to_string(below) + " record(s) closer than d0");
    }
    double ms2 = 0.0;
    for (double e : env) ms2 += e * e;
    ms2 /= static_cast<double>(env.size());
    double rms = std::sqrt(ms2);
    for (double& e : env) e /= rms;
    return env;
}

namespace {

// --- model CDFs over the envelope -------------------------------------------

double cdf_rayleigh(double x, double s) {
    return -std::expm1(-x * x / (2.0 * s * s));
}

double cdf_nakagami(double x, double m, double omega) {
    return specfun::reg_lower_inc_gamma(m, m * x * x / omega);
}

double cdf_fisher(double x, double m, double m_s, double rho) {
    double t = m * rho * x * x;
    return specfun::reg_inc_beta(t / (t + m_s), m, m_s);
}

// --- bounded Nelder-Mead ------------------------------------------------------

struct Bound {
    double lo, hi;
    bool shifted; // parameterize hi >= p > lo via log(p - lo)
};

double to_param(double u, const Bound& b) {
    double v = 1.0 / (1.0 + std::exp(-u)); // logistic into (0,1)
    double llo = std::log(b.shifted ? 1e-9 : b.lo);
    double lhi = std::log(b.hi - (b.shifted ? b.lo : 0.0));
    double p = std::exp(llo + (lhi - llo) * v);
    return b.shifted ? b.lo + p : p;
}

double from_unit(double v) { return std::log(v / (1.0 - v)); } // logit

using Objective = std::function<double(const std::vector<double>&)>;

struct NmResult {
    std::vector<double> x;
    double f;
};

NmResult nelder_mead(const Objective& fn, std::vector<double> x0, int max_iters) {
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> simplex(dim + 1, x0);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += 0.5;
    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) fv[i] = fn(simplex[i]);

    for (int it = 0; it < max_iters; ++it) {
        std::vector<std::size_t> ord(dim + 1);
        std::iota(ord.begin(), ord.end(), 0);
        std::sort(ord.begin(), ord.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> sx(dim + 1);
        std::vector<double> sf(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            sx[i] = simplex[ord[i]];
            sf[i] = fv[ord[i]];
        }
        simplex = std::move(sx);
        fv = std::move(sf);
        if (std::abs(fv[dim] - fv[0]) <= 1e-15 * (std::abs(fv[0]) + 1e-30)) break;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / dim;
        auto blend = [&](double t) {
            std::vector<double> p(dim);
            for (std::size_t j = 0; j < dim; ++j)
                p[j] = centroid[j] + t * (simplex[dim][j] - centroid[j]);
            return p;
        };
        auto xr = blend(-alpha);
        double fr = fn(xr);
        if (fr < fv[0]) {
            auto xe = blend(-gamma);
            double fe = fn(xe);
            if (fe < fr) {
                simplex[dim] = xe;
                fv[dim] = fe;
            } else {
                simplex[dim] = xr;
                fv[dim] = fr;
            }
        } else if (fr < fv[dim - 1]) {
            simplex[dim] = xr;
            fv[dim] = fr;
        } else {
            // outside contraction when the reflection beat the worst point,
            // inside contraction otherwise
            auto xc = blend(fr < fv[dim] ? -rho : rho);
            double fc = fn(xc);
            if (fc < std::min(fr, fv[dim])) {
                simplex[dim] = xc;
                fv[dim] = fc;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j)
                        simplex[i][j] = simplex[0][j] + sigma * (simplex[i][j] - simplex[0][j]);
                    fv[i] = fn(simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < fv.size(); ++i)
        if (fv[i] < fv[best]) best = i;
    return {simplex[best], fv[best]};
}

} // namespace

FitReport fit_model(const std::vector<double>& envelope, FitModel model,
                    const FitOptions& opts) {
    if (envelope.size() < 50)
        throw DomainError("fit_model: need at least 50 samples");
    std::vector<double> xs(envelope);
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    const int ng = opts.n_grid;

    // quantile-spaced grid with the empirical CDF at each grid point
    std::vector<double> gx(ng), gf(ng);
    for (int i = 0; i < ng; ++i) {
        double q = (i + 0.5) / ng;
        auto pos = static_cast<std::size_t>(q * n);
        if (pos >= n) pos = n - 1;
        gx[i] = xs[pos];
        gf[i] = static_cast<double>(pos + 1) / static_cast<double>(n);
    }

    std::vector<Bound> bounds;
    switch (model) {
        case FitModel::Rayleigh:
            bounds = {{1e-3, 1e3, false}};
            break;
        case FitModel::Nakagami:
            bounds = {{0.05, 20.0, false}, {1e-4, 1e4, false}};
            break;
        case FitModel::FisherF:
            if (opts.normalized)
                bounds = {{0.05, 20.0, false}, {1.0, 50.0, true}};
            else
                bounds = {{0.05, 20.0, false}, {1.0, 50.0, true}, {1e-4, 1e4, false}};
            break;
    }
    const std::size_t dim = bounds.size();

    auto mse_of = [&](const std::vector<double>& u) {
        std::vector<double> p(dim);
        for (std::size_t j = 0; j < dim; ++j) p[j] = to_param(u[j], bounds[j]);
        double acc = 0.0;
        for (int i = 0; i < ng; ++i) {
            double f = 0.0;
            switch (model) {
                case FitModel::Rayleigh: f = cdf_rayleigh(gx[i], p[0]); break;
                case FitModel::Nakagami: f = cdf_nakagami(gx[i], p[0], p[1]); break;
                case FitModel::FisherF: {
                    double rho = opts.normalized ? p[1] / (p[1] - 1.0) : p[2];
                    f = cdf_fisher(gx[i], p[0], p[1], rho);
                    break;
                }
            }
            double e = f - gf[i];
            acc += e * e;
        }
        return acc / ng;
    };

    // Latin-hypercube starting points in the unit cube, one permutation per axis
    Philox rng(opts.seed, 0xF17u, 0);
    std::vector<std::vector<int>> perms(dim, std::vector<int>(opts.n_starts));
    for (std::size_t j = 0; j < dim; ++j) {
        auto& perm = perms[j];
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = opts.n_starts - 1; i > 0; --i) {
            int k = static_cast<int>(rng.uniform() * (i + 1));
            if (k > i) k = i;
            std::swap(perm[i], perm[k]);
        }
    }

    NmResult best{{}, std::numeric_limits<double>::infinity()};
    std::vector<double> best_params;
    for (int s = 0; s < opts.n_starts; ++s) {
        std::vector<double> u0(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            double v = (perms[j][s] + rng.uniform()) / opts.n_starts;
            v = std::min(std::max(v, 1e-6), 1.0 - 1e-6);
            u0[j] = from_unit(v);
        }
        NmResult r = nelder_mead(mse_of, u0, opts.max_iters);
        std::vector<double> params(dim);
        for (std::size_t j = 0; j < dim; ++j) params[j] = to_param(r.x[j], bounds[j]);
        bool better = r.f < best.f;
        if (!better && r.f == best.f && !best_params.empty())
            better = std::lexicographical_compare(params.begin(), params.end(),
                                                  best_params.begin(), best_params.end());
        if (better) {
            best = r;
            best_params = params;
        }
    }

    FitReport rep;
    rep.model = model;
    rep.mse = best.f;
    rep.n_grid = ng;
    rep.normalized_omega = opts.normalized;
    switch (model) {
        case FitModel::Rayleigh:
            rep.s = best_params[0];
            break;
        case FitModel::Nakagami:
            rep.m = best_params[0];
            rep.omega = best_params[1];
            break;
        case FitModel::FisherF: {
            rep.m = best_params[0];
            rep.m_s = best_params[1];
            double rho = opts.normalized ? rep.m_s / (rep.m_s - 1.0) : best_params[2];
            rep.omega_s = std::sqrt(rep.m_s / (rep.m_s - 1.0));
            rep.omega_m = rep.omega_s / rho;
            rep.omega = rep.omega_m * rep.omega_s;
            break;
        }
    }
    return rep;
}

double model_cdf(const FitReport& r, double x) {
    if (x <= 0.0) return 0.0;
    switch (r.model) {
        case FitModel::Rayleigh: return cdf_rayleigh(x, r.s);
        case FitModel::Nakagami: return cdf_nakagami(x, r.m, r.omega);
        case FitModel::FisherF: {
            double rho = r.omega_s / r.omega_m;
            return cdf_fisher(x, r.m, r.m_s, rho);
        }
    }
    throw DomainError("model_cdf: bad model");
}

} // namespace linkcalc::fitting
