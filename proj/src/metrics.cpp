#include "linkcalc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "linkcalc/quadrature.hpp"
#include "linkcalc/specfun.hpp"

namespace linkcalc::metrics {
namespace {

using specfun::gammaln_signed;
using specfun::ln_gamma;
using specfun::SignedLog;

double weight(double gamma, double beta) { return std::exp(-beta * std::log1p(gamma)); }

std::vector<double> ec_breakpoints(double beta, double gbar) {
    double b = std::max(beta, 1e-8);
    return {0.1 / b, 1.0 / b, 10.0 / b, 100.0 / b,
            0.01 * gbar, 0.1 * gbar, gbar, 10.0 * gbar};
}

double logsumexp(const std::vector<double>& xs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - m);
    return m + std::log(acc);
}

quad::Options ec_quad_opts() {
    quad::Options o;
    o.rel_tol = 1e-11;
    o.abs_tol = 1e-300;
    o.max_evals = 200000;
    return o;
}

// E[(1+gamma)^-beta] for the S-R hop by density-form quadrature.
double moment_sr(const SnrDistribution& d, double beta) {
    auto f = [&](double g) { return snr::pdf_sr(d, g) * weight(g, beta); };
    return quad::integrate_semi_infinite(f, ec_breakpoints(beta, d.gbar_sr), ec_quad_opts());
}

// Same for the R-U hop; the gamma^(m-1) origin singularity (m < 1) is handled
// by a power-weighted first panel.
double moment_ru_weighted(const SnrDistribution& d, double beta,
                          const std::function<double(double)>& extra) {
    const auto& p = d.ru;
    double m1 = p.m * p.omega_s;
    double m2 = p.m_s * p.omega_m * d.gbar_ru;
    double ln_pref = p.m * std::log(m1) + p.m_s * std::log(m2) - specfun::ln_beta(p.m, p.m_s);
    auto reduced = [&](double g) {
        // f_ru(g) / g^(m-1), times the weight and any extra factor
        double v = std::exp(ln_pref - (p.m + p.m_s) * std::log(m1 * g + m2) -
                            beta * std::log1p(g));
        return extra ? v * extra(g) : v;
    };
    auto opts = ec_quad_opts();
    if (p.m >= 1.0) {
        auto f = [&](double g) {
            return g == 0.0 ? 0.0 : reduced(g) * std::pow(g, p.m - 1.0);
        };
        return quad::integrate_semi_infinite(f, ec_breakpoints(beta, d.gbar_ru), opts);
    }
    double g0 = std::min({1.0, 0.5 * m2 / m1, 1.0 / std::max(beta, 1.0)});
    double head = quad::integrate_power_weighted(reduced, p.m, g0, opts);
    auto f = [&](double g) { return reduced(g) * std::pow(g, p.m - 1.0); };
    auto bp = ec_breakpoints(beta, d.gbar_ru);
    bp.push_back(g0);
    std::vector<double> bp2;
    for (double b : bp)
        if (b > g0) bp2.push_back(b);
    quad::Options tail_opts = opts;
    std::vector<std::pair<double, double>> seeds;
    double lo = g0;
    std::sort(bp2.begin(), bp2.end());
    for (double b : bp2) {
        seeds.emplace_back(lo, b);
        lo = b;
    }
    // tail from the last breakpoint
    auto tail_fn = [&](double t) {
        double om = 1.0 - t;
        double scale = std::max(lo, 1.0);
        double x = lo + scale * t / om;
        double v = f(x);
        return v == 0.0 ? 0.0 : v * scale / (om * om);
    };
    double mid = 0.0;
    for (auto [a, b] : seeds) mid += quad::integrate(f, a, b, tail_opts);
    double tail = quad::integrate(tail_fn, 0.0, 1.0, tail_opts);
    return head + mid + tail;
}

double moment_ru(const SnrDistribution& d, double beta) {
    return moment_ru_weighted(d, beta, nullptr);
}

double moment_df(const SnrDistribution& d, double beta) {
    auto f1 = [&](double g) {
        double v = snr::pdf_sr(d, g);
        return v == 0.0 ? 0.0 : v * snr::sf_ru(d, g) * weight(g, beta);
    };
    double i1 = quad::integrate_semi_infinite(
        f1, ec_breakpoints(beta, std::min(d.gbar_sr, d.gbar_ru)), ec_quad_opts());
    double i2 = moment_ru_weighted(d, beta, [&](double g) { return snr::sf_sr(d, g); });
    return i1 + i2;
}

double moment_af(const SnrDistribution& d, double beta) {
    auto bp = ec_breakpoints(beta, std::min(d.gbar_sr, d.gbar_ru));
    quad::Options opts;
    opts.rel_tol = 1e-9; // each evaluation is itself an adaptive integral
    opts.abs_tol = 1e-300;
    opts.max_evals = 200000;
    if (beta >= 1.0) {
        auto f = [&](double g) {
            return snr::cdf_af(d, g) * weight(g, beta + 1.0);
        };
        return beta * quad::integrate_semi_infinite(f, bp, opts);
    }
    auto f = [&](double g) {
        double s = snr::sf_af(d, g);
        return s == 0.0 ? 0.0 : s * weight(g, beta + 1.0);
    };
    return 1.0 - beta * quad::integrate_semi_infinite(f, bp, opts);
}

double ec_from_log_moment(double log_moment, const QosSpec& qos) {
    return -log_moment / qos.theta;
}

EcResult make_result(double log_moment, const QosSpec& qos, EcMethod method) {
    EcResult r;
    r.value_bits = ec_from_log_moment(log_moment, qos);
    r.method = method;
    r.qos = qos;
    return r;
}

struct SrSeriesLite {
    double alpha, bmd, rate, gbar;
    std::vector<double> c;
};

SrSeriesLite sr_lite(const SnrDistribution& d) {
    SrSeriesLite s;
    s.alpha = d.sr.alpha_sr;
    s.bmd = d.sr.beta_sr - d.sr.delta_sr;
    s.rate = s.bmd / d.gbar_sr;
    s.gbar = d.gbar_sr;
    s.c.resize(d.sr.gamma_s);
    double ck = 1.0;
    for (int k = 0; k < d.sr.gamma_s; ++k) {
        s.c[k] = ck;
        double kk = k + 1.0;
        ck *= (d.sr.gamma_s - 1.0 - k) * d.sr.delta_sr / (kk * kk);
    }
    return s;
}

} // namespace

EcResult effective_capacity(const SnrDistribution& d, const QosSpec& qos) {
    qos.validate();
    double beta = qos.beta_norm();
    double m = 0.0;
    switch (d.kind) {
        case LinkKind::SR: m = moment_sr(d, beta); break;
        case LinkKind::RU: m = moment_ru(d, beta); break;
        case LinkKind::DF: m = moment_df(d, beta); break;
        case LinkKind::AF: m = moment_af(d, beta); break;
    }
    if (!(m > 0.0) || !std::isfinite(m))
        throw QuadratureError("effective_capacity: moment quadrature failed");
    return make_result(std::log(m), qos, EcMethod::Quadrature);
}

EcResult ec_sr_closed(const SnrDistribution& d, const QosSpec& qos) {
    qos.validate();
    double beta = qos.beta_norm();
    auto s = sr_lite(d);
    try {
        std::vector<double> logs;
        for (std::size_t k = 0; k < s.c.size(); ++k) {
            if (s.c[k] == 0.0) continue;
            specfun::MeijerGSpec spec;
            spec.m = 2; spec.n = 1; spec.p = 1; spec.q = 2;
            spec.a_params = {-static_cast<double>(k)};
            spec.b_params = {beta - k - 1.0, 0.0};
            SignedLog g = specfun::meijer_g_ln(spec, s.rate, d.policy);
            if (g.sign <= 0)
                throw ConvergenceError("ec_sr_closed: non-positive G term");
            logs.push_back(std::log(s.alpha * s.c[k]) - (k + 1.0) * std::log(s.gbar) -
                           ln_gamma(beta) + g.log_abs);
        }
        return make_result(logsumexp(logs), qos, EcMethod::ClosedForm);
    } catch (const ConvergenceError&) {
        // outside the residue series' usable region (rate >~ 1 with large
        // beta); the defining integral is exact and cheap there
        return make_result(std::log(moment_sr(d, beta)), qos, EcMethod::ClosedForm);
    }
}

EcResult ec_ru_closed(const SnrDistribution& d, const QosSpec& qos) {
    qos.validate();
    double beta = qos.beta_norm();
    const auto& p = d.ru;
    double c = p.m * p.omega_s / (p.m_s * p.omega_m * d.gbar_ru);
    double log_m = 0.0;
    try {
        specfun::MeijerGSpec spec;
        spec.m = 2; spec.n = 2; spec.p = 2; spec.q = 2;
        spec.a_params = {1.0, 1.0 - p.m_s};
        spec.b_params = {beta, p.m};
        SignedLog g = specfun::meijer_g_ln(spec, c, d.policy);
        if (g.sign <= 0)
            throw ConvergenceError("ec_ru_closed: non-positive G value");
        log_m = g.log_abs - ln_gamma(p.m) - ln_gamma(p.m_s) - ln_gamma(beta);
    } catch (const ConvergenceError&) {
        // equivalent hypergeometric form (the G-function collapses to it by
        // the Gauss-integral identity); stable for c near or above 1
        double f21 = specfun::gauss_2f1(p.m + p.m_s, p.m, p.m + p.m_s + beta, 1.0 - c,
                                        d.policy);
        log_m = p.m * std::log(c) + specfun::ln_beta(p.m, p.m_s + beta) -
                specfun::ln_beta(p.m, p.m_s) + std::log(f21);
    }
    return make_result(log_m, qos, EcMethod::ClosedForm);
}

namespace {

// M1 = int_0^inf F_SR(g) (1+g)^-(beta+1) dg in closed form. The bracket
// Gamma(k+1)/beta - G^{3,1}_{2,3}(rate | 0,1; beta,0,k+1)/Gamma(beta+1)
// equals rate^{k+1} G^{2,1}_{1,2}(rate | -k; beta-k-1, 0)/Gamma(beta+1)
// identically; the latter has no coincident poles and stays well conditioned
// when the two closed pieces cancel to many digits at large beta.
double ec_af_m1_bracket(const SnrDistribution& d, double beta, int k, bool g3123) {
    auto s = sr_lite(d);
    if (g3123) {
        specfun::MeijerGSpec spec;
        spec.m = 3; spec.n = 1; spec.p = 2; spec.q = 3;
        spec.a_params = {0.0, 1.0};
        spec.b_params = {beta, 0.0, k + 1.0};
        SignedLog g = specfun::meijer_g_ln(spec, s.rate, d.policy);
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return fact / beta - g.sign * std::exp(g.log_abs - ln_gamma(beta + 1.0));
    }
    specfun::MeijerGSpec spec;
    spec.m = 2; spec.n = 1; spec.p = 1; spec.q = 2;
    spec.a_params = {-static_cast<double>(k)};
    spec.b_params = {beta - k - 1.0, 0.0};
    SignedLog g = specfun::meijer_g_ln(spec, s.rate, d.policy);
    return g.sign *
           std::exp((k + 1.0) * std::log(s.rate) + g.log_abs - ln_gamma(beta + 1.0));
}

double ec_af_m1_closed(const SnrDistribution& d, double beta, bool g3123 = false) {
    auto s = sr_lite(d);
    double total = 0.0;
    for (std::size_t k = 0; k < s.c.size(); ++k) {
        if (s.c[k] == 0.0) continue;
        total += s.alpha * s.c[k] * std::pow(s.bmd, -(k + 1.0)) *
                 ec_af_m1_bracket(d, beta, static_cast<int>(k), g3123);
    }
    return total;
}

} // namespace

double ec_af_m1_value(const SnrDistribution& d, const QosSpec& qos, bool g3123_form) {
    qos.validate();
    return ec_af_m1_closed(d, qos.beta_norm(), g3123_form);
}

double ec_af_m2_integral(const SnrDistribution& d, const QosSpec& qos, bool closed_l) {
    double beta = qos.beta_norm();
    auto bp = ec_breakpoints(beta, std::min(d.gbar_sr, d.gbar_ru));
    quad::Options opts;
    opts.rel_tol = 1e-9;
    opts.abs_tol = 1e-300;
    opts.max_evals = 200000;
    auto f = [&](double g) {
        if (g == 0.0) return 0.0;
        double l;
        if (closed_l) {
            try {
                l = snr::af_integral_L_closed(d, g);
            } catch (const ConvergenceError&) {
                // far tail where the closed sum cancels below double
                // precision and L itself is negligible
                l = snr::af_integral_L(d, g);
            }
        } else {
            l = snr::af_integral_L(d, g);
        }
        return l == 0.0 ? 0.0 : l * weight(g, beta + 1.0);
    };
    return quad::integrate_semi_infinite(f, bp, opts);
}

EcResult ec_af(const SnrDistribution& d, const QosSpec& qos) {
    qos.validate();
    double beta = qos.beta_norm();
    double m1 = ec_af_m1_closed(d, beta);
    double m2 = ec_af_m2_integral(d, qos, false);
    double m = beta * (m1 + m2);
    if (!(m > 0.0) || !std::isfinite(m))
        throw QuadratureError("ec_af: moment not positive/finite");
    return make_result(std::log(m), qos, EcMethod::ClosedForm);
}

EcResult ec_af_asy(const SnrDistribution& d, const QosSpec& qos) {
    qos.validate();
    double beta = qos.beta_norm();
    auto s = sr_lite(d);
    const auto& p = d.ru;
    if (!(beta > static_cast<double>(s.c.size())))
        throw DomainError("ec_af_asy: requires beta > Gamma_s for B(k+2, beta-k-1)");
    double ratio = p.m * p.omega_s * snr::effective_relay_c(d) / (p.m_s * p.omega_m * d.gbar_ru);
    // the e_k brackets alternate in sign once Gamma(m-k-1) goes negative, so
    // accumulate signed terms around the largest magnitude
    std::vector<std::pair<double, int>> terms;
    double max_log = -std::numeric_limits<double>::infinity();
    double rk = ratio;
    for (std::size_t k = 0; k < s.c.size(); ++k) {
        double a = p.m - k - 1.0;
        if (a < 0.5 && std::abs(a - std::round(a)) < 1e-9)
            throw DomainError("ec_af_asy: Gamma(m-k-1) pole");
        auto ga = gammaln_signed(a);
        double corr = ga.sign * std::exp(ga.log_abs + ln_gamma(p.m_s + k + 1.0) -
                                         ln_gamma(p.m) - ln_gamma(p.m_s));
        double ek = 1.0 + corr * rk; // bracket of e_k
        if (ek != 0.0 && s.c[k] > 0.0) {
            double lg = std::log(s.alpha * s.c[k]) - std::log(k + 1.0) -
                        (k + 1.0) * std::log(s.gbar) + std::log(std::abs(ek)) +
                        ln_gamma(k + 2.0) + ln_gamma(beta - k - 1.0) - ln_gamma(beta + 1.0);
            terms.emplace_back(lg, ek > 0.0 ? 1 : -1);
            max_log = std::max(max_log, lg);
        }
        rk *= ratio;
    }
    double acc = 0.0;
    for (auto [lg, sign] : terms) acc += sign * std::exp(lg - max_log);
    if (!(acc > 0.0))
        throw DomainError("ec_af_asy: asymptotic moment not positive");
    double log_m = std::log(beta) + max_log + std::log(acc);
    return make_result(log_m, qos, EcMethod::Asymptotic);
}

namespace {

// N2's quadrature piece: int g^(m-1) (1+g)^-beta (1+cg)^-(m+m_s) Gamma(k+1, rate g) dg
double n2_gamma_integral(const SnrDistribution& d, double beta, int k) {
    const auto& p = d.ru;
    auto s = sr_lite(d);
    double c = p.m * p.omega_s / (p.m_s * p.omega_m * d.gbar_ru);
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    auto reduced = [&](double g) {
        double q = specfun::reg_upper_inc_gamma(k + 1.0, s.rate * g);
        if (q == 0.0) return 0.0;
        return fact * q *
               std::exp(-beta * std::log1p(g) - (p.m + p.m_s) * std::log1p(c * g));
    };
    auto opts = ec_quad_opts();
    double g0 = std::min({1.0, 0.5 / c, 1.0 / std::max(beta, 1.0), 1.0 / s.rate});
    std::vector<double> bp = {10.0 / std::max(beta, 1e-8), 1.0 / s.rate, 10.0 / s.rate,
                              1.0 / c, d.gbar_ru};
    if (p.m >= 1.0) {
        auto f = [&](double g) {
            return g == 0.0 ? 0.0 : reduced(g) * std::pow(g, p.m - 1.0);
        };
        return quad::integrate_semi_infinite(f, bp, opts);
    }
    double head = quad::integrate_power_weighted(reduced, p.m, g0, opts);
    auto f = [&](double g) { return reduced(g) * std::pow(g, p.m - 1.0); };
    auto shifted = [&](double x) { return f(g0 + x); };
    std::vector<double> bp2;
    for (double b : bp)
        if (b > g0) bp2.push_back(b - g0);
    double rest = quad::integrate_semi_infinite(shifted, bp2, opts);
    return head + rest;
}

} // namespace

EcResult ec_df(const SnrDistribution& d, const QosSpec& qos) {
    qos.validate();
    double beta = qos.beta_norm();
    const auto& p = d.ru;
    auto s = sr_lite(d);
    double c = p.m * p.omega_s / (p.m_s * p.omega_m * d.gbar_ru);

    // N: sum of the hop moments, from their closed forms
    double n = std::exp(-qos.theta * ec_sr_closed(d, qos).value_bits) +
               std::exp(-qos.theta * ec_ru_closed(d, qos).value_bits);

    // N1 by quadrature of its explicit integrand
    auto f1 = [&](double g) {
        double v = snr::pdf_sr(d, g);
        if (v == 0.0) return 0.0;
        double fru = snr::cdf_ru(d, g);
        return fru == 0.0 ? 0.0 : v * fru * weight(g, beta);
    };
    double n1 = quad::integrate_semi_infinite(
        f1, ec_breakpoints(beta, std::min(d.gbar_sr, d.gbar_ru)), ec_quad_opts());

    // N2: closed 2F1 term minus the incomplete-gamma quadrature term, per k
    double ln_b = specfun::ln_beta(p.m, p.m_s);
    double f21 = specfun::gauss_2f1(p.m + p.m_s, p.m, p.m + p.m_s + beta, 1.0 - c, d.policy);
    double bmb = std::exp(specfun::ln_beta(p.m, p.m_s + beta));
    double n2 = 0.0;
    double fact = 1.0;
    for (std::size_t k = 0; k < s.c.size(); ++k) {
        if (k > 0) fact *= static_cast<double>(k);
        if (s.c[k] == 0.0) continue;
        double gk = s.alpha * s.c[k] * std::exp(p.m * std::log(c) - ln_b) *
                    std::pow(s.bmd, -(k + 1.0));
        double closed = fact * bmb * f21;
        double quadpart = n2_gamma_integral(d, beta, static_cast<int>(k));
        n2 += gk * (closed - quadpart);
    }

    double m = n - n1 - n2;
    if (!(m > 0.0) || !std::isfinite(m))
        throw QuadratureError("ec_df: moment not positive/finite");
    return make_result(std::log(m), qos, EcMethod::ClosedForm);
}

EcResult ec_df_asy(const SnrDistribution& d, const QosSpec& qos) {
    qos.validate();
    double beta = qos.beta_norm();
    auto s = sr_lite(d);
    const auto& p = d.ru;
    if (!(beta > p.m))
        throw DomainError("ec_df_asy: requires beta > m");
    if (!(beta > static_cast<double>(s.c.size())))
        throw DomainError("ec_df_asy: requires beta > Gamma_s");
    double c = p.m * p.omega_s / (p.m_s * p.omega_m * d.gbar_ru);
    std::vector<double> logs;
    for (std::size_t k = 0; k < s.c.size(); ++k) {
        if (s.c[k] == 0.0) continue;
        logs.push_back(std::log(s.alpha * s.c[k]) - std::log(k + 1.0) -
                       (k + 1.0) * std::log(s.gbar) + ln_gamma(k + 2.0) +
                       ln_gamma(beta - k - 1.0) - ln_gamma(beta + 1.0));
    }
    logs.push_back(ln_gamma(beta - p.m) + ln_gamma(p.m + p.m_s) - ln_gamma(beta + 1.0) -
                   ln_gamma(p.m_s) + p.m * std::log(c));
    double log_m = std::log(beta) + logsumexp(logs);
    return make_result(log_m, qos, EcMethod::Asymptotic);
}

OutageReport outage(const SnrDistribution& d, double gamma_th) {
    if (!(gamma_th > 0.0)) throw DomainError("outage: gamma_th must be > 0");
    OutageReport r;
    r.gamma_th = gamma_th;
    r.p_out = snr::cdf(d, gamma_th);
    r.p_out_asy = snr::cdf_asy(d, gamma_th);
    double lambda = d.gbar_ru / d.gbar_sr;
    SnrDistribution d40 = d, d50 = d;
    d40.gbar_sr = 1e4;
    d40.gbar_ru = lambda * 1e4;
    d50.gbar_sr = 1e5;
    d50.gbar_ru = lambda * 1e5;
    double f40 = snr::cdf_asy_dominant(d40, gamma_th);
    double f50 = snr::cdf_asy_dominant(d50, gamma_th);
    r.diversity_order = std::log10(f40 / f50);
    return r;
}

EpsCapacityResult eps_outage_capacity(const SnrDistribution& d, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw DomainError("eps_outage_capacity: epsilon must lie in (0,1)");
    auto residual = [&](double rate) {
        double g = std::expm1(rate * 0.69314718055994530942);
        return snr::cdf(d, g) - epsilon;
    };
    double lo = 0.0;
    double f_lo = -epsilon;
    double hi = std::log2(1.0 + std::max(d.gbar_sr, d.gbar_ru) * 1e3);
    double f_hi = residual(hi);
    int expansions = 0;
    while (f_hi < 0.0) {
        if (++expansions > 60) throw BracketError("eps_outage_capacity: bracket expansion failed");
        hi *= 2.0;
        f_hi = residual(hi);
    }
    EpsCapacityResult r;
    r.epsilon = epsilon;
    // bisection interleaved with secant steps: the secant accelerates near the
    // root, the forced bisection every other step guarantees bracket collapse
    // (a pure false-position crawl stalls when f is tiny on one side)
    double x = 0.5 * (lo + hi), fx = 0.0;
    for (int it = 0; it < 300; ++it) {
        ++r.iterations;
        fx = residual(x);
        if (std::abs(fx) <= 1e-10) break;
        if (fx > 0.0) {
            hi = x;
            f_hi = fx;
        } else {
            lo = x;
            f_lo = fx;
        }
        if (hi - lo < 1e-16 * std::max(1.0, hi)) break;
        if (it % 2 == 0) {
            x = 0.5 * (lo + hi);
        } else {
            double denom = f_hi - f_lo;
            double sec = denom != 0.0 ? lo - f_lo * (hi - lo) / denom : 0.5 * (lo + hi);
            double w = hi - lo;
            x = (sec > lo + 0.01 * w && sec < hi - 0.01 * w) ? sec : 0.5 * (lo + hi);
        }
    }
    if (std::abs(fx) > 1e-10)
        throw ConvergenceError("eps_outage_capacity: residual tolerance not reached");
    r.c_eps = x;
    return r;
}

} // namespace linkcalc::metrics
