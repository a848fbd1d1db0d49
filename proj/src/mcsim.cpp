#include "linkcalc/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "linkcalc/philox.hpp"

namespace linkcalc::mcsim {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kLn2 = 0.69314718055994530942;
constexpr std::int64_t kBlock = 1 << 16;

// Stream tags keep the per-hop substreams distinct and stable.
enum Stream : std::uint32_t { kStreamSr = 0x53520001, kStreamRu = 0x52550002 };

// Per-sample uniform source; antithetic samples mirror the stream.
struct Draw {
    Philox rng;
    bool flip;

    Draw(std::uint64_t seed, std::uint32_t stream, std::int64_t index, bool antithetic)
        : rng(seed, stream, static_cast<std::uint64_t>(index)),
          flip(antithetic && (index & 1)) {}

    double u() {
        double v = rng.uniform();
        return flip ? 1.0 - v : v;
    }

    // one Box-Muller pair
    void normal_pair(double& z0, double& z1) {
        double u1 = u(), u2 = u();
        double r = std::sqrt(-2.0 * std::log(u1));
        z0 = r * std::cos(kTwoPi * u2);
        z1 = r * std::sin(kTwoPi * u2);
    }

    double normal() {
        double z0, z1;
        normal_pair(z0, z1);
        return z0;
    }
};

// Marsaglia-Tsang for shape >= 1; shape < 1 boosted by U^(1/shape).
double gamma_variate(Draw& d, double shape) {
    if (shape < 1.0) {
        double u = d.u();
        return gamma_variate(d, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double k = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * k);
    for (;;) {
        double x = d.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) { (void)d.u(); continue; } // keep the draw count per trial fixed
        v = v * v * v;
        double u = d.u();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return k * v;
        if (std::log(u) < 0.5 * x2 + k * (1.0 - v + std::log(v))) return k * v;
    }
}

double shadowed_rician_power_one(Draw& d, const ShadowedRicianParams& p) {
    double a = 0.0;
    if (p.omega_sr > 0.0)
        a = std::sqrt(gamma_variate(d, static_cast<double>(p.gamma_s)) *
                      (p.omega_sr / p.gamma_s));
    double phi = kTwoPi * d.u();
    double z0, z1;
    d.normal_pair(z0, z1);
    double sb = std::sqrt(p.b_s);
    double re = a * std::cos(phi) + sb * z0;
    double im = a * std::sin(phi) + sb * z1;
    return re * re + im * im;
}

double fisher_f_power_one(Draw& d, const FisherFParams& p) {
    double g1 = gamma_variate(d, p.m);
    double g2 = gamma_variate(d, p.m_s);
    return (p.omega_m / p.omega_s) * (g1 / p.m) * (p.m_s / g2);
}

// Deterministic block-parallel runner: fn(block_begin, block_end) on disjoint
// index ranges; any thread may take any block.
template <typename Fn>
void run_blocks(std::int64_t n, int workers, Fn&& fn) {
    std::int64_t n_blocks = (n + kBlock - 1) / kBlock;
    int nw = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(workers, n_blocks)));
    if (nw == 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b)
            fn(b, b * kBlock, std::min(n, (b + 1) * kBlock));
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (;;) {
            std::int64_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            fn(b, b * kBlock, std::min(n, (b + 1) * kBlock));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int i = 0; i < nw; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
}

double end_to_end_one(const SnrDistribution& dist, const SimConfig& cfg, std::int64_t i) {
    switch (dist.kind) {
        case LinkKind::SR: {
            Draw d(cfg.seed, kStreamSr, i, cfg.antithetic);
            return dist.gbar_sr * shadowed_rician_power_one(d, dist.sr);
        }
        case LinkKind::RU: {
            Draw d(cfg.seed, kStreamRu, i, cfg.antithetic);
            return dist.gbar_ru * fisher_f_power_one(d, dist.ru);
        }
        case LinkKind::AF: {
            Draw ds(cfg.seed, kStreamSr, i, cfg.antithetic);
            Draw dr(cfg.seed, kStreamRu, i, cfg.antithetic);
            double gsr = dist.gbar_sr * shadowed_rician_power_one(ds, dist.sr);
            double gru = dist.gbar_ru * fisher_f_power_one(dr, dist.ru);
            double c = snr::effective_relay_c(dist);
            return c == 0.0 ? gsr : gsr * gru / (gru + c);
        }
        case LinkKind::DF: {
            Draw ds(cfg.seed, kStreamSr, i, cfg.antithetic);
            Draw dr(cfg.seed, kStreamRu, i, cfg.antithetic);
            double gsr = dist.gbar_sr * shadowed_rician_power_one(ds, dist.sr);
            double gru = dist.gbar_ru * fisher_f_power_one(dr, dist.ru);
            return std::min(gsr, gru);
        }
    }
    throw DomainError("sample_end_to_end: bad kind");
}

} // namespace

void SimConfig::validate() const {
    if (n_samples < 1) throw DomainError("SimConfig: n_samples must be >= 1");
    if (n_workers < 1) throw DomainError("SimConfig: n_workers must be >= 1");
}

double EmpiricalCdf::operator()(double x) const {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

EmpiricalCdf empirical_cdf(std::vector<double> samples) {
    if (samples.empty()) throw DomainError("empirical_cdf: need at least one sample");
    std::sort(samples.begin(), samples.end());
    return EmpiricalCdf{std::move(samples)};
}

std::vector<double> sample_shadowed_rician_power(const ShadowedRicianParams& p,
                                                 const SimConfig& cfg) {
    cfg.validate();
    std::vector<double> out(cfg.n_samples);
    run_blocks(cfg.n_samples, cfg.n_workers, [&](std::int64_t, std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i) {
            Draw d(cfg.seed, kStreamSr, i, cfg.antithetic);
            out[i] = shadowed_rician_power_one(d, p);
        }
    });
    return out;
}

std::vector<double> sample_fisher_f_power(const FisherFParams& p, const SimConfig& cfg) {
    cfg.validate();
    std::vector<double> out(cfg.n_samples);
    run_blocks(cfg.n_samples, cfg.n_workers, [&](std::int64_t, std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i) {
            Draw d(cfg.seed, kStreamRu, i, cfg.antithetic);
            out[i] = fisher_f_power_one(d, p);
        }
    });
    return out;
}

std::vector<double> sample_end_to_end(const SnrDistribution& dist, const SimConfig& cfg) {
    cfg.validate();
    std::vector<double> out(cfg.n_samples);
    run_blocks(cfg.n_samples, cfg.n_workers, [&](std::int64_t, std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i) out[i] = end_to_end_one(dist, cfg, i);
    });
    return out;
}

McMetrics mc_metrics(const SnrDistribution& dist, const QosSpec& qos, double gamma_th,
                     const SimConfig& cfg) {
    cfg.validate();
    qos.validate();
    if (cfg.n_samples < 10000)
        throw DomainError("mc_metrics: need n_samples >= 1e4");
    const double beta = qos.beta_norm();
    const double bt_over_ln2 = qos.bandwidth_hz * qos.duration_s / kLn2;

    struct Partial {
        double w = 0.0, w2 = 0.0, lg = 0.0, lg2 = 0.0;
        std::int64_t below = 0;
    };
    std::int64_t n_blocks = (cfg.n_samples + kBlock - 1) / kBlock;
    std::vector<Partial> parts(n_blocks);
    run_blocks(cfg.n_samples, cfg.n_workers,
               [&](std::int64_t blk, std::int64_t b, std::int64_t e) {
                   Partial acc;
                   for (std::int64_t i = b; i < e; ++i) {
                       double g = end_to_end_one(dist, cfg, i);
                       double lg = std::log1p(g);
                       double w = std::exp(-beta * lg);
                       acc.w += w;
                       acc.w2 += w * w;
                       acc.lg += lg;
                       acc.lg2 += lg * lg;
                       if (g < gamma_th) ++acc.below;
                   }
                   parts[blk] = acc;
               });
    // fixed-order reduction keeps results bit-identical across worker counts
    Partial tot;
    for (const auto& p : parts) {
        tot.w += p.w;
        tot.w2 += p.w2;
        tot.lg += p.lg;
        tot.lg2 += p.lg2;
        tot.below += p.below;
    }
    const double n = static_cast<double>(cfg.n_samples);
    McMetrics r;
    double mean_w = tot.w / n;
    double var_w = std::max(0.0, tot.w2 / n - mean_w * mean_w);
    r.ec_hat = -std::log(mean_w) / qos.theta;
    r.ec_se = std::sqrt(var_w / n) / (qos.theta * mean_w);
    double mean_lg = tot.lg / n;
    double var_lg = std::max(0.0, tot.lg2 / n - mean_lg * mean_lg);
    r.ergodic_hat = bt_over_ln2 * mean_lg;
    r.ergodic_se = bt_over_ln2 * std::sqrt(var_lg / n);
    r.p_out_hat = static_cast<double>(tot.below) / n;
    r.p_out_se = std::sqrt(std::max(0.0, r.p_out_hat * (1.0 - r.p_out_hat) / n));
    return r;
}

double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& cdf) {
    const auto& xs = emp.sorted;
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = cdf(xs[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_distance_interp(const EmpiricalCdf& emp, const std::function<double(double)>& cdf,
                          int nodes) {
    const auto& xs = emp.sorted;
    const std::size_t n = xs.size();
    if (nodes < 2 || static_cast<std::size_t>(nodes) >= n) return ks_distance(emp, cdf);
    std::vector<std::size_t> idx(nodes);
    std::vector<double> fv(nodes);
    for (int j = 0; j < nodes; ++j) {
        idx[j] = static_cast<std::size_t>(
            (static_cast<long double>(j) * (n - 1)) / (nodes - 1));
        fv[j] = cdf(xs[idx[j]]);
    }
    double d = 0.0;
    int j = 0;
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        while (j + 1 < nodes && idx[j + 1] < i) ++j;
        double f;
        if (i <= idx[0]) {
            f = fv[0];
        } else if (i >= idx[nodes - 1]) {
            f = fv[nodes - 1];
        } else {
            std::size_t a = idx[j], b = idx[j + 1];
            double xa = xs[a], xb = xs[b];
            double t = xb > xa ? (xs[i] - xa) / (xb - xa) : 0.0;
            f = fv[j] + t * (fv[j + 1] - fv[j]);
        }
        d = std::max(d, std::abs(f - static_cast<double>(i) / dn));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / dn - f));
    }
    return d;
}

} // namespace linkcalc::mcsim
