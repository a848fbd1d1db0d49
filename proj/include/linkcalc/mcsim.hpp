#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "linkcalc/snr.hpp"

namespace linkcalc::mcsim {

// Results depend only on (seed, n_samples); the worker count changes timing,
// never values.
struct SimConfig {
    std::int64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;
    int n_workers = 1;
    bool antithetic = false;

    void validate() const;
};

struct EmpiricalCdf {
    std::vector<double> sorted;

    // right-continuous step function: (# samples <= x) / n
    double operator()(double x) const;
    std::size_t size() const { return sorted.size(); }
};

EmpiricalCdf empirical_cdf(std::vector<double> samples);

// |h_SR|^2 draws: Nakagami-distributed LoS amplitude (power ~ Gamma with shape
// Gamma_s, mean omega_sr) plus circularly-symmetric complex Gaussian with
// total power 2 b_s.
std::vector<double> sample_shadowed_rician_power(const ShadowedRicianParams& p,
                                                 const SimConfig& cfg);

// |h_RU|^2 draws: (omega_m/omega_s) * (G1/m) / (G2/m_s) with independent
// gamma variates, the scaled-F construction.
std::vector<double> sample_fisher_f_power(const FisherFParams& p, const SimConfig& cfg);

// End-to-end SNR draws for any link kind (hop SNRs scaled by the gbar's and
// combined per the relay rule for AF/DF).
std::vector<double> sample_end_to_end(const SnrDistribution& d, const SimConfig& cfg);

struct McMetrics {
    double ec_hat = 0.0;      // bits per block
    double ec_se = 0.0;       // delta-method standard error
    double p_out_hat = 0.0;
    double p_out_se = 0.0;
    double ergodic_hat = 0.0; // bits per block
    double ergodic_se = 0.0;
};

McMetrics mc_metrics(const SnrDistribution& d, const QosSpec& qos, double gamma_th,
                     const SimConfig& cfg);

// Exact Kolmogorov-Smirnov distance: sup |F_emp - F| over the sample points.
double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& cdf);

// KS with the analytic CDF evaluated only at `nodes` quantile-spaced sample
// points and linearly interpolated in between; for expensive CDFs.
double ks_distance_interp(const EmpiricalCdf& emp, const std::function<double(double)>& cdf,
                          int nodes = 8192);

} // namespace linkcalc::mcsim
