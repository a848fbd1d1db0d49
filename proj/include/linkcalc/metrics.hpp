#pragma once

#include "linkcalc/snr.hpp"

namespace linkcalc::metrics {

enum class EcMethod { Quadrature, ClosedForm, Asymptotic, MonteCarlo };

// Effective capacity in bits per block of duration T (divide by T for bit/s).
struct EcResult {
    double value_bits = 0.0;
    EcMethod method = EcMethod::Quadrature;
    QosSpec qos;
};

struct OutageReport {
    double p_out = 0.0;
    double p_out_asy = 0.0;
    double gamma_th = 0.0;
    double diversity_order = 0.0;
};

struct EpsCapacityResult {
    double c_eps = 0.0;   // bits per channel use
    double epsilon = 0.0;
    int iterations = 0;
};

// E_C(theta) = -(1/theta) ln E[(1+gamma)^-beta] by adaptive quadrature of the
// kind-appropriate integral form (density form where a density exists, the
// CDF/survival by-parts form for AF).
EcResult effective_capacity(const SnrDistribution& d, const QosSpec& qos);

// Closed forms of the per-hop effective capacities (Meijer-G based).
EcResult ec_sr_closed(const SnrDistribution& d, const QosSpec& qos);
EcResult ec_ru_closed(const SnrDistribution& d, const QosSpec& qos);

// Fixed-gain AF: M1 in closed form, M2 by 1-D quadrature of the cascade
// integral against (1+gamma)^-(beta+1).
EcResult ec_af(const SnrDistribution& d, const QosSpec& qos);
EcResult ec_af_asy(const SnrDistribution& d, const QosSpec& qos);

// DF: N from the hop closed forms, N1 and the incomplete-gamma part of N2 by
// quadrature, the 2F1 part of N2 in closed form.
EcResult ec_df(const SnrDistribution& d, const QosSpec& qos);
EcResult ec_df_asy(const SnrDistribution& d, const QosSpec& qos);

// The M1 integral of the AF decomposition. `g3123_form` evaluates the
// paper-layout G^{3,1}_{2,3} bracket instead of the equivalent
// better-conditioned G^{2,1}_{1,2} route used in production.
double ec_af_m1_value(const SnrDistribution& d, const QosSpec& qos, bool g3123_form = false);

// The M2 integral of the AF decomposition; `closed_l` switches the pointwise
// evaluation of L between quadrature (default) and the Meijer-G sum.
double ec_af_m2_integral(const SnrDistribution& d, const QosSpec& qos, bool closed_l = false);

// Outage probability at gamma_th plus the diversity order estimated as the
// two-point log-log slope of the dominant asymptotic term between 40 and
// 50 dB average SNR (the hop SNR ratio of `d` is preserved across the sweep).
OutageReport outage(const SnrDistribution& d, double gamma_th);

// Largest rate C with F(2^C - 1) <= epsilon, solved by bracketed
// bisection/secant iteration on the epsilon-residual.
EpsCapacityResult eps_outage_capacity(const SnrDistribution& d, double epsilon);

} // namespace linkcalc::metrics
