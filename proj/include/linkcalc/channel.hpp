#pragma once

#include "linkcalc/errors.hpp"

namespace linkcalc {

double db_to_linear(double db);
double linear_to_db(double x);

// Satellite-hop shadowed-Rician fading. 2*b_s is the multipath power,
// gamma_s the (integer) Nakagami shadowing parameter, omega_sr the LoS mean
// power. alpha/beta/delta are the derived PDF coefficients.
struct ShadowedRicianParams {
    double b_s = 0.0;
    int gamma_s = 1;
    double omega_sr = 0.0;
    double alpha_sr = 0.0;
    double beta_sr = 0.0;
    double delta_sr = 0.0;
};

ShadowedRicianParams shadowed_rician_from_physical(double b_s, int gamma_s, double omega_sr);

// Ground-hop Fisher-Snedecor F composite fading. m is the multipath shape,
// m_s > 1 the shadowing shape; omega = omega_m * omega_s is the mean power of
// the composite envelope squared.
struct FisherFParams {
    double m = 1.0;
    double m_s = 2.0;
    double omega_m = 1.0;
    double omega_s = 1.0;
    double omega = 1.0;
};

// Power-normalized parameters: omega_s^2 = m_s/(m_s-1), omega_m = 1/omega_s,
// so E[|h|^2] = 1.
FisherFParams fisher_f_normalized(double m, double m_s);

// General construction with explicit omega_m / omega_s.
FisherFParams fisher_f_params(double m, double m_s, double omega_m, double omega_s);

struct LinkBudget {
    double p_s_dbm = 20.0;
    double p_r_dbm = 20.0;
    double sigma2_sr_dbm = -94.0;
    double sigma2_ru_dbm = -94.0;
    double d_sr_m = 765e3;
    double altitude_uav_m = 150.0;
    double d_u_m = 150.0;
    double wavelength_m = 0.2;
    double alpha_p = 2.0;
    double elevation_deg = 45.0;
    double s_curve_a = 4.88; // suburban defaults
    double s_curve_b = 0.43;
    double eta_los_db = 0.1;
    double eta_nlos_db = 20.0;

    void validate() const;
};

enum class RelayScheme { FixedGainAF, DF };

// For fixed-gain AF exactly one of (gain_g, c_param) is configured; the other
// follows from C = P_r / (G^2 sigma2_SR) given the link budget. In semi-blind
// mode C is instead tied to the first-hop statistics, C = 1 + gbar_SR (the
// value implied by G^2 = P_r / (P_s E|h_SR|^2 + sigma2_SR)).
struct RelayConfig {
    RelayScheme scheme = RelayScheme::DF;
    double gain_g = 1.0;
    double c_param = 1.0;
    bool c_is_source = true;
    bool semi_blind = true;
};

RelayConfig relay_from_c(RelayScheme scheme, double c_param);
RelayConfig relay_from_gain(RelayScheme scheme, double gain_g, const LinkBudget& lb);
RelayConfig relay_semi_blind(RelayScheme scheme);

// Statistical-QoS exponent plus the block parameters that normalize it.
struct QosSpec {
    double theta = 1e-2;       // 1/bits
    double bandwidth_hz = 20e6;
    double duration_s = 2e-3;

    double beta_norm() const;
    void validate() const;
};

// Free-space S-R path loss, linear: lambda / (4 pi d^alpha_p).
double sr_path_loss(const LinkBudget& lb);

// Elevation-angle S-curve LoS probability.
double los_probability(double theta_deg, double a, double b);

// Probability-weighted R-U path loss in dB (FSPL + excess loss per group).
double ru_path_loss_db(const LinkBudget& lb);

// Average SNR gamma_bar = P / (sigma^2 * PL), all converted to linear scale.
double average_snr(double p_dbm, double sigma2_dbm, double pl_linear);

} // namespace linkcalc
