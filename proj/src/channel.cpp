#include "linkcalc/channel.hpp"

#include <cmath>
#include <string>

namespace linkcalc {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;
} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

ShadowedRicianParams shadowed_rician_from_physical(double b_s, int gamma_s, double omega_sr) {
    if (!(b_s > 0.0)) throw DomainError("shadowed_rician: b_s must be > 0");
    if (gamma_s < 1) throw DomainError("shadowed_rician: gamma_s must be an integer >= 1");
    if (!(omega_sr >= 0.0)) throw DomainError("shadowed_rician: omega_sr must be >= 0");
    ShadowedRicianParams p;
    p.b_s = b_s;
    p.gamma_s = gamma_s;
    p.omega_sr = omega_sr;
    const double tb = 2.0 * b_s;
    const double denom = tb * gamma_s + omega_sr;
    p.alpha_sr = (1.0 / tb) * std::pow(tb * gamma_s / denom, gamma_s);
    p.beta_sr = 1.0 / tb;
    p.delta_sr = omega_sr / (tb * denom);
    if (!(p.beta_sr - p.delta_sr > 0.0))
        throw DomainError("shadowed_rician: beta_sr - delta_sr must be > 0");
    return p;
}

FisherFParams fisher_f_params(double m, double m_s, double omega_m, double omega_s) {
    if (!(m > 0.0)) throw DomainError("fisher_f: m must be > 0");
    if (!(m_s > 1.0)) throw DomainError("fisher_f: m_s must be > 1");
    if (!(omega_m > 0.0) || !(omega_s > 0.0))
        throw DomainError("fisher_f: omega_m and omega_s must be > 0");
    FisherFParams p;
    p.m = m;
    p.m_s = m_s;
    p.omega_m = omega_m;
    p.omega_s = omega_s;
    p.omega = omega_m * omega_s;
    return p;
}

FisherFParams fisher_f_normalized(double m, double m_s) {
    if (!(m_s > 1.0)) throw DomainError("fisher_f_normalized: m_s must be > 1");
    double omega_s = std::sqrt(m_s / (m_s - 1.0));
    return fisher_f_params(m, m_s, 1.0 / omega_s, omega_s);
}

void LinkBudget::validate() const {
    if (!(d_sr_m > 0.0) || !(d_u_m > 0.0) || !(wavelength_m > 0.0))
        throw DomainError("LinkBudget: distances and wavelength must be > 0");
    if (!(alpha_p >= 2.0 && alpha_p <= 4.0))
        throw DomainError("LinkBudget: alpha_p must lie in [2,4]");
    if (!(elevation_deg > 0.0 && elevation_deg <= 90.0))
        throw DomainError("LinkBudget: elevation_deg must lie in (0, 90]");
    if (!(s_curve_a > 0.0) || !(s_curve_b > 0.0))
        throw DomainError("LinkBudget: S-curve parameters must be > 0");
    if (!std::isfinite(p_s_dbm) || !std::isfinite(p_r_dbm) ||
        !std::isfinite(sigma2_sr_dbm) || !std::isfinite(sigma2_ru_dbm))
        throw DomainError("LinkBudget: powers must be finite");
}

RelayConfig relay_from_c(RelayScheme scheme, double c_param) {
    // c = 0 is the degenerate no-noise-amplification case (gamma_AF = gamma_SR)
    if (!(c_param >= 0.0)) throw DomainError("relay: C must be >= 0");
    RelayConfig r;
    r.scheme = scheme;
    r.c_param = c_param;
    r.c_is_source = true;
    r.semi_blind = false;
    r.gain_g = 0.0; // derived lazily when a budget is known
    return r;
}

RelayConfig relay_from_gain(RelayScheme scheme, double gain_g, const LinkBudget& lb) {
    if (!(gain_g > 0.0)) throw DomainError("relay: G must be > 0");
    RelayConfig r;
    r.scheme = scheme;
    r.gain_g = gain_g;
    r.c_is_source = false;
    r.semi_blind = false;
    double p_r = db_to_linear(lb.p_r_dbm);       // mW
    double sigma2 = db_to_linear(lb.sigma2_sr_dbm);
    r.c_param = p_r / (gain_g * gain_g * sigma2);
    return r;
}

RelayConfig relay_semi_blind(RelayScheme scheme) {
    RelayConfig r;
    r.scheme = scheme;
    r.semi_blind = true;
    return r;
}

double QosSpec::beta_norm() const { return bandwidth_hz * duration_s * theta / kLn2; }

void QosSpec::validate() const {
    if (!(theta > 0.0)) throw DomainError("QosSpec: theta must be > 0");
    if (!(bandwidth_hz > 0.0) || !(duration_s > 0.0))
        throw DomainError("QosSpec: B and T must be > 0");
    if (!(beta_norm() > 0.0)) throw DomainError("QosSpec: beta must be > 0");
}

double sr_path_loss(const LinkBudget& lb) {
    if (!(lb.d_sr_m > 0.0) || !(lb.wavelength_m > 0.0))
        throw DomainError("sr_path_loss: d_sr and lambda must be > 0");
    return lb.wavelength_m / (4.0 * kPi * std::pow(lb.d_sr_m, lb.alpha_p));
}

double los_probability(double theta_deg, double a, double b) {
    if (!(theta_deg > 0.0 && theta_deg <= 90.0))
        throw DomainError("los_probability: elevation must lie in (0, 90]");
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("los_probability: S-curve parameters must be > 0");
    return 1.0 / (1.0 + a * std::exp(-b * theta_deg + a * b));
}

double ru_path_loss_db(const LinkBudget& lb) {
    if (!(lb.d_u_m > 0.0) || !(lb.wavelength_m > 0.0))
        throw DomainError("ru_path_loss_db: d_u and lambda must be > 0");
    double fspl = 20.0 * std::log10(4.0 * kPi * lb.d_u_m / lb.wavelength_m);
    double p_los = los_probability(lb.elevation_deg, lb.s_curve_a, lb.s_curve_b);
    double pl_los = fspl + lb.eta_los_db;
    double pl_nlos = fspl + lb.eta_nlos_db;
    return pl_los * p_los + pl_nlos * (1.0 - p_los);
}

double average_snr(double p_dbm, double sigma2_dbm, double pl_linear) {
    if (!std::isfinite(p_dbm) || !std::isfinite(sigma2_dbm) || !(pl_linear > 0.0))
        throw DomainError("average_snr: inputs must be finite, path loss > 0");
    return db_to_linear(p_dbm) / (db_to_linear(sigma2_dbm) * pl_linear);
}

} // namespace linkcalc
