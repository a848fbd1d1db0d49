#include "linkcalc/snr.hpp"

#include <array>
#include <cmath>

#include "linkcalc/quadrature.hpp"
#include "linkcalc/specfun.hpp"

namespace linkcalc::snr {
namespace {

using specfun::gamma_fn;
using specfun::ln_gamma;

constexpr int kMaxGammaS = 64;

void check_gamma_arg(double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw DomainError("snr: gamma must be finite and >= 0");
}

// Finite-series data for the shadowed-Rician hop: coefficients
// c_k = (-1)^k (1-Gamma_s)_k delta^k / (k!)^2 (all non-negative for integer
// Gamma_s) plus the decay rate (beta-delta)/gbar.
struct SrSeries {
    double alpha;
    double rate;      // (beta - delta) / gbar
    double bmd;       // beta - delta
    double gbar;
    int n;
    std::array<double, kMaxGammaS> c;
};

SrSeries sr_series(const SnrDistribution& d) {
    const auto& p = d.sr;
    if (p.gamma_s > kMaxGammaS) throw DomainError("snr: gamma_s too large");
    if (!(d.gbar_sr > 0.0)) throw DomainError("snr: gbar_sr must be > 0");
    SrSeries s;
    s.alpha = p.alpha_sr;
    s.bmd = p.beta_sr - p.delta_sr;
    s.rate = s.bmd / d.gbar_sr;
    s.gbar = d.gbar_sr;
    s.n = p.gamma_s;
    double ck = 1.0;
    for (int k = 0; k < s.n; ++k) {
        s.c[k] = ck;
        double kk = k + 1.0;
        ck *= (p.gamma_s - 1.0 - k) * p.delta_sr / (kk * kk);
    }
    return s;
}

struct RuScale {
    double m1;   // m * omega_s
    double m2;   // m_s * omega_m * gbar
    double m, m_s;
    double ln_b; // ln B(m, m_s)
};

RuScale ru_scale(const SnrDistribution& d) {
    const auto& p = d.ru;
    if (!(d.gbar_ru > 0.0)) throw DomainError("snr: gbar_ru must be > 0");
    RuScale r;
    r.m = p.m;
    r.m_s = p.m_s;
    r.m1 = p.m * p.omega_s;
    r.m2 = p.m_s * p.omega_m * d.gbar_ru;
    r.ln_b = specfun::ln_beta(p.m, p.m_s);
    return r;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

// --- S-R link -----------------------------------------------------------------

double pdf_sr(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    auto s = sr_series(d);
    double u = gamma / s.gbar;
    double poly = 0.0, uk = 1.0;
    for (int k = 0; k < s.n; ++k) {
        poly += s.c[k] * uk;
        uk *= u;
    }
    return s.alpha / s.gbar * std::exp(-s.bmd * u) * poly;
}

double cdf_sr(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    auto s = sr_series(d);
    double x = s.rate * gamma;
    double sum = 0.0, pw = s.bmd;
    for (int k = 0; k < s.n; ++k) {
        sum += s.c[k] * factorial(k) / pw * specfun::reg_lower_inc_gamma(k + 1.0, x);
        pw *= s.bmd;
    }
    return s.alpha * sum;
}

double sf_sr(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    auto s = sr_series(d);
    double x = s.rate * gamma;
    double sum = 0.0, pw = s.bmd;
    for (int k = 0; k < s.n; ++k) {
        sum += s.c[k] * factorial(k) / pw * specfun::reg_upper_inc_gamma(k + 1.0, x);
        pw *= s.bmd;
    }
    return s.alpha * sum;
}

double cdf_sr_asy(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    auto s = sr_series(d);
    double u = gamma / s.gbar;
    double sum = 0.0, uk = u;
    for (int k = 0; k < s.n; ++k) {
        sum += s.c[k] / (k + 1.0) * uk;
        uk *= u;
    }
    return s.alpha * sum;
}

// --- R-U link -----------------------------------------------------------------

double pdf_ru(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    auto r = ru_scale(d);
    if (gamma == 0.0) {
        if (r.m < 1.0)
            throw DomainError("pdf_ru: density diverges at gamma=0 for m < 1");
        if (r.m > 1.0) return 0.0;
        return r.m1 / (std::exp(r.ln_b) * r.m2);
    }
    double ln_f = r.m * std::log(r.m1) + r.m_s * std::log(r.m2) +
                  (r.m - 1.0) * std::log(gamma) - r.ln_b -
                  (r.m + r.m_s) * std::log(r.m1 * gamma + r.m2);
    return std::exp(ln_f);
}

double cdf_ru(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    auto r = ru_scale(d);
    double x = r.m1 * gamma / (r.m1 * gamma + r.m2);
    return specfun::reg_inc_beta(x, r.m, r.m_s);
}

double sf_ru(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    auto r = ru_scale(d);
    double xc = r.m2 / (r.m1 * gamma + r.m2);
    return specfun::reg_inc_beta(xc, r.m_s, r.m);
}

double cdf_ru_2f1(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    if (gamma == 0.0) return 0.0;
    auto r = ru_scale(d);
    double big_x = r.m1 * gamma / r.m2;
    double f21 = specfun::gauss_2f1(r.m + r.m_s, r.m, r.m + 1.0, -big_x, d.policy);
    return std::exp(r.m * std::log(big_x) - r.ln_b) * f21 / r.m;
}

double cdf_ru_meijer(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    if (gamma == 0.0) return 0.0;
    auto r = ru_scale(d);
    specfun::MeijerGSpec spec;
    spec.m = 2; spec.n = 1; spec.p = 2; spec.q = 2;
    spec.a_params = {1.0 - r.m, 1.0};
    spec.b_params = {r.m_s, 0.0};
    double g = specfun::meijer_g(spec, r.m2 / (r.m1 * gamma), d.policy);
    return g / (gamma_fn(r.m) * gamma_fn(r.m_s));
}

double cdf_ru_asy(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    if (gamma == 0.0) return 0.0;
    auto r = ru_scale(d);
    double big_x = r.m1 * gamma / r.m2;
    return std::exp(r.m * std::log(big_x) - r.ln_b) / r.m;
}

// --- fixed-gain AF relay --------------------------------------------------------

namespace {

double relay_c(const SnrDistribution& d) {
    if (d.relay.scheme != RelayScheme::FixedGainAF)
        throw DomainError("snr: AF statistics need a FixedGainAF relay config");
    if (d.relay.semi_blind) return 1.0 + d.gbar_sr;
    if (!(d.relay.c_param >= 0.0)) throw DomainError("snr: relay C must be >= 0");
    return d.relay.c_param;
}

// Shared kernel for L (with the hop-RU CDF) and the AF survival integral
// (with the hop-RU survival function).
template <typename RuFn>
double af_cascade_integral(const SnrDistribution& d, double gamma, RuFn&& ru_fn) {
    const double c = relay_c(d);
    auto s = sr_series(d);
    auto r = ru_scale(d);
    if (gamma == 0.0) return 0.0;
    // f_SR(x + gamma) decays on scale 1/rate; the RU argument C gamma/x crosses
    // its own bulk near x_t.
    double x_t = c * gamma * r.m1 / r.m2;
    double x_s = 1.0 / s.rate;
    auto integrand = [&](double x) {
        double y = c * gamma / x;
        double w = pdf_sr(d, x + gamma);
        return w == 0.0 ? 0.0 : ru_fn(y) * w;
    };
    quad::Options opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-280;
    opts.max_evals = 100000;
    std::vector<double> bp = {0.1 * x_t, x_t, 10.0 * x_t, 0.1 * x_s, x_s, 10.0 * x_s};
    return quad::integrate_semi_infinite(integrand, bp, opts);
}

} // namespace

double effective_relay_c(const SnrDistribution& d) { return relay_c(d); }

double af_integral_L(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    auto r = ru_scale(d);
    return af_cascade_integral(d, gamma, [r](double y) {
        double x = r.m1 * y / (r.m1 * y + r.m2);
        return specfun::reg_inc_beta(x, r.m, r.m_s);
    });
}

double af_integral_L_closed(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    const double c = relay_c(d);
    if (gamma == 0.0) return 0.0;
    auto s = sr_series(d);
    auto r = ru_scale(d);
    // log of the Lambda prefactor; the e^{-rate gamma} factor offsets G values
    // that individually overflow a double at large gamma, so the whole sum is
    // accumulated as signed logs
    double ln_lambda = std::log(s.alpha) - s.rate * gamma -
                       specfun::ln_gamma(r.m) - specfun::ln_gamma(r.m_s);
    // argument of the G-function, independent of k and i
    double w = r.m2 * s.gbar / (s.bmd * r.m1 * c * gamma);
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, int>> terms;
    for (int k = 0; k < s.n; ++k) {
        double binom = 1.0;
        for (int i = 0; i <= k; ++i) {
            specfun::MeijerGSpec spec;
            spec.m = 2; spec.n = 2; spec.p = 3; spec.q = 2;
            spec.a_params = {-static_cast<double>(i), 1.0 - r.m, 1.0};
            spec.b_params = {r.m_s, 0.0};
            auto g = specfun::meijer_g_ln(spec, w, d.policy);
            if (g.sign == 0 || s.c[k] == 0.0) {
                binom *= static_cast<double>(k - i) / (i + 1.0);
                continue;
            }
            double lt = ln_lambda + std::log(s.c[k]) - (k + 1.0) * std::log(s.gbar) +
                        std::log(binom) - (i + 1.0) * std::log(s.rate) +
                        (k - i) * std::log(gamma) + g.log_abs;
            terms.emplace_back(lt, g.sign);
            max_log = std::max(max_log, lt);
            binom *= static_cast<double>(k - i) / (i + 1.0);
        }
    }
    if (terms.empty() || max_log == -std::numeric_limits<double>::infinity()) return 0.0;
    double acc = 0.0;
    for (auto [lt, sign] : terms) acc += sign * std::exp(lt - max_log);
    return acc * std::exp(max_log);
}

double cdf_af(const SnrDistribution& d, double gamma, AfMode mode) {
    check_gamma_arg(gamma);
    double lq = af_integral_L(d, gamma);
    if (mode == AfMode::SelfCheck) {
        bool evaluable = true;
        double lc = 0.0;
        try {
            lc = af_integral_L_closed(d, gamma);
        } catch (const ConvergenceError&) {
            evaluable = false; // closed sum cancels below precision here
        }
        double scale = std::max(std::abs(lq), std::abs(lc));
        if (evaluable && std::abs(lq - lc) > 1e-6 * scale + 1e-15)
            throw ConsistencyError("cdf_af: quadrature and Meijer-G evaluations of L disagree");
    }
    return cdf_sr(d, gamma) + lq;
}

double sf_af(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    if (gamma == 0.0) return 1.0;
    auto r = ru_scale(d);
    return af_cascade_integral(d, gamma, [r](double y) {
        double xc = r.m2 / (r.m1 * y + r.m2);
        return specfun::reg_inc_beta(xc, r.m_s, r.m);
    });
}

double cdf_af_asy(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    const double c = relay_c(d);
    auto s = sr_series(d);
    auto r = ru_scale(d);
    double ratio = r.m1 * c / r.m2; // m omega_s C / (m_s omega_m gbar_ru)
    double u = gamma / s.gbar;
    double sum = 0.0, uk = u, rk = ratio;
    for (int k = 0; k < s.n; ++k) {
        double a = r.m - k - 1.0;
        if (a < 0.5 && std::abs(a - std::round(a)) < 1e-9)
            throw DomainError("cdf_af_asy: Gamma(m-k-1) pole; m must not be an integer in [1, Gamma_s]");
        auto ga = specfun::gammaln_signed(a);
        double corr = ga.sign * std::exp(ga.log_abs + ln_gamma(r.m_s + k + 1.0) -
                                         ln_gamma(r.m) - ln_gamma(r.m_s));
        sum += s.c[k] / (k + 1.0) * uk * (1.0 + corr * rk);
        uk *= u;
        rk *= ratio;
    }
    return s.alpha * sum;
}

// --- DF relay -------------------------------------------------------------------

double cdf_df(const SnrDistribution& d, double gamma) {
    double f1 = cdf_sr(d, gamma);
    double f2 = cdf_ru(d, gamma);
    return f1 + f2 - f1 * f2;
}

double sf_df(const SnrDistribution& d, double gamma) {
    return sf_sr(d, gamma) * sf_ru(d, gamma);
}

double pdf_df(const SnrDistribution& d, double gamma) {
    return pdf_sr(d, gamma) * sf_ru(d, gamma) + pdf_ru(d, gamma) * sf_sr(d, gamma);
}

double cdf_df_asy(const SnrDistribution& d, double gamma) {
    return cdf_sr_asy(d, gamma) + cdf_ru_asy(d, gamma);
}

// --- dispatch -------------------------------------------------------------------

double cdf(const SnrDistribution& d, double gamma) {
    switch (d.kind) {
        case LinkKind::SR: return cdf_sr(d, gamma);
        case LinkKind::RU: return cdf_ru(d, gamma);
        case LinkKind::AF: return cdf_af(d, gamma);
        case LinkKind::DF: return cdf_df(d, gamma);
    }
    throw DomainError("cdf: bad kind");
}

double sf(const SnrDistribution& d, double gamma) {
    switch (d.kind) {
        case LinkKind::SR: return sf_sr(d, gamma);
        case LinkKind::RU: return sf_ru(d, gamma);
        case LinkKind::AF: return sf_af(d, gamma);
        case LinkKind::DF: return sf_df(d, gamma);
    }
    throw DomainError("sf: bad kind");
}

double cdf_asy(const SnrDistribution& d, double gamma) {
    switch (d.kind) {
        case LinkKind::SR: return cdf_sr_asy(d, gamma);
        case LinkKind::RU: return cdf_ru_asy(d, gamma);
        case LinkKind::AF: return cdf_af_asy(d, gamma);
        case LinkKind::DF: return cdf_df_asy(d, gamma);
    }
    throw DomainError("cdf_asy: bad kind");
}

double pdf(const SnrDistribution& d, double gamma) {
    switch (d.kind) {
        case LinkKind::SR: return pdf_sr(d, gamma);
        case LinkKind::RU: return pdf_ru(d, gamma);
        case LinkKind::AF:
            throw DomainError("pdf: no closed density implemented for fixed-gain AF");
        case LinkKind::DF: return pdf_df(d, gamma);
    }
    throw DomainError("pdf: bad kind");
}

double cdf_asy_dominant(const SnrDistribution& d, double gamma) {
    check_gamma_arg(gamma);
    auto sr_leading = [&] {
        auto s = sr_series(d);
        return s.alpha * s.c[0] * gamma / s.gbar;
    };
    switch (d.kind) {
        case LinkKind::SR: return sr_leading();
        case LinkKind::RU: return cdf_ru_asy(d, gamma);
        case LinkKind::AF:
            // for a fixed relay constant the bracket correction of the k=0
            // term vanishes as gbar grows, leaving the first-hop power law
            return sr_leading();
        case LinkKind::DF:
            // the slower-decaying hop dominates as gbar -> infinity
            if (d.ru.m < 1.0) return cdf_ru_asy(d, gamma);
            if (d.ru.m > 1.0) return sr_leading();
            return sr_leading() + cdf_ru_asy(d, gamma);
    }
    throw DomainError("cdf_asy_dominant: bad kind");
}

} // namespace linkcalc::snr
