#pragma once

#include "linkcalc/channel.hpp"
#include "linkcalc/policy.hpp"

namespace linkcalc {

enum class LinkKind { SR, RU, AF, DF };

// A fully-parameterized end-to-end SNR distribution. For SR/RU kinds only the
// corresponding hop parameters are used; AF additionally uses relay.c_param.
struct SnrDistribution {
    LinkKind kind = LinkKind::DF;
    ShadowedRicianParams sr;
    FisherFParams ru;
    double gbar_sr = 1.0;
    double gbar_ru = 1.0;
    RelayConfig relay;
    EvalPolicy policy;
};

namespace snr {

// --- S-R link (shadowed-Rician) ---

double pdf_sr(const SnrDistribution& d, double gamma);
double cdf_sr(const SnrDistribution& d, double gamma);
double sf_sr(const SnrDistribution& d, double gamma);
double cdf_sr_asy(const SnrDistribution& d, double gamma);

// --- R-U link (Fisher-Snedecor F) ---

double pdf_ru(const SnrDistribution& d, double gamma);
double cdf_ru(const SnrDistribution& d, double gamma);        // incomplete-beta form
double cdf_ru_2f1(const SnrDistribution& d, double gamma);    // Gauss-2F1 form
double cdf_ru_meijer(const SnrDistribution& d, double gamma); // Meijer-G form
double sf_ru(const SnrDistribution& d, double gamma);
double cdf_ru_asy(const SnrDistribution& d, double gamma);

// --- fixed-gain AF relay ---

// The fixed-gain constant actually used: relay.c_param, or 1 + gbar_SR in
// semi-blind mode.
double effective_relay_c(const SnrDistribution& d);

// The cascade integral L(gamma) = int_0^inf F_RU(C gamma / x) f_SR(x+gamma) dx,
// by adaptive quadrature (production path) and by the closed Meijer-G sum
// (self-check path).
double af_integral_L(const SnrDistribution& d, double gamma);
double af_integral_L_closed(const SnrDistribution& d, double gamma);

enum class AfMode { Quadrature, SelfCheck };

// F_AF = F_SR + L. In SelfCheck mode both evaluations of L must agree to
// 1e-6 relative or a ConsistencyError is thrown; the quadrature value is
// returned either way.
double cdf_af(const SnrDistribution& d, double gamma, AfMode mode = AfMode::Quadrature);
double sf_af(const SnrDistribution& d, double gamma);
double cdf_af_asy(const SnrDistribution& d, double gamma);

// --- DF relay ---

double cdf_df(const SnrDistribution& d, double gamma);
double pdf_df(const SnrDistribution& d, double gamma);
double sf_df(const SnrDistribution& d, double gamma);
double cdf_df_asy(const SnrDistribution& d, double gamma);

// --- kind dispatch ---

double cdf(const SnrDistribution& d, double gamma);
double sf(const SnrDistribution& d, double gamma);
double cdf_asy(const SnrDistribution& d, double gamma);
double pdf(const SnrDistribution& d, double gamma); // DomainError for AF

// Leading high-SNR power law of the asymptotic CDF: the single dominant term
// used for diversity-order estimation (k=0 term for SR/AF, the slower-decaying
// hop for DF).
double cdf_asy_dominant(const SnrDistribution& d, double gamma);

} // namespace snr
} // namespace linkcalc
