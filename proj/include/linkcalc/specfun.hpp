#pragma once

#include <vector>

#include "linkcalc/policy.hpp"

namespace linkcalc::specfun {

// --- gamma family -----------------------------------------------------------

// ln Gamma(x) for x > 0.
double ln_gamma(double x);

// Gamma(x) for non-pole real x (negative non-integers allowed).
double gamma_fn(double x);

// log|Gamma(x)| together with the sign of Gamma(x). sign == 0 marks a pole.
struct SignedLog {
    double log_abs;
    int sign;
};
SignedLog gammaln_signed(double x);

// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
double pochhammer(double a, int k);

// Lower/upper incomplete gamma, unregularized and regularized.
double lower_inc_gamma(double a, double x);
double upper_inc_gamma(double a, double x);
double reg_lower_inc_gamma(double a, double x); // P(a,x)
double reg_upper_inc_gamma(double a, double x); // Q(a,x)

// --- beta family -------------------------------------------------------------

double ln_beta(double a, double b);
double beta_fn(double a, double b);

// Regularized incomplete beta I_x(a,b).
double reg_inc_beta(double x, double a, double b);

// --- hypergeometric ----------------------------------------------------------

// 1F1(gamma_s, 1, z) for positive integer gamma_s via the finite sum
// e^z sum_{k=0}^{gamma_s-1} (-1)^k (1-gamma_s)_k z^k / (k!)^2.
double kummer_1f1_finite(int gamma_s, double z);

// Gauss 2F1(a,b;c;z) for z <= 0 or |z| < 1. Negative z of any magnitude is
// handled through the Pfaff / 1/z connection formulas; z near 1 through the
// 1-z connection formula, with parameter perturbation in the logarithmic
// cases.
double gauss_2f1(double a, double b, double c, double z,
                 const EvalPolicy& policy = {});

// --- Meijer G ----------------------------------------------------------------

struct MeijerGSpec {
    int m = 0, n = 0, p = 0, q = 0;
    std::vector<double> a_params;
    std::vector<double> b_params;
};

// G^{m,n}_{p,q}(x | a; b) for x > 0, restricted to the parameter classes the
// closed forms in this project need. Evaluated by the residue (Slater-type)
// series over the poles of prod Gamma(b_j - s); coincident poles are handled
// by symmetric +/- pole_perturbation of the offending parameters, averaging
// the two evaluations.
double meijer_g(const MeijerGSpec& spec, double x, const EvalPolicy& policy = {});

// Same, returned as a signed logarithm so callers can combine factors that
// would overflow a double (large-beta effective-capacity closed forms).
SignedLog meijer_g_ln(const MeijerGSpec& spec, double x, const EvalPolicy& policy = {});

} // namespace linkcalc::specfun
