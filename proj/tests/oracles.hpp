// Test-only oracles, independent of the library evaluation paths they check.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "linkcalc/quadrature.hpp"
#include "linkcalc/specfun.hpp"

namespace oracle {

// ln Gamma by upward recurrence into the asymptotic regime plus a Stirling
// series: Gamma(x) = Gamma(x+n) / prod_{k=0}^{n-1} (x+k), n = 50.
inline double ln_gamma_series(double x) {
    const int n = 50;
    double shift = 0.0;
    for (int k = 0; k < n; ++k) shift += std::log(x + k);
    double z = x + n;
    // Stirling with the first Bernoulli corrections
    double s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * 3.14159265358979323846);
    double zi = 1.0 / z;
    double z2 = zi * zi;
    s += zi * (1.0 / 12.0 + z2 * (-1.0 / 360.0 + z2 * (1.0 / 1260.0 - z2 / 1680.0)));
    return s - shift;
}

// complex log-gamma (Lanczos g=7); any 2*pi*i branch ambiguity cancels when
// sums of these are exponentiated, which is how the contour oracle uses it.
inline std::complex<double> clgamma(std::complex<double> z) {
    static const double c[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        const double pi = 3.14159265358979323846;
        return std::log(pi) - std::log(std::sin(pi * z)) - clgamma(1.0 - z);
    }
    z -= 1.0;
    std::complex<double> x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
    std::complex<double> t = z + 7.5;
    return 0.5 * std::log(2.0 * 3.14159265358979323846) + (z + 0.5) * std::log(t) - t +
           std::log(x);
}

// Mellin-Barnes contour evaluation of a Meijer G-function along Re s = c.
inline double meijer_mb(const linkcalc::specfun::MeijerGSpec& s, double x) {
    using std::complex;
    double lo = -1e300, hi = 1e300;
    for (int j = 0; j < s.m; ++j) lo = std::max(lo, -s.b_params[j]);
    for (int j = 0; j < s.n; ++j) hi = std::min(hi, 1.0 - s.a_params[j]);
    if (lo <= -1e200 && hi >= 1e200) { lo = -0.5; hi = 0.5; }
    else if (hi >= 1e200) hi = lo + 2.0;
    else if (lo <= -1e200) lo = hi - 2.0;
    double c = (lo < hi) ? lo + 0.5 * (hi - lo) : lo + 0.25;
    double decay = 1.5707963267948966 * (2.0 * (s.m + s.n) - s.p - s.q);
    double t_max = std::max(60.0, 90.0 / std::max(decay, 0.1));
    auto integrand = [&](double t) {
        complex<double> sv(c, t);
        complex<double> acc = -sv * std::log(x);
        for (int j = 0; j < s.m; ++j) acc += clgamma(s.b_params[j] + sv);
        for (int j = 0; j < s.n; ++j) acc += clgamma(1.0 - s.a_params[j] - sv);
        for (int j = s.m; j < s.q; ++j) acc -= clgamma(1.0 - s.b_params[j] - sv);
        for (int j = s.n; j < s.p; ++j) acc -= clgamma(s.a_params[j] + sv);
        return std::exp(acc).real();
    };
    linkcalc::quad::Options opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-16;
    opts.max_evals = 400000;
    double integral = linkcalc::quad::integrate(integrand, 0.0, t_max, opts);
    return integral / 3.14159265358979323846;
}

// direct power-series 2F1 after a Pfaff transform (oracle form)
inline double hyp2f1_pfaff_series(double a, double b, double c, double z, int terms) {
    double w = z / (z - 1.0);
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < terms; ++k) {
        term *= (a + k) * (c - b + k) / ((c + k) * (k + 1.0)) * w;
        sum += term;
    }
    return std::pow(1.0 - z, -a) * sum;
}

// infinite-series 1F1(a, 1, z) truncated at machine convergence
inline double hyp1f1_series(double a, double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 400; ++k) {
        term *= (a + k) / ((1.0 + k) * (k + 1.0)) * z;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

} // namespace oracle
