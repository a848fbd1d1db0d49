#include "linkcalc/validate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "linkcalc/mcsim.hpp"
#include "linkcalc/metrics.hpp"
#include "linkcalc/quadrature.hpp"

namespace linkcalc {
namespace {

struct Reporter {
    std::ostringstream out;
    int passed = 0;
    int total = 0;

    void check(const std::string& name, double value, double tol) {
        bool ok = std::isfinite(value) && value <= tol;
        ++total;
        if (ok) ++passed;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s %-28s value=%.6g tol=%.6g\n",
                      ok ? "PASS" : "FAIL", name.c_str(), value, tol);
        out << buf;
    }
};

const char* kind_name(LinkKind k) {
    switch (k) {
        case LinkKind::SR: return "sr";
        case LinkKind::RU: return "ru";
        case LinkKind::AF: return "af";
        case LinkKind::DF: return "df";
    }
    return "?";
}

} // namespace

ValidateOutcome run_validation(const Scenario& sc, const ValidateOptions& opts) {
    Reporter rep;
    const double gth = sc.gamma_th_linear();

    // 1. density normalizations by quadrature
    {
        auto d = sc.distribution(LinkKind::SR);
        auto f = [&](double g) { return snr::pdf_sr(d, g); };
        double i = quad::integrate_semi_infinite(f, {d.gbar_sr, 10.0 * d.gbar_sr}, {});
        rep.check("sr_pdf_normalization", std::abs(i - 1.0), 1e-8);

        auto dr = sc.distribution(LinkKind::RU);
        double i2;
        if (dr.ru.m >= 1.0) {
            auto f2 = [&](double g) { return snr::pdf_ru(dr, g); };
            i2 = quad::integrate_semi_infinite(f2, {dr.gbar_ru, 10.0 * dr.gbar_ru}, {});
        } else {
            auto f2 = [&](double g) { return g > 0.0 ? snr::pdf_ru(dr, g) : 0.0; };
            double head = quad::integrate_power_weighted(
                [&](double g) { return snr::pdf_ru(dr, g) * std::pow(g, 1.0 - dr.ru.m); },
                dr.ru.m, 0.01 * dr.gbar_ru, {});
            double tail = quad::integrate_semi_infinite(
                [&](double g) {
                    double x = g + 0.01 * dr.gbar_ru;
                    return f2(x);
                },
                {dr.gbar_ru, 10.0 * dr.gbar_ru}, {});
            i2 = head + tail;
        }
        rep.check("ru_pdf_normalization", std::abs(i2 - 1.0), 1e-8);

        rep.check("sr_cdf_limit", std::abs(snr::cdf_sr(d, 1e4 * d.gbar_sr) - 1.0), 1e-6);
        rep.check("sr_survival_at_zero", std::abs(snr::sf_sr(d, 0.0) - 1.0), 1e-12);
    }

    // 2. dual evaluations of the R-U CDF
    {
        auto d = sc.distribution(LinkKind::RU);
        double worst12 = 0.0, worst2m = 0.0;
        for (int i = 0; i < 50; ++i) {
            double g = d.gbar_ru * std::pow(10.0, -2.0 + 4.0 * i / 49.0);
            double fb = snr::cdf_ru(d, g);
            double f2 = snr::cdf_ru_2f1(d, g);
            double fm = snr::cdf_ru_meijer(d, g);
            worst12 = std::max(worst12, std::abs(fb - f2) / std::max(fb, 1e-300));
            worst2m = std::max(worst2m, std::abs(f2 - fm) / std::max(f2, 1e-300));
        }
        rep.check("cdf_ru_incbeta_vs_2f1", worst12, 1e-8);
        rep.check("cdf_ru_2f1_vs_meijer", worst2m, 1e-8);
    }

    // 3. AF cascade integral: quadrature vs Meijer-G closed form
    {
        auto d = sc.distribution(LinkKind::AF);
        double worst = 0.0;
        for (double mult : {0.5, 1.0, 3.0}) {
            double g = mult * gth;
            double lq = snr::af_integral_L(d, g);
            double lc = snr::af_integral_L_closed(d, g);
            worst = std::max(worst, std::abs(lq - lc) / std::max(std::abs(lq), 1e-300));
        }
        rep.check("af_L_quad_vs_closed", worst, 1e-6);
    }

    // 4. closed-form vs quadrature effective capacity
    {
        auto dsr = sc.distribution(LinkKind::SR);
        auto dru = sc.distribution(LinkKind::RU);
        QosSpec q = sc.qos;
        double e1 = metrics::effective_capacity(dsr, q).value_bits;
        double c1 = metrics::ec_sr_closed(dsr, q).value_bits;
        rep.check("ec_sr_closed_vs_quad", std::abs(e1 - c1) / std::abs(e1), 1e-6);
        double e2 = metrics::effective_capacity(dru, q).value_bits;
        double c2 = metrics::ec_ru_closed(dru, q).value_bits;
        rep.check("ec_ru_closed_vs_quad", std::abs(e2 - c2) / std::abs(e2), 1e-6);
    }

    // 5. Kolmogorov-Smirnov, analytic vs sampled, per link kind
    for (LinkKind k : {LinkKind::SR, LinkKind::RU, LinkKind::AF, LinkKind::DF}) {
        auto d = sc.distribution(k);
        mcsim::SimConfig cfg;
        cfg.n_samples = opts.mc_samples;
        cfg.seed = opts.seed;
        cfg.n_workers = opts.workers;
        auto emp = mcsim::empirical_cdf(mcsim::sample_end_to_end(d, cfg));
        double ks = mcsim::ks_distance_interp(emp, [&](double g) { return snr::cdf(d, g); });
        rep.check(std::string("ks_") + kind_name(k), ks, opts.ks_tol);
    }

    // 6. outage probability vs Monte Carlo (3-sigma binomial band)
    for (LinkKind k : {LinkKind::SR, LinkKind::RU, LinkKind::AF, LinkKind::DF}) {
        auto d = sc.distribution(k);
        mcsim::SimConfig cfg;
        cfg.n_samples = opts.mc_samples;
        cfg.seed = opts.seed + 1;
        cfg.n_workers = opts.workers;
        auto mc = mcsim::mc_metrics(d, sc.qos, gth, cfg);
        double p = snr::cdf(d, gth);
        double band = 3.0 * std::sqrt(std::max(p * (1.0 - p) / cfg.n_samples, 1e-30)) + 1e-9;
        rep.check(std::string("outage_mc_") + kind_name(k), std::abs(mc.p_out_hat - p), band);
    }

    // 7. effective capacity vs Monte Carlo (DF, 4-sigma delta-method band)
    {
        auto d = sc.distribution(LinkKind::DF);
        mcsim::SimConfig cfg;
        cfg.n_samples = opts.mc_samples;
        cfg.seed = opts.seed + 2;
        cfg.n_workers = opts.workers;
        auto mc = mcsim::mc_metrics(d, sc.qos, gth, cfg);
        double ec = metrics::effective_capacity(d, sc.qos).value_bits;
        rep.check("ec_mc_df", std::abs(mc.ec_hat - ec), 4.0 * mc.ec_se + 1e-9 * std::abs(ec));
    }

    // 8. eps-outage root residual
    {
        auto d = sc.distribution(LinkKind::DF);
        double worst = 0.0;
        for (double eps : {1e-3, 1e-1}) {
            auto r = metrics::eps_outage_capacity(d, eps);
            double g = std::expm1(r.c_eps * 0.69314718055994530942);
            worst = std::max(worst, std::abs(snr::cdf(d, g) - eps));
        }
        rep.check("eps_capacity_residual", worst, 1e-10);
    }

    // 9. sampler determinism across worker counts
    {
        auto d = sc.distribution(LinkKind::DF);
        mcsim::SimConfig a, b;
        a.n_samples = b.n_samples = 200000;
        a.seed = b.seed = opts.seed + 3;
        a.n_workers = 1;
        b.n_workers = std::max(opts.workers, 4);
        auto va = mcsim::sample_end_to_end(d, a);
        auto vb = mcsim::sample_end_to_end(d, b);
        double diff = 0.0;
        for (std::size_t i = 0; i < va.size(); ++i)
            if (va[i] != vb[i]) diff += 1.0;
        rep.check("sampler_worker_determinism", diff, 0.0);
    }

    ValidateOutcome out;
    out.passed = rep.passed;
    out.total = rep.total;
    out.ok = rep.passed == rep.total;
    char tail[64];
    std::snprintf(tail, sizeof tail, "RESULT: %s (%d/%d)\n", out.ok ? "PASS" : "FAIL",
                  rep.passed, rep.total);
    out.report = rep.out.str() + tail;
    return out;
}

} // namespace linkcalc
