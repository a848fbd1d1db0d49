#include "doctest.h"

#include <cmath>

#include "linkcalc/mcsim.hpp"
#include "linkcalc/snr.hpp"

using namespace linkcalc;

namespace {

SnrDistribution make_dist(LinkKind kind, double m, double m_s, double gbar_db,
                          double c_param = 1.0) {
    SnrDistribution d;
    d.kind = kind;
    d.sr = shadowed_rician_from_physical(0.25, 2, 0.5);
    d.ru = fisher_f_normalized(m, m_s);
    d.gbar_sr = db_to_linear(gbar_db);
    d.gbar_ru = db_to_linear(gbar_db);
    d.relay = relay_from_c(
        kind == LinkKind::AF ? RelayScheme::FixedGainAF : RelayScheme::DF, c_param);
    return d;
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("S-R link statistics") {
    auto d = make_dist(LinkKind::SR, 1.1, 2.1, 0.0);
    CHECK(snr::cdf_sr(d, 0.0) == 0.0);
    CHECK(snr::cdf_sr(d, 1e4 * d.gbar_sr) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(snr::pdf_sr(d, 0.0) ==
          doctest::Approx(d.sr.alpha_sr / d.gbar_sr).epsilon(1e-13)); // only k=0 survives
    CHECK(snr::sf_sr(d, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    // asymptotic within 5% two decades below the mean SNR
    d.gbar_sr = db_to_linear(20.0);
    double g = 1e-2 * d.gbar_sr;
    CHECK(rel_gap(snr::cdf_sr_asy(d, g), snr::cdf_sr(d, g)) < 0.05);
    CHECK_THROWS_AS(snr::cdf_sr(d, -1.0), DomainError);
}

TEST_CASE("S-R pdf against a Monte Carlo histogram") {
    auto d = make_dist(LinkKind::SR, 1.1, 2.1, 0.0);
    mcsim::SimConfig cfg;
    cfg.n_samples = 10'000'000;
    cfg.seed = 2;
    cfg.n_workers = 2;
    auto xs = mcsim::sample_shadowed_rician_power(d.sr, cfg);
    double h = 0.02;
    std::int64_t count = 0;
    for (double x : xs)
        if (x > 1.0 - h && x < 1.0 + h) ++count;
    double density = static_cast<double>(count) / (cfg.n_samples * 2.0 * h);
    CHECK(rel_gap(density, snr::pdf_sr(d, 1.0)) < 0.02);
}

TEST_CASE("R-U link statistics") {
    // m=1, m_s=2: the CDF at gamma = gbar reduces to 1 - (1+1)^-2 = 0.75
    auto d = make_dist(LinkKind::RU, 1.0, 2.0, 13.0);
    CHECK(snr::cdf_ru(d, d.gbar_ru) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(snr::cdf_ru_asy(d, 0.01 * d.gbar_ru) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(snr::cdf_ru(d, 0.0) == 0.0);
    CHECK(snr::pdf_ru(d, 0.0) > 0.0); // finite at m = 1

    auto severe = make_dist(LinkKind::RU, 0.1721, 1.1211, 13.0);
    CHECK_THROWS_AS(snr::pdf_ru(severe, 0.0), DomainError);
    CHECK(snr::pdf_ru(severe, 1e-9) > 0.0);
}

TEST_CASE("R-U dual evaluations agree (incomplete beta, 2F1, Meijer-G)") {
    for (auto [m, ms] : {std::pair{1.07, 2.02}, {0.17, 1.12}, {1.1, 2.1}}) {
        auto d = make_dist(LinkKind::RU, m, ms, 17.0);
        for (int i = 0; i < 50; ++i) {
            double g = d.gbar_ru * std::pow(10.0, -2.0 + 4.0 * i / 49.0);
            double f_ib = snr::cdf_ru(d, g);
            double f_2f1 = snr::cdf_ru_2f1(d, g);
            double f_mg = snr::cdf_ru_meijer(d, g);
            CHECK(rel_gap(f_2f1, f_ib) < 1e-8);
            CHECK(rel_gap(f_mg, f_2f1) < 1e-8);
        }
    }
}

TEST_CASE("CDFs are monotone in [0,1] and match the density") {
    for (auto kind : {LinkKind::SR, LinkKind::RU, LinkKind::DF}) {
        auto d = make_dist(kind, 1.1, 2.1, 15.0);
        double prev = 0.0;
        for (int i = 0; i < 200; ++i) {
            double g = d.gbar_sr * std::pow(10.0, -3.0 + 5.0 * i / 199.0);
            double f = snr::cdf(d, g);
            CHECK(f >= prev - 1e-14);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            prev = f;
            double h = 1e-4 * std::max(g, 1.0);
            double deriv = (snr::cdf(d, g + h) - snr::cdf(d, g - h)) / (2.0 * h);
            CHECK(std::abs(deriv - snr::pdf(d, g)) < 1e-4);
        }
    }
}

TEST_CASE("survival functions complement the CDFs") {
    for (auto kind : {LinkKind::SR, LinkKind::RU, LinkKind::AF, LinkKind::DF}) {
        auto d = make_dist(kind, 1.1, 2.1, 10.0);
        for (double g : {0.1, 1.0, 10.0, 100.0}) {
            CHECK(snr::cdf(d, g) + snr::sf(d, g) == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("fixed-gain AF cascade CDF") {
    auto d = make_dist(LinkKind::AF, 1.1, 2.1, 20.0);
    CHECK(snr::cdf_af(d, 0.0) == 0.0);
    CHECK(snr::cdf_af(d, 1e5 * d.gbar_sr) == doctest::Approx(1.0).epsilon(1e-5));

    // self-check mode: quadrature and the Meijer-G closed sum must agree
    for (double mult : {0.3, 1.0, 3.0}) {
        CHECK_NOTHROW(snr::cdf_af(d, mult * db_to_linear(10.0), snr::AfMode::SelfCheck));
    }

    // AF dominance over the first hop, DF bound over both hops
    auto ddf = make_dist(LinkKind::DF, 1.1, 2.1, 20.0);
    for (double g : {0.5, 5.0, 50.0, 500.0}) {
        CHECK(snr::cdf_af(d, g) >= snr::cdf_sr(d, g) - 1e-12);
        double fdf = snr::cdf_df(ddf, g);
        CHECK(fdf >= snr::cdf_sr(ddf, g) - 1e-12);
        CHECK(fdf >= snr::cdf_ru(ddf, g) - 1e-12);
    }

    // degenerate C = 0 collapses the cascade onto the first hop
    auto d0 = make_dist(LinkKind::AF, 1.1, 2.1, 20.0, 0.0);
    for (double g : {0.5, 5.0, 50.0})
        CHECK(snr::cdf_af(d0, g) == doctest::Approx(snr::cdf_sr(d0, g)).epsilon(1e-9));
}

TEST_CASE("AF CDF against a 1e7-sample Monte Carlo estimate") {
    auto d = make_dist(LinkKind::AF, 1.1, 2.1, 20.0);
    double gth = db_to_linear(10.0);
    double p = snr::cdf_af(d, gth);
    mcsim::SimConfig cfg;
    cfg.n_samples = 10'000'000;
    cfg.seed = 3;
    cfg.n_workers = 2;
    auto xs = mcsim::sample_end_to_end(d, cfg);
    std::int64_t below = 0;
    for (double x : xs)
        if (x < gth) ++below;
    double phat = static_cast<double>(below) / cfg.n_samples;
    double sigma = std::sqrt(p * (1.0 - p) / cfg.n_samples);
    CHECK(std::abs(phat - p) < 3.0 * sigma);
}

TEST_CASE("DF CDF/PDF identities and Monte Carlo") {
    auto d = make_dist(LinkKind::DF, 1.1, 2.1, 20.0);
    // F1 = F2 = 1/2 gives F_DF = 3/4 by the product rule; find the half point
    // of each hop via bisection on the analytic CDFs
    auto invert = [&](auto&& f) {
        double lo = 0.0, hi = 1e6;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            (f(mid) < 0.5 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    double g1 = invert([&](double g) { return snr::cdf_sr(d, g); });
    double g2 = invert([&](double g) { return snr::cdf_ru(d, g); });
    SnrDistribution shifted = d;
    shifted.gbar_ru = d.gbar_ru * g1 / g2; // align the half points
    CHECK(snr::cdf_df(shifted, g1) == doctest::Approx(0.75).epsilon(1e-9));

    double gth = db_to_linear(10.0);
    double p = snr::cdf_df(d, gth);
    mcsim::SimConfig cfg;
    cfg.n_samples = 10'000'000;
    cfg.seed = 4;
    cfg.n_workers = 2;
    auto xs = mcsim::sample_end_to_end(d, cfg);
    std::int64_t below = 0;
    for (double x : xs)
        if (x < gth) ++below;
    double phat = static_cast<double>(below) / cfg.n_samples;
    double sigma = std::sqrt(p * (1.0 - p) / cfg.n_samples);
    CHECK(std::abs(phat - p) < 3.0 * sigma);

    // below the R-U support mass the DF CDF tracks the S-R hop
    SnrDistribution lop = d;
    lop.gbar_ru = 1e9 * d.gbar_ru;
    double g = 1e-2 * d.gbar_sr;
    CHECK(snr::cdf_df(lop, g) == doctest::Approx(snr::cdf_sr(lop, g)).epsilon(1e-4));
}

TEST_CASE("asymptotic CDFs converge monotonically toward the exact ones") {
    double gth = db_to_linear(10.0);
    for (auto kind : {LinkKind::SR, LinkKind::RU, LinkKind::AF, LinkKind::DF}) {
        double prev_gap = 1e9;
        for (double db : {20.0, 30.0, 40.0, 50.0}) {
            auto d = make_dist(kind, 1.1, 2.1, db);
            double exact = snr::cdf(d, gth);
            double asy = snr::cdf_asy(d, gth);
            double gap = rel_gap(asy, exact);
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
    }
}

TEST_CASE("AF asymptote rejects integer m in the pole set") {
    auto d = make_dist(LinkKind::AF, 1.0, 2.1, 30.0);
    CHECK_THROWS_AS(snr::cdf_af_asy(d, 1.0), DomainError);
    auto d2 = make_dist(LinkKind::AF, 2.0, 2.1, 30.0);
    CHECK_THROWS_AS(snr::cdf_af_asy(d2, 1.0), DomainError);
    auto ok = make_dist(LinkKind::AF, 2.5, 2.1, 30.0);
    CHECK_NOTHROW(snr::cdf_af_asy(ok, 1.0));
    CHECK(snr::cdf_af_asy(ok, 0.0) == 0.0);
}

TEST_CASE("no density is exposed for the AF cascade") {
    auto d = make_dist(LinkKind::AF, 1.1, 2.1, 20.0);
    CHECK_THROWS_AS(snr::pdf(d, 1.0), DomainError);
}
