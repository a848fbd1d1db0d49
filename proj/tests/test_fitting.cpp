#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "linkcalc/channel.hpp"
#include "linkcalc/fitting.hpp"
#include "linkcalc/mcsim.hpp"
#include "linkcalc/philox.hpp"

using namespace linkcalc;
using fitting::FitModel;

namespace {

std::vector<double> f_envelope_samples(double m, double m_s, std::int64_t n,
                                       std::uint64_t seed) {
    auto p = fisher_f_normalized(m, m_s);
    mcsim::SimConfig cfg;
    cfg.n_samples = n;
    cfg.seed = seed;
    cfg.n_workers = 2;
    auto power = mcsim::sample_fisher_f_power(p, cfg);
    for (double& x : power) x = std::sqrt(x);
    return power;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace

TEST_CASE("path-loss compensation") {
    // all records at d0: compensation is identically zero dB
    fitting::MeasurementSet ms;
    for (int i = 0; i < 64; ++i) ms.rows.push_back({10.0, -40.0 - (i % 5)});
    auto env = fitting::compensate_path_loss(ms, 2.7, 10.0);
    for (std::size_t i = 0; i < env.size(); ++i) {
        double raw = std::pow(10.0, ms.rows[i].rx_power_dbm / 20.0);
        double ref = std::pow(10.0, ms.rows[0].rx_power_dbm / 20.0);
        CHECK(env[i] / env[0] == doctest::Approx(raw / ref).epsilon(1e-12));
    }
    double rms = 0.0;
    for (double e : env) rms += e * e;
    CHECK(std::sqrt(rms / env.size()) == doctest::Approx(1.0).epsilon(1e-12));

    // synthetic log-distance data: residual power uncorrelated with distance
    fitting::MeasurementSet syn;
    Philox rng(17, 0xD15u, 0);
    auto fading = f_envelope_samples(1.1, 2.1, 650, 17);
    std::vector<double> dist(650);
    for (int i = 0; i < 650; ++i) {
        dist[i] = 1.0 + 99.0 * rng.uniform();
        double rx = -30.0 - 10.0 * 2.7 * std::log10(dist[i] / 1.0) +
                    20.0 * std::log10(fading[i]);
        syn.rows.push_back({dist[i], rx});
    }
    auto env2 = fitting::compensate_path_loss(syn, 2.7, 1.0);
    std::vector<double> power(env2.size());
    for (std::size_t i = 0; i < env2.size(); ++i) power[i] = env2[i] * env2[i];
    CHECK(std::abs(pearson(power, dist)) < 0.05);

    std::vector<std::string> warnings;
    fitting::MeasurementSet close;
    for (int i = 0; i < 60; ++i) close.rows.push_back({0.5, -40.0});
    fitting::compensate_path_loss(close, 2.7, 1.0, &warnings);
    CHECK(!warnings.empty());
}

TEST_CASE("empirical CDF") {
    auto one = mcsim::empirical_cdf({3.5});
    CHECK(one(3.5) == 1.0);
    CHECK(one(3.4999) == 0.0);
    std::vector<double> grid(100);
    for (int i = 0; i < 100; ++i) grid[i] = i + 1.0;
    auto ramp = mcsim::empirical_cdf(grid);
    for (int i = 1; i <= 100; ++i) CHECK(ramp(i) == doctest::Approx(i / 100.0));

    // large-sample agreement with the analytic envelope CDF
    auto env = f_envelope_samples(1.07, 2.02, 1'000'000, 5);
    auto emp = mcsim::empirical_cdf(env);
    fitting::FitReport exact;
    exact.model = FitModel::FisherF;
    exact.m = 1.07;
    exact.m_s = 2.02;
    exact.omega_s = std::sqrt(2.02 / 1.02);
    exact.omega_m = 1.0 / exact.omega_s;
    double sup = mcsim::ks_distance(emp, [&](double x) { return fitting::model_cdf(exact, x); });
    CHECK(sup < 0.002);
}

TEST_CASE("model recovery on synthetic data (Table-style row 1)") {
    auto env = f_envelope_samples(1.0721, 2.0211, 100000, 1234);
    fitting::FitOptions opts;
    opts.seed = 9;
    auto ff = fitting::fit_model(env, FitModel::FisherF, opts);
    CHECK(std::abs(ff.m - 1.0721) < 0.1);
    CHECK(std::abs(ff.m_s - 2.0211) < 0.3);
    auto nak = fitting::fit_model(env, FitModel::Nakagami, opts);
    auto ray = fitting::fit_model(env, FitModel::Rayleigh, opts);
    CHECK(ff.mse < nak.mse);
    CHECK(nak.mse < ray.mse);
}

TEST_CASE("Rayleigh self-fit recovers the scale") {
    // unit-power Rayleigh envelope: s = 1/sqrt(2)
    std::vector<double> env(20000);
    Philox rng(55, 0xA1u, 0);
    for (auto& e : env) e = std::sqrt(-std::log(rng.uniform()));
    auto rep = fitting::fit_model(env, FitModel::Rayleigh, {});
    CHECK(std::abs(rep.s - 0.7071) < 0.01);
}

TEST_CASE("severely shadowed data separates the models by an order of magnitude") {
    auto env = f_envelope_samples(0.1721, 1.1211, 100000, 77);
    fitting::FitOptions opts;
    opts.seed = 11;
    auto ff = fitting::fit_model(env, FitModel::FisherF, opts);
    auto nak = fitting::fit_model(env, FitModel::Nakagami, opts);
    CHECK(ff.mse * 10.0 <= nak.mse);
}

TEST_CASE("fit is scale-consistent") {
    auto env = f_envelope_samples(1.0721, 2.0211, 50000, 4321);
    fitting::FitOptions opts;
    opts.seed = 5;
    auto base_n = fitting::fit_model(env, FitModel::Nakagami, opts);
    auto base_f = fitting::fit_model(env, FitModel::FisherF, opts);
    const double c = 3.0;
    auto scaled = env;
    for (double& e : scaled) e *= c;
    auto sc_n = fitting::fit_model(scaled, FitModel::Nakagami, opts);
    auto sc_f = fitting::fit_model(scaled, FitModel::FisherF, opts);
    CHECK(sc_n.omega == doctest::Approx(base_n.omega * c * c).epsilon(0.05));
    CHECK(sc_n.m == doctest::Approx(base_n.m).epsilon(0.05));
    CHECK(sc_f.omega == doctest::Approx(base_f.omega * c * c).epsilon(0.05));
    CHECK(sc_f.m == doctest::Approx(base_f.m).epsilon(0.05));
    CHECK(sc_f.m_s == doctest::Approx(base_f.m_s).epsilon(0.05));
}

TEST_CASE("fit determinism") {
    auto env = f_envelope_samples(1.0721, 2.0211, 5000, 8);
    fitting::FitOptions opts;
    opts.seed = 3;
    auto a = fitting::fit_model(env, FitModel::FisherF, opts);
    auto b = fitting::fit_model(env, FitModel::FisherF, opts);
    CHECK(a.m == b.m);
    CHECK(a.m_s == b.m_s);
    CHECK(a.omega_m == b.omega_m);
    CHECK(a.mse == b.mse);
}

TEST_CASE("own-family fits win on regenerated data (nesting-consistent)") {
    // Nakagami (m=1) and Fisher-F near-nest Rayleigh, and F near-nests
    // Nakagami, so the richer family can always absorb the sampling noise of
    // the empirical CDF at least as well; the orderings that are actually
    // implied by the model structure are the ones checked here.
    fitting::FitOptions opts;
    opts.n_starts = 6;
    opts.max_iters = 250;
    opts.seed = 2;
    Philox rng(321, 0xB2u, 0);
    for (int rep = 0; rep < 20; ++rep) {
        // Rayleigh data: the nesting families match it and recover m ~ 1
        {
            std::vector<double> env(4000);
            Philox r2(400 + rep, 0xC3u, 0);
            for (auto& e : env) e = 0.9 * std::sqrt(-std::log(r2.uniform()));
            auto ray = fitting::fit_model(env, FitModel::Rayleigh, opts);
            auto nak = fitting::fit_model(env, FitModel::Nakagami, opts);
            CHECK(nak.mse <= ray.mse * 1.0001 + 1e-12);
            CHECK(nak.m == doctest::Approx(1.0).epsilon(0.15));
            CHECK(ray.mse < 2.5e-4); // at the empirical-CDF noise floor
        }
        // Fisher-F data with material shadowing: F beats both
        {
            auto env = f_envelope_samples(0.9 + 0.4 * rng.uniform(),
                                          1.6 + 1.0 * rng.uniform(), 4000, 500 + rep);
            auto ff = fitting::fit_model(env, FitModel::FisherF, opts);
            auto nak = fitting::fit_model(env, FitModel::Nakagami, opts);
            auto ray = fitting::fit_model(env, FitModel::Rayleigh, opts);
            CHECK(ff.mse <= nak.mse * 1.0001 + 1e-12);
            CHECK(ff.mse <= ray.mse * 1.0001 + 1e-12);
        }
        // Nakagami-like data (m != 1): beats the nested Rayleigh
        {
            std::vector<double> env(4000);
            auto p = fisher_f_normalized(1.4, 1e7);
            mcsim::SimConfig cfg;
            cfg.n_samples = 4000;
            cfg.seed = 600 + rep;
            auto power = mcsim::sample_fisher_f_power(p, cfg);
            for (std::size_t i = 0; i < env.size(); ++i) env[i] = std::sqrt(power[i]);
            auto nak = fitting::fit_model(env, FitModel::Nakagami, opts);
            auto ray = fitting::fit_model(env, FitModel::Rayleigh, opts);
            CHECK(nak.mse <= ray.mse * 1.0001 + 1e-12);
        }
    }
}

TEST_CASE("measurement file ingestion") {
    const char* path = "test_fit_input.csv";
    {
        std::ofstream f(path);
        f << "# comment line\n";
        f << "distance_m,rx_power_dbm\n";
        f << "10.0,-42.5\n";
        f << "20.0,-49.1\n";
    }
    auto ms = fitting::load_measurements(path);
    CHECK(ms.rows.size() == 2);
    CHECK(ms.rows[1].distance_m == 20.0);

    {
        std::ofstream f(path);
        f << "distance_m,rx_power_dbm\n10.0,-42.5\nbogus,-3\n";
    }
    CHECK_THROWS_WITH_AS(fitting::load_measurements(path),
                         doctest::Contains("row 3"), InputError);

    {
        std::ofstream f(path);
        f << "envelope\n0.5\n1.5\n0.9\n";
    }
    auto env = fitting::load_measurements(path);
    CHECK(env.preprocessed());
    CHECK(env.envelope.size() == 3);
    std::remove(path);
}

TEST_CASE("fit_model rejects tiny sample sets") {
    std::vector<double> env(10, 1.0);
    CHECK_THROWS_AS(fitting::fit_model(env, FitModel::Rayleigh, {}), DomainError);
}
