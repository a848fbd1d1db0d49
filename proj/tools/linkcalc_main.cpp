#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "linkcalc/fitting.hpp"
#include "linkcalc/mcsim.hpp"
#include "linkcalc/metrics.hpp"
#include "linkcalc/scenario.hpp"
#include "linkcalc/tables.hpp"
#include "linkcalc/validate.hpp"
#include "linkcalc/version.hpp"

namespace lc = linkcalc;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 42;
    int workers = 1;
    bool json = false;
    std::int64_t mc_samples = 1'000'000;
    std::vector<std::string> overrides;
};

lc::Scenario load_base_scenario(const GlobalOpts& g) {
    lc::Scenario sc =
        g.config_path.empty() ? lc::default_scenario() : lc::load_scenario(g.config_path);
    for (const auto& ov : g.overrides) lc::apply_override(sc, ov);
    return sc;
}

std::vector<lc::LinkKind> parse_kinds(const std::string& csv) {
    std::vector<lc::LinkKind> out;
    std::string cur;
    std::istringstream in(csv);
    while (std::getline(in, cur, ',')) {
        if (cur == "sr") out.push_back(lc::LinkKind::SR);
        else if (cur == "ru") out.push_back(lc::LinkKind::RU);
        else if (cur == "af") out.push_back(lc::LinkKind::AF);
        else if (cur == "df") out.push_back(lc::LinkKind::DF);
        else throw lc::InputError("unknown kind '" + cur + "' (expected sr,ru,af,df)");
    }
    if (out.empty()) throw lc::InputError("--kinds: empty kind list");
    return out;
}

const char* kind_name(lc::LinkKind k) {
    switch (k) {
        case lc::LinkKind::SR: return "sr";
        case lc::LinkKind::RU: return "ru";
        case lc::LinkKind::AF: return "af";
        case lc::LinkKind::DF: return "df";
    }
    return "?";
}

void emit(const lc::Table& t, const GlobalOpts& g) {
    if (g.out_path.empty()) {
        if (g.json) t.write_json(std::cout);
        else t.write_text(std::cout);
        return;
    }
    std::ofstream out(g.out_path, std::ios::binary);
    if (!out) throw lc::InputError("cannot open output file: " + g.out_path);
    if (g.json) t.write_json(out);
    else t.write_text(out);
}

std::string hash_hex(const lc::Scenario& sc) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(sc.hash()));
    return buf;
}

void common_meta(lc::Table& t, const char* command, const lc::Scenario& sc,
                 const GlobalOpts& g) {
    t.meta.emplace_back("linkcalc", lc::kVersion);
    t.meta.emplace_back("command", command);
    t.meta.emplace_back("config_hash", hash_hex(sc));
    t.meta.emplace_back("seed", std::to_string(g.seed));
}

// Evaluate one row per sweep point on a worker pool, preserving input order.
template <typename RowFn>
std::vector<std::vector<double>> sweep_rows(const std::vector<double>& xs, int workers,
                                            RowFn&& fn) {
    std::vector<std::vector<double>> rows(xs.size());
    std::exception_ptr err;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= xs.size() || failed.load()) return;
            try {
                rows[i] = fn(i, xs[i]);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                return;
            }
        }
    };
    int nw = std::max(1, std::min<int>(workers, static_cast<int>(xs.size())));
    if (nw == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nw; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
    return rows;
}

struct SweepFlags {
    std::string var = "gbar_db";
    double start = 0.0;
    double stop = 50.0;
    int points = 26;
    bool log_scale = false;

    lc::SweepSpec spec() const {
        lc::SweepSpec s;
        s.variable = lc::SweepSpec::var_from_name(var);
        s.start = start;
        s.stop = stop;
        s.points = points;
        s.log_scale = log_scale;
        s.validate();
        return s;
    }
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& s) {
    cmd->add_option("--sweep-var", s.var, "sweep variable: gbar_db|theta|epsilon|gamma_th_db");
    cmd->add_option("--sweep-start", s.start, "sweep start value");
    cmd->add_option("--sweep-stop", s.stop, "sweep stop value");
    cmd->add_option("--sweep-points", s.points, "number of sweep points");
    cmd->add_flag("--sweep-log", s.log_scale, "log-spaced sweep");
}

void sweep_meta(lc::Table& t, const lc::SweepSpec& spec) {
    std::ostringstream o;
    o << lc::SweepSpec::var_name(spec.variable) << " " << lc::format_g12(spec.start) << ".."
      << lc::format_g12(spec.stop) << " n=" << spec.points
      << (spec.log_scale ? " log" : " linear");
    t.meta.emplace_back("sweep", o.str());
}

// Scenario at one sweep point: gbar sweeps move both hop SNRs, preserving the
// R-U/S-R ratio (or the explicit --lambda-ratio).
lc::Scenario at_point(const lc::Scenario& base, lc::SweepSpec::Var var, double v,
                      std::optional<double> lambda_ratio) {
    lc::Scenario sc = base;
    double lam_db = lambda_ratio ? 10.0 * std::log10(*lambda_ratio)
                                 : base.gbar_ru_db - base.gbar_sr_db;
    if (var == lc::SweepSpec::Var::GbarDb) {
        sc.snr_override = true;
        sc.gbar_sr_db = v;
        sc.gbar_ru_db = v + lam_db;
    } else if (lambda_ratio) {
        sc.snr_override = true;
        sc.gbar_ru_db = sc.gbar_sr_db + lam_db;
    }
    if (var == lc::SweepSpec::Var::GammaThDb) sc.gamma_th_db = v;
    if (var == lc::SweepSpec::Var::Theta) sc.qos.theta = v;
    return sc;
}

int cmd_curves(const GlobalOpts& g, const SweepFlags& sf, const std::string& kinds_csv,
               const std::string& metric, std::optional<double> lambda_ratio,
               bool mc_validate) {
    lc::Scenario base = load_base_scenario(g);
    auto kinds = parse_kinds(kinds_csv);
    auto spec = sf.spec();
    if (metric != "cdf" && metric != "pdf" && metric != "outage" && metric != "outage_asy")
        throw lc::InputError("--metric must be cdf|pdf|outage|outage_asy");
    if ((metric == "outage" || metric == "outage_asy") &&
        spec.variable != lc::SweepSpec::Var::GbarDb)
        throw lc::InputError("outage curves sweep gbar_db");
    if ((metric == "cdf" || metric == "pdf") &&
        spec.variable != lc::SweepSpec::Var::GammaThDb)
        throw lc::InputError("cdf/pdf curves sweep gamma_th_db");

    lc::Table t;
    common_meta(t, "curves", base, g);
    sweep_meta(t, spec);
    if (lambda_ratio) t.meta.emplace_back("lambda_ratio", lc::format_g12(*lambda_ratio));
    if (mc_validate) t.meta.emplace_back("mc_samples", std::to_string(g.mc_samples));
    t.columns.push_back(lc::SweepSpec::var_name(spec.variable));
    for (auto k : kinds) {
        t.columns.push_back(std::string(kind_name(k)) + "_" + metric);
        if (mc_validate) t.columns.push_back(std::string(kind_name(k)) + "_mc");
    }

    auto xs = spec.values();
    t.rows = sweep_rows(xs, g.workers, [&](std::size_t i, double v) {
        lc::Scenario sc = at_point(base, spec.variable, v, lambda_ratio);
        double gth = sc.gamma_th_linear();
        std::vector<double> row{v};
        for (auto k : kinds) {
            auto d = sc.distribution(k);
            double val = 0.0;
            if (metric == "cdf") val = lc::snr::cdf(d, gth);
            else if (metric == "pdf") val = lc::snr::pdf(d, gth);
            else if (metric == "outage") val = lc::snr::cdf(d, gth);
            else val = lc::snr::cdf_asy(d, gth);
            row.push_back(val);
            if (mc_validate) {
                lc::mcsim::SimConfig cfg;
                cfg.n_samples = g.mc_samples;
                cfg.seed = g.seed + static_cast<std::uint64_t>(i) * 1000003u;
                cfg.n_workers = 1; // points already run in parallel
                auto samples = lc::mcsim::sample_end_to_end(d, cfg);
                std::int64_t below = 0;
                for (double s : samples)
                    if (s < gth) ++below;
                row.push_back(static_cast<double>(below) / static_cast<double>(cfg.n_samples));
            }
        }
        return row;
    });
    emit(t, g);
    return 0;
}

int cmd_ec(const GlobalOpts& g, const SweepFlags& sf, const std::string& kinds_csv,
           std::optional<double> lambda_ratio, bool with_asy, bool quadrature) {
    lc::Scenario base = load_base_scenario(g);
    auto kinds = parse_kinds(kinds_csv);
    auto spec = sf.spec();
    if (spec.variable != lc::SweepSpec::Var::Theta &&
        spec.variable != lc::SweepSpec::Var::GbarDb)
        throw lc::InputError("ec sweeps theta or gbar_db");

    lc::Table t;
    common_meta(t, "ec", base, g);
    sweep_meta(t, spec);
    if (lambda_ratio) t.meta.emplace_back("lambda_ratio", lc::format_g12(*lambda_ratio));
    t.columns.push_back(lc::SweepSpec::var_name(spec.variable));
    for (auto k : kinds) {
        t.columns.push_back(std::string(kind_name(k)) + "_ec_bits");
        if (with_asy && (k == lc::LinkKind::AF || k == lc::LinkKind::DF))
            t.columns.push_back(std::string(kind_name(k)) + "_ec_asy_bits");
    }

    auto xs = spec.values();
    t.rows = sweep_rows(xs, g.workers, [&](std::size_t, double v) {
        lc::Scenario sc = at_point(base, spec.variable, v, lambda_ratio);
        std::vector<double> row{v};
        for (auto k : kinds) {
            auto d = sc.distribution(k);
            double ec;
            if (quadrature) {
                ec = lc::metrics::effective_capacity(d, sc.qos).value_bits;
            } else {
                switch (k) {
                    case lc::LinkKind::SR: ec = lc::metrics::ec_sr_closed(d, sc.qos).value_bits; break;
                    case lc::LinkKind::RU: ec = lc::metrics::ec_ru_closed(d, sc.qos).value_bits; break;
                    case lc::LinkKind::AF: ec = lc::metrics::ec_af(d, sc.qos).value_bits; break;
                    default: ec = lc::metrics::ec_df(d, sc.qos).value_bits; break;
                }
            }
            row.push_back(ec);
            if (with_asy && (k == lc::LinkKind::AF || k == lc::LinkKind::DF)) {
                double asy = std::nan("");
                try {
                    asy = k == lc::LinkKind::AF
                              ? lc::metrics::ec_af_asy(d, sc.qos).value_bits
                              : lc::metrics::ec_df_asy(d, sc.qos).value_bits;
                } catch (const lc::DomainError&) {
                    // outside the asymptotic form's validity (beta too small)
                }
                row.push_back(asy);
            }
        }
        return row;
    });
    emit(t, g);
    return 0;
}

int cmd_eps_capacity(const GlobalOpts& g, const SweepFlags& sf, const std::string& kinds_csv,
                     bool paired_ec) {
    lc::Scenario base = load_base_scenario(g);
    auto kinds = parse_kinds(kinds_csv);
    auto spec = sf.spec();
    if (spec.variable != lc::SweepSpec::Var::Epsilon)
        throw lc::InputError("eps-capacity sweeps epsilon");

    lc::Table t;
    common_meta(t, "eps-capacity", base, g);
    sweep_meta(t, spec);
    t.columns.push_back("epsilon");
    for (auto k : kinds) {
        t.columns.push_back(std::string(kind_name(k)) + "_ceps_bits");
        if (paired_ec) t.columns.push_back(std::string(kind_name(k)) + "_ec_theta_inv_eps");
    }

    auto xs = spec.values();
    t.rows = sweep_rows(xs, g.workers, [&](std::size_t, double eps) {
        std::vector<double> row{eps};
        for (auto k : kinds) {
            auto d = base.distribution(k);
            row.push_back(lc::metrics::eps_outage_capacity(d, eps).c_eps);
            if (paired_ec) {
                lc::QosSpec q = base.qos;
                q.theta = 1.0 / eps;
                row.push_back(lc::metrics::effective_capacity(d, q).value_bits);
            }
        }
        return row;
    });
    emit(t, g);
    return 0;
}

int cmd_fit(const GlobalOpts& g, const std::string& input, const std::string& model_s,
            double alpha, double d0, bool normalized, const std::string& location) {
    auto ms = lc::fitting::load_measurements(input);
    ms.location_label = location;
    std::vector<std::string> warnings;
    auto env = lc::fitting::compensate_path_loss(ms, alpha, d0, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    std::vector<lc::fitting::FitModel> models;
    if (model_s == "all")
        models = {lc::fitting::FitModel::FisherF, lc::fitting::FitModel::Nakagami,
                  lc::fitting::FitModel::Rayleigh};
    else if (model_s == "rayleigh") models = {lc::fitting::FitModel::Rayleigh};
    else if (model_s == "nakagami") models = {lc::fitting::FitModel::Nakagami};
    else if (model_s == "fisherf") models = {lc::fitting::FitModel::FisherF};
    else throw lc::InputError("--model must be all|rayleigh|nakagami|fisherf");

    lc::fitting::FitOptions opts;
    opts.seed = g.seed;
    opts.normalized = normalized;

    nlohmann::ordered_json j;
    j["linkcalc"] = lc::kVersion;
    j["input"] = input;
    j["location"] = location;
    j["n_samples"] = env.size();
    j["alpha"] = alpha;
    j["d0_m"] = d0;
    j["seed"] = g.seed;
    j["normalized_omega"] = normalized;
    auto& fits = j["fits"];

    std::ostringstream table;
    table << "# model table (" << location << ", n=" << env.size() << ", alpha="
          << lc::format_g12(alpha) << ")\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-9s %-9s %-9s %-9s %-12s\n", "model", "m|s",
                  "m_s", "omega_m", "omega_s", "mse");
    table << line;
    for (auto model : models) {
        auto rep = lc::fitting::fit_model(env, model, opts);
        nlohmann::ordered_json f;
        f["model"] = lc::fitting::model_name(model);
        f["mse"] = rep.mse;
        f["n_grid"] = rep.n_grid;
        switch (model) {
            case lc::fitting::FitModel::Rayleigh:
                f["s"] = rep.s;
                std::snprintf(line, sizeof line, "%-10s %-9.4f %-9s %-9s %-9s %-12.4g\n",
                              "rayleigh", rep.s, "-", "-", "-", rep.mse);
                break;
            case lc::fitting::FitModel::Nakagami:
                f["m"] = rep.m;
                f["omega"] = rep.omega;
                std::snprintf(line, sizeof line, "%-10s %-9.4f %-9s %-9.4f %-9s %-12.4g\n",
                              "nakagami", rep.m, "-", rep.omega, "-", rep.mse);
                break;
            case lc::fitting::FitModel::FisherF:
                f["m"] = rep.m;
                f["m_s"] = rep.m_s;
                f["omega_m"] = rep.omega_m;
                f["omega_s"] = rep.omega_s;
                f["omega"] = rep.omega;
                std::snprintf(line, sizeof line, "%-10s %-9.4f %-9.4f %-9.4f %-9.4f %-12.4g\n",
                              "fisherf", rep.m, rep.m_s, rep.omega_m, rep.omega_s, rep.mse);
                break;
        }
        table << line;
        fits.push_back(f);
    }

    std::cout << table.str();
    if (!g.out_path.empty()) {
        std::ofstream out(g.out_path, std::ios::binary);
        if (!out) throw lc::InputError("cannot open output file: " + g.out_path);
        out << j.dump(2) << "\n";
    } else if (g.json) {
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_validate(const GlobalOpts& g, double ks_tol) {
    lc::Scenario sc = load_base_scenario(g);
    lc::ValidateOptions opts;
    opts.mc_samples = g.mc_samples;
    opts.seed = g.seed;
    opts.workers = g.workers;
    opts.ks_tol = ks_tol;
    auto out = lc::run_validation(sc, opts);
    std::ostringstream full;
    full << "# linkcalc: " << lc::kVersion << "\n"
         << "# command: validate\n"
         << "# config_hash: " << hash_hex(sc) << "\n"
         << "# seed: " << g.seed << "\n"
         << "# mc_samples: " << g.mc_samples << "\n"
         << out.report;
    if (g.out_path.empty()) {
        std::cout << full.str();
    } else {
        std::ofstream f(g.out_path, std::ios::binary);
        if (!f) throw lc::InputError("cannot open output file: " + g.out_path);
        f << full.str();
    }
    return out.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"satellite-UAV-ground dual-hop link calculator"};
    app.require_subcommand(1);
    app.fallthrough(); // allow the global flags after the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_path, "scenario config file");
    app.add_option("--out", g.out_path, "output file (default: stdout)");
    app.add_option("--seed", g.seed, "Monte Carlo seed");
    app.add_option("--workers", g.workers, "worker threads")
        ->envname("LINKCALC_WORKERS");
    app.add_flag("--json", g.json, "JSON output instead of text tables");
    app.add_option("--mc-samples", g.mc_samples, "Monte Carlo sample count");
    app.add_option("--set", g.overrides, "override a config key: section.key=value");

    SweepFlags sw_curves, sw_ec, sw_eps;
    std::string curves_kinds = "af,df", curves_metric = "outage";
    double lambda_opt = 0.0;
    bool have_lambda = false;
    bool mc_validate = false;

    auto* curves = app.add_subcommand("curves", "CDF/PDF/outage curves vs a sweep variable");
    add_sweep_flags(curves, sw_curves);
    curves->add_option("--kinds", curves_kinds, "comma list of sr,ru,af,df");
    curves->add_option("--metric", curves_metric, "cdf|pdf|outage|outage_asy");
    curves->add_option("--lambda-ratio", lambda_opt, "gbar_ru = lambda * gbar_sr")
        ->each([&](const std::string&) { have_lambda = true; });
    curves->add_flag("--mc-validate", mc_validate, "add Monte Carlo columns");

    std::string ec_kinds = "sr,ru,af,df";
    bool ec_asy = false, ec_quad = false;
    auto* ec = app.add_subcommand("ec", "effective capacity vs theta or gbar");
    sw_ec.var = "theta";
    sw_ec.start = 1e-4;
    sw_ec.stop = 1.0;
    sw_ec.points = 13;
    sw_ec.log_scale = true;
    add_sweep_flags(ec, sw_ec);
    ec->add_option("--kinds", ec_kinds, "comma list of sr,ru,af,df");
    ec->add_option("--lambda-ratio", lambda_opt, "gbar_ru = lambda * gbar_sr")
        ->each([&](const std::string&) { have_lambda = true; });
    ec->add_flag("--asy", ec_asy, "add asymptotic EC columns (af/df)");
    ec->add_flag("--quadrature", ec_quad, "force quadrature EC for all kinds");

    std::string eps_kinds = "af,df";
    bool paired_ec = false;
    auto* eps = app.add_subcommand("eps-capacity", "epsilon-outage capacity vs epsilon");
    sw_eps.var = "epsilon";
    sw_eps.start = 1e-7;
    sw_eps.stop = 1e-1;
    sw_eps.points = 13;
    sw_eps.log_scale = true;
    add_sweep_flags(eps, sw_eps);
    eps->add_option("--kinds", eps_kinds, "comma list of sr,ru,af,df");
    eps->add_flag("--paired-ec", paired_ec, "add EC at theta = 1/epsilon");

    std::string fit_input, fit_model_s = "all", fit_location = "unlabeled";
    double fit_alpha = 2.7, fit_d0 = 1.0;
    bool fit_normalized = false;
    auto* fit = app.add_subcommand("fit", "fit fading models to measured envelope data");
    fit->add_option("--input", fit_input, "measurement file")->required();
    fit->add_option("--model", fit_model_s, "all|rayleigh|nakagami|fisherf");
    fit->add_option("--alpha", fit_alpha, "path-loss exponent for compensation");
    fit->add_option("--d0", fit_d0, "reference distance (m)");
    fit->add_flag("--normalized", fit_normalized, "tie F-model omegas to unit power");
    fit->add_option("--location", fit_location, "label recorded in the report");

    double ks_tol = 0.005;
    auto* validate = app.add_subcommand("validate", "analytic-vs-Monte-Carlo test battery");
    validate->add_option("--ks-tol", ks_tol, "KS distance tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::optional<double> lambda;
        if (have_lambda) lambda = lambda_opt;
        if (curves->parsed())
            return cmd_curves(g, sw_curves, curves_kinds, curves_metric, lambda, mc_validate);
        if (ec->parsed())
            return cmd_ec(g, sw_ec, ec_kinds, lambda, ec_asy, ec_quad);
        if (eps->parsed())
            return cmd_eps_capacity(g, sw_eps, eps_kinds, paired_ec);
        if (fit->parsed())
            return cmd_fit(g, fit_input, fit_model_s, fit_alpha, fit_d0, fit_normalized,
                           fit_location);
        if (validate->parsed())
            return cmd_validate(g, ks_tol);
    } catch (const lc::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
