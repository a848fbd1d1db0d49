#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linkcalc/fitting.hpp"
#include "linkcalc/mcsim.hpp"
#include "linkcalc/metrics.hpp"
#include "linkcalc/scenario.hpp"
#include "linkcalc/validate.hpp"
#include "linkcalc/version.hpp"

namespace py = pybind11;
using namespace linkcalc;

PYBIND11_MODULE(_core, m) {
    m.doc() = "dual-hop satellite-UAV-ground link statistics";
    m.attr("__version__") = kVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_RuntimeError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

    py::class_<ShadowedRicianParams>(m, "ShadowedRicianParams")
        .def_readonly("b_s", &ShadowedRicianParams::b_s)
        .def_readonly("gamma_s", &ShadowedRicianParams::gamma_s)
        .def_readonly("omega_sr", &ShadowedRicianParams::omega_sr)
        .def_readonly("alpha_sr", &ShadowedRicianParams::alpha_sr)
        .def_readonly("beta_sr", &ShadowedRicianParams::beta_sr)
        .def_readonly("delta_sr", &ShadowedRicianParams::delta_sr);
    m.def("shadowed_rician_from_physical", &shadowed_rician_from_physical,
          py::arg("b_s"), py::arg("gamma_s"), py::arg("omega_sr"));

    py::class_<FisherFParams>(m, "FisherFParams")
        .def_readonly("m", &FisherFParams::m)
        .def_readonly("m_s", &FisherFParams::m_s)
        .def_readonly("omega_m", &FisherFParams::omega_m)
        .def_readonly("omega_s", &FisherFParams::omega_s)
        .def_readonly("omega", &FisherFParams::omega);
    m.def("fisher_f_normalized", &fisher_f_normalized, py::arg("m"), py::arg("m_s"));
    m.def("fisher_f_params", &fisher_f_params, py::arg("m"), py::arg("m_s"),
          py::arg("omega_m"), py::arg("omega_s"));

    m.def("los_probability", &los_probability, py::arg("theta_deg"), py::arg("a"), py::arg("b"));

    py::enum_<LinkKind>(m, "LinkKind")
        .value("SR", LinkKind::SR)
        .value("RU", LinkKind::RU)
        .value("AF", LinkKind::AF)
        .value("DF", LinkKind::DF);

    py::enum_<RelayScheme>(m, "RelayScheme")
        .value("FixedGainAF", RelayScheme::FixedGainAF)
        .value("DF", RelayScheme::DF);

    py::class_<RelayConfig>(m, "RelayConfig")
        .def_readonly("scheme", &RelayConfig::scheme)
        .def_readonly("c_param", &RelayConfig::c_param);
    m.def("relay_from_c", &relay_from_c, py::arg("scheme"), py::arg("c_param"));

    py::class_<QosSpec>(m, "QosSpec")
        .def(py::init([](double theta, double bandwidth_hz, double duration_s) {
                 QosSpec q;
                 q.theta = theta;
                 q.bandwidth_hz = bandwidth_hz;
                 q.duration_s = duration_s;
                 q.validate();
                 return q;
             }),
             py::arg("theta"), py::arg("bandwidth_hz") = 20e6, py::arg("duration_s") = 2e-3)
        .def_readwrite("theta", &QosSpec::theta)
        .def_readwrite("bandwidth_hz", &QosSpec::bandwidth_hz)
        .def_readwrite("duration_s", &QosSpec::duration_s)
        .def_property_readonly("beta_norm", &QosSpec::beta_norm);

    py::class_<SnrDistribution>(m, "SnrDistribution")
        .def(py::init([](LinkKind kind, const ShadowedRicianParams& sr,
                         const FisherFParams& ru, double gbar_sr, double gbar_ru,
                         double c_param, bool semi_blind) {
                 SnrDistribution d;
                 d.kind = kind;
                 d.sr = sr;
                 d.ru = ru;
                 d.gbar_sr = gbar_sr;
                 d.gbar_ru = gbar_ru;
                 RelayScheme sch =
                     kind == LinkKind::AF ? RelayScheme::FixedGainAF : RelayScheme::DF;
                 d.relay = semi_blind ? relay_semi_blind(sch) : relay_from_c(sch, c_param);
                 return d;
             }),
             py::arg("kind"), py::arg("sr"), py::arg("ru"), py::arg("gbar_sr"),
             py::arg("gbar_ru"), py::arg("c_param") = 1.0, py::arg("semi_blind") = false)
        .def_readonly("kind", &SnrDistribution::kind)
        .def_readonly("gbar_sr", &SnrDistribution::gbar_sr)
        .def_readonly("gbar_ru", &SnrDistribution::gbar_ru)
        .def("pdf", &snr::pdf, py::arg("gamma"))
        .def("cdf", &snr::cdf, py::arg("gamma"))
        .def("sf", &snr::sf, py::arg("gamma"))
        .def("cdf_asy", &snr::cdf_asy, py::arg("gamma"));

    py::enum_<metrics::EcMethod>(m, "EcMethod")
        .value("Quadrature", metrics::EcMethod::Quadrature)
        .value("ClosedForm", metrics::EcMethod::ClosedForm)
        .value("Asymptotic", metrics::EcMethod::Asymptotic)
        .value("MonteCarlo", metrics::EcMethod::MonteCarlo);

    py::class_<metrics::EcResult>(m, "EcResult")
        .def_readonly("value_bits", &metrics::EcResult::value_bits)
        .def_readonly("method", &metrics::EcResult::method);
    py::class_<metrics::OutageReport>(m, "OutageReport")
        .def_readonly("p_out", &metrics::OutageReport::p_out)
        .def_readonly("p_out_asy", &metrics::OutageReport::p_out_asy)
        .def_readonly("gamma_th", &metrics::OutageReport::gamma_th)
        .def_readonly("diversity_order", &metrics::OutageReport::diversity_order);
    py::class_<metrics::EpsCapacityResult>(m, "EpsCapacityResult")
        .def_readonly("c_eps", &metrics::EpsCapacityResult::c_eps)
        .def_readonly("epsilon", &metrics::EpsCapacityResult::epsilon)
        .def_readonly("iterations", &metrics::EpsCapacityResult::iterations);

    m.def("effective_capacity", &metrics::effective_capacity, py::arg("dist"), py::arg("qos"));
    m.def("ec_sr_closed", &metrics::ec_sr_closed, py::arg("dist"), py::arg("qos"));
    m.def("ec_ru_closed", &metrics::ec_ru_closed, py::arg("dist"), py::arg("qos"));
    m.def("ec_af", &metrics::ec_af, py::arg("dist"), py::arg("qos"));
    m.def("ec_af_asy", &metrics::ec_af_asy, py::arg("dist"), py::arg("qos"));
    m.def("ec_df", &metrics::ec_df, py::arg("dist"), py::arg("qos"));
    m.def("ec_df_asy", &metrics::ec_df_asy, py::arg("dist"), py::arg("qos"));
    m.def("outage", &metrics::outage, py::arg("dist"), py::arg("gamma_th"));
    m.def("eps_outage_capacity", &metrics::eps_outage_capacity, py::arg("dist"),
          py::arg("epsilon"));

    py::class_<mcsim::SimConfig>(m, "SimConfig")
        .def(py::init([](std::int64_t n_samples, std::uint64_t seed, int n_workers,
                         bool antithetic) {
                 mcsim::SimConfig c;
                 c.n_samples = n_samples;
                 c.seed = seed;
                 c.n_workers = n_workers;
                 c.antithetic = antithetic;
                 c.validate();
                 return c;
             }),
             py::arg("n_samples"), py::arg("seed") = 1, py::arg("n_workers") = 1,
             py::arg("antithetic") = false);

    m.def("sample_shadowed_rician_power", &mcsim::sample_shadowed_rician_power,
          py::arg("params"), py::arg("config"));
    m.def("sample_fisher_f_power", &mcsim::sample_fisher_f_power, py::arg("params"),
          py::arg("config"));
    m.def("sample_end_to_end", &mcsim::sample_end_to_end, py::arg("dist"), py::arg("config"));

    py::class_<mcsim::McMetrics>(m, "McMetrics")
        .def_readonly("ec_hat", &mcsim::McMetrics::ec_hat)
        .def_readonly("ec_se", &mcsim::McMetrics::ec_se)
        .def_readonly("p_out_hat", &mcsim::McMetrics::p_out_hat)
        .def_readonly("p_out_se", &mcsim::McMetrics::p_out_se)
        .def_readonly("ergodic_hat", &mcsim::McMetrics::ergodic_hat)
        .def_readonly("ergodic_se", &mcsim::McMetrics::ergodic_se);
    m.def("mc_metrics", &mcsim::mc_metrics, py::arg("dist"), py::arg("qos"),
          py::arg("gamma_th"), py::arg("config"));

    py::enum_<fitting::FitModel>(m, "FitModel")
        .value("Rayleigh", fitting::FitModel::Rayleigh)
        .value("Nakagami", fitting::FitModel::Nakagami)
        .value("FisherF", fitting::FitModel::FisherF);
    py::class_<fitting::FitReport>(m, "FitReport")
        .def_readonly("model", &fitting::FitReport::model)
        .def_readonly("s", &fitting::FitReport::s)
        .def_readonly("m", &fitting::FitReport::m)
        .def_readonly("m_s", &fitting::FitReport::m_s)
        .def_readonly("omega", &fitting::FitReport::omega)
        .def_readonly("omega_m", &fitting::FitReport::omega_m)
        .def_readonly("omega_s", &fitting::FitReport::omega_s)
        .def_readonly("mse", &fitting::FitReport::mse);
    m.def(
        "fit_model",
        [](const std::vector<double>& env, fitting::FitModel model, bool normalized,
           std::uint64_t seed) {
            fitting::FitOptions o;
            o.normalized = normalized;
            o.seed = seed;
            return fitting::fit_model(env, model, o);
        },
        py::arg("envelope"), py::arg("model"), py::arg("normalized") = false,
        py::arg("seed") = 7);

    py::class_<Scenario>(m, "Scenario")
        .def("distribution", &Scenario::distribution, py::arg("kind"))
        .def_property_readonly("gbar_sr", &Scenario::gbar_sr_linear)
        .def_property_readonly("gbar_ru", &Scenario::gbar_ru_linear)
        .def_property_readonly("config_hash", &Scenario::hash);
    m.def("default_scenario", &default_scenario);
    m.def("load_scenario", &load_scenario, py::arg("path"));
}
