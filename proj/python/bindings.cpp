#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "amprb/config.hpp"
#include "amprb/exact.hpp"
#include "amprb/harness.hpp"
#include "amprb/probe.hpp"
#include "amprb/stability.hpp"

namespace py = pybind11;
using namespace amprb;

namespace {

StabilityOptions options(double eps) {
  StabilityOptions o;
  o.eps = eps;
  return o;
}

ProbeSettings settings(double T, std::uint64_t seed) {
  ProbeSettings s;
  s.T = T;
  s.seed = seed;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact solutions, partitioned solvers and normal-mode stability analysis";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::enum_<SchemeVariant>(m, "SchemeVariant")
      .value("TP", SchemeVariant::TP)
      .value("AMP_NVC", SchemeVariant::AMP_NVC)
      .value("AMP_VC", SchemeVariant::AMP_VC);

  py::enum_<InstabilityRegion>(m, "InstabilityRegion")
      .value("NONE", InstabilityRegion::None)
      .value("I", InstabilityRegion::I)
      .value("II", InstabilityRegion::II)
      .value("III", InstabilityRegion::III)
      .value("IV", InstabilityRegion::IV);

  py::enum_<GrowthSignature>(m, "GrowthSignature")
      .value("DECAYING", GrowthSignature::Decaying)
      .value("REAL_GROWTH", GrowthSignature::RealGrowth)
      .value("SIGN_ALTERNATING", GrowthSignature::SignAlternating)
      .value("OSCILLATORY", GrowthSignature::Oscillatory);

  py::class_<ModelProblemParams>(m, "ModelProblemParams")
      .def(py::init<>())
      .def_readwrite("rho", &ModelProblemParams::rho)
      .def_readwrite("mu", &ModelProblemParams::mu)
      .def_readwrite("L", &ModelProblemParams::L)
      .def_readwrite("H", &ModelProblemParams::H)
      .def_readwrite("m_b", &ModelProblemParams::m_b)
      .def_readwrite("r1", &ModelProblemParams::r1)
      .def_readwrite("r2", &ModelProblemParams::r2)
      .def_readwrite("rho_b", &ModelProblemParams::rho_b)
      .def_readwrite("I_b", &ModelProblemParams::I_b)
      .def_readwrite("alpha_b", &ModelProblemParams::alpha_b)
      .def_property_readonly("nu", &ModelProblemParams::nu)
      .def_static("disk", &ModelProblemParams::disk, py::arg("rho_b"), py::arg("r1") = 1.0, py::arg("r2") = 2.0,
                  py::arg("rho") = 1.0, py::arg("mu") = 0.1);

  py::class_<RectStabilityParams>(m, "RectStabilityParams")
      .def(py::init([](double mbar, double delta, double beta_d) { return RectStabilityParams{mbar, delta, beta_d}; }),
           py::arg("mbar") = 0.0, py::arg("delta") = 0.5, py::arg("beta_d") = 1.0)
      .def_readwrite("mbar", &RectStabilityParams::mbar)
      .def_readwrite("delta", &RectStabilityParams::delta)
      .def_readwrite("beta_d", &RectStabilityParams::beta_d);

  py::class_<AnnularStabilityParams>(m, "AnnularStabilityParams")
      .def(py::init([](double Ibar, double delta_tilde, double beta_d) {
             return AnnularStabilityParams{Ibar, delta_tilde, beta_d};
           }),
           py::arg("Ibar") = 0.0, py::arg("delta_tilde") = 0.5, py::arg("beta_d") = 1.0)
      .def_readwrite("Ibar", &AnnularStabilityParams::Ibar)
      .def_readwrite("delta_tilde", &AnnularStabilityParams::delta_tilde)
      .def_readwrite("beta_d", &AnnularStabilityParams::beta_d);

  py::class_<UnstableRoot>(m, "UnstableRoot")
      .def_readonly("A", &UnstableRoot::A)
      .def_readonly("residual", &UnstableRoot::residual)
      .def_readonly("region", &UnstableRoot::region);

  py::class_<ProbeVerdict>(m, "ProbeVerdict")
      .def_readonly("stable", &ProbeVerdict::stable)
      .def_readonly("growth_rate", &ProbeVerdict::growth_rate)
      .def_readonly("signature", &ProbeVerdict::signature)
      .def_readonly("period", &ProbeVerdict::period)
      .def_readonly("max_amplitude", &ProbeVerdict::max_amplitude)
      .def_readonly("steps", &ProbeVerdict::steps)
      .def_readonly("steps_to_threshold", &ProbeVerdict::steps_to_threshold)
      .def_readonly("dt", &ProbeVerdict::dt);

  m.def("sliding_block_eigenvalue", &sliding_block_eigenvalue, py::arg("M_r"), py::arg("index") = 0);
  m.def("annular_added_mass", &annular_added_mass, py::arg("params"));
  m.def("rotating_disk_eigenvalue", &rotating_disk_eigenvalue, py::arg("params"), py::arg("index") = 0);
  m.def("translating_disk_eigenvalue", &translating_disk_eigenvalue, py::arg("params"), py::arg("index") = 0);
  m.def("dtn_coefficient_eta", &dtn_coefficient_eta, py::arg("delta"));
  m.def("tp_threshold_mbar", &tp_threshold_mbar, py::arg("delta"));
  m.def("tp_mp_am_amplification", &tp_mp_am_amplification, py::arg("M_r"));

  m.def(
      "unstable_roots_rect",
      [](const RectStabilityParams& p, SchemeVariant v, double eps) {
        return unstable_roots_rect(p, v, RootMethod::Polynomial, options(eps)).roots;
      },
      py::arg("params"), py::arg("variant"), py::arg("eps") = 1e-3);
  m.def(
      "unstable_roots_annular",
      [](const AnnularStabilityParams& p, SchemeVariant v, double eps) {
        return unstable_roots_annular(p, AnnularProbeGrid{}.geometry(), v, options(eps)).roots;
      },
      py::arg("params"), py::arg("variant"), py::arg("eps") = 1e-3);

  m.def(
      "probe_mp_am", [](double M_r, SchemeVariant v, double T, std::uint64_t seed) {
        py::gil_scoped_release release;
        return probe_mp_am(M_r, v, settings(T, seed));
      },
      py::arg("M_r"), py::arg("variant"), py::arg("T") = 50.0, py::arg("seed") = 1);
  m.def(
      "probe_mp_ama", [](double ratio, SchemeVariant v, double T, std::uint64_t seed) {
        py::gil_scoped_release release;
        return probe_mp_ama(ratio, v, settings(T, seed));
      },
      py::arg("ratio"), py::arg("variant"), py::arg("T") = 50.0, py::arg("seed") = 1);
  m.def(
      "probe_mp_ad", [](const RectStabilityParams& p, SchemeVariant v, double T, std::uint64_t seed) {
        py::gil_scoped_release release;
        return probe_mp_ad(p, v, settings(T, seed));
      },
      py::arg("params"), py::arg("variant"), py::arg("T") = 50.0, py::arg("seed") = 1);

  m.def(
      "dump_config", [](const std::string& text) { return dump_config(parse_config(text)); }, py::arg("config_json"),
      "Parses a JSON config and returns it with every default filled in.");
  m.def(
      "run_experiment",
      [](const std::string& text, const std::string& out_dir) {
        ExperimentConfig c = parse_config(text);
        c.out_dir = out_dir;
        py::gil_scoped_release release;
        return run_experiment(c).files;
      },
      py::arg("config_json"), py::arg("out_dir") = ".", "Runs the configured experiment and returns the written paths.");
}
