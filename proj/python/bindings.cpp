#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dephlab/asymptotics.hpp"
#include "dephlab/dephasing.hpp"
#include "dephlab/energy.hpp"
#include "dephlab/info_flow.hpp"
#include "dephlab/spectral_model.hpp"

namespace py = pybind11;
using namespace dephlab;

namespace {

py::dict expansion_dict(const LongTimeExpansion& ex) {
  py::dict d;
  py::list terms;
  for (const auto& t : ex.terms)
    terms.append(py::make_tuple(t.coeff, t.power, t.log_power));
  d["terms"] = terms;
  d["case"] = ex.source_case;
  d["k1"] = ex.indices.k1;
  d["k0"] = ex.indices.k0 ? py::cast(*ex.indices.k0) : py::none();
  d["k2"] = ex.indices.k2 ? py::cast(*ex.indices.k2) : py::none();
  d["decay_conditions_ok"] = ex.decay_conditions_ok;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "pure-dephasing bath energetics and information flow";

  py::register_exception<QuadratureError>(m, "QuadratureError");
  py::register_exception<ExpansionRefused>(m, "ExpansionRefused");
  py::register_exception<MellinPoleError>(m, "MellinPoleError");

  py::class_<QuadratureOptions>(m, "QuadratureOptions")
      .def(py::init<>())
      .def_readwrite("rel_tolerance", &QuadratureOptions::rel_tolerance)
      .def_readwrite("max_evaluations", &QuadratureOptions::max_evaluations);

  py::class_<SpectralModel>(m, "SpectralModel")
      .def_static("exp_cutoff", &SpectralModel::exp_cutoff, py::arg("alpha0"),
                  py::arg("lam"), py::arg("omega_c"), py::arg("omega_s") = 0.0)
      .def_static("finite_support", &SpectralModel::finite_support,
                  py::arg("alpha0"), py::arg("lam"), py::arg("omega_c"),
                  py::arg("omega_s") = 0.0)
      .def_static("log_exp_cutoff", &SpectralModel::log_exp_cutoff,
                  py::arg("alpha0"), py::arg("log_power"), py::arg("lam"),
                  py::arg("omega_s"))
      .def("evaluate", &SpectralModel::evaluate, py::arg("omega"))
      .def("evaluate_thermal", &SpectralModel::evaluate_thermal,
           py::arg("omega"), py::arg("temperature"))
      .def("alpha0", &SpectralModel::alpha0)
      .def("log_power0", &SpectralModel::log_power0)
      .def("eta1",
           [](const SpectralModel& s) { return s.moment_eta1({}).value; })
      .def("omega1",
           [](const SpectralModel& s) { return s.moment_omega1({}).value; })
      .def("validate",
           [](const SpectralModel& s) {
             const ValidationReport rep = s.validate({});
             py::dict d;
             for (const auto& c : rep.checks) d[py::str(c.name)] = c.passed;
             d["all_passed"] = rep.all_passed;
             return d;
           })
      .def("discretize_modes", &SpectralModel::discretize_modes,
           py::arg("count"), py::arg("omega_max"));

  py::class_<ModeGrid>(m, "ModeGrid")
      .def_readonly("frequencies", &ModeGrid::frequencies)
      .def_readonly("weights", &ModeGrid::weights)
      .def_readonly("couplings", &ModeGrid::couplings)
      .def_readonly("singular_origin", &ModeGrid::singular_origin)
      .def("eta1_sum", &ModeGrid::eta1_sum)
      .def("lambda_sum", &ModeGrid::lambda_sum);

  py::class_<QubitPreparation>(m, "QubitPreparation")
      .def(py::init([](double omega0, double z, double T_prep) {
             QubitPreparation p;
             p.omega0 = omega0;
             p.z = z;
             p.T_prep = T_prep;
             return p;
           }),
           py::arg("omega0") = 1.0, py::arg("z") = 0.0, py::arg("T_prep") = 1.0)
      .def_readwrite("omega0", &QubitPreparation::omega0)
      .def_readwrite("z", &QubitPreparation::z)
      .def_readwrite("T_prep", &QubitPreparation::T_prep);

  py::class_<DephasingState>(m, "DephasingState");
  m.def("make_state", &make_state, py::arg("model"), py::arg("temperature") = 0.0,
        py::arg("quad") = QuadratureOptions{},
        py::arg("force_quadrature") = false);

  m.def("lambda_of_t", &lambda_of_t, py::arg("state"), py::arg("t"));
  m.def("gamma0", &gamma0, py::arg("state"), py::arg("t"));
  m.def("gammaT", &gammaT, py::arg("state"), py::arg("t"));
  m.def(
      "gamma",
      [](const DephasingState& st, double t) { return dephlab::gamma(st, t); },
      py::arg("state"), py::arg("t"));
  m.def("xi_of_t", &xi_of_t, py::arg("state"), py::arg("t"));
  m.def("coherence", &coherence, py::arg("state"), py::arg("t"));

  m.def("d0", &d0, py::arg("prep"));
  m.def(
      "bath_energy",
      [](const QubitPreparation& prep, const SpectralModel& model,
         const std::vector<double>& times) {
        const EnergyTrajectory tr = bath_energy(prep, model, times, {});
        py::dict d;
        d["times"] = tr.times;
        d["bath_delta"] = tr.bath_delta;
        d["system_corr_delta"] = tr.system_corr_delta;
        d["asymptote_delta"] = tr.asymptote_delta;
        return d;
      },
      py::arg("prep"), py::arg("model"), py::arg("times"));
  m.def(
      "short_time_coefficient",
      [](const QubitPreparation& prep, const SpectralModel& model) {
        const auto c = short_time_coefficient(prep, model, {});
        return py::make_tuple(c.value, c.law_applies);
      },
      py::arg("prep"), py::arg("model"));

  m.def(
      "long_time_expansion",
      [](const QubitPreparation& prep, const SpectralModel& model) {
        return expansion_dict(long_time_expansion(prep, model));
      },
      py::arg("prep"), py::arg("model"));
  m.def(
      "classify_energy_regime",
      [](const QubitPreparation& prep, const SpectralModel& model) {
        const RegimeResult r = classify_energy_regime(prep, model);
        py::dict d;
        d["regime"] = to_string(r.regime);
        d["leading_coeff"] = r.leading_coeff;
        d["note"] = r.note;
        return d;
      },
      py::arg("prep"), py::arg("model"));

  m.def(
      "non_markovianity",
      [](const DephasingState& st, double t_max) {
        const MeasureResult r = non_markovianity(st, t_max);
        py::list iv;
        for (const auto& i : r.intervals)
          iv.append(py::make_tuple(i.t_start, i.t_end, i.min_rate));
        py::dict d;
        d["value"] = r.value;
        d["intervals"] = iv;
        d["tail_bound"] = r.tail_bound;
        d["lower_bound_only"] = r.lower_bound_only;
        return d;
      },
      py::arg("state"), py::arg("t_max"));
  m.def(
      "classify_flow_direction",
      [](const DephasingState& st, double t_max) {
        return to_string(classify_flow_direction(st, t_max).direction);
      },
      py::arg("state"), py::arg("t_max") = 1e3);
  m.def(
      "correspondence_report",
      [](const QubitPreparation& prep, const SpectralModel& model,
         double T_factorized, double t_max) {
        const FlowReport r =
            correspondence_report(prep, model, T_factorized, t_max, {});
        py::dict d;
        d["alpha0"] = r.alpha0;
        d["log_power0"] = r.log_power0;
        d["measure"] = r.measure.value;
        d["n_intervals"] = r.measure.intervals.size();
        d["direction"] = to_string(r.direction);
        d["energy_regime"] = to_string(r.energy_regime);
        d["verdict"] = to_string(r.verdict);
        d["narrative"] = r.narrative;
        return d;
      },
      py::arg("prep"), py::arg("model"), py::arg("T_factorized"),
      py::arg("t_max") = 1e3);

  m.def(
      "mellin_K",
      [](const SpectralModel& model, std::complex<double> s) {
        return mellin_K(model, s);
      },
      py::arg("model"), py::arg("s"));
  m.def(
      "mellin_K_numeric",
      [](const SpectralModel& model, std::complex<double> s) {
        return mellin_K_numeric(model, s, {});
      },
      py::arg("model"), py::arg("s"));
}
