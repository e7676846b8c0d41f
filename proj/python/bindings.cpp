#include "holo/engine.hpp"
#include "holo/fit.hpp"
#include "holo/gates.hpp"
#include "holo/labcli.hpp"
#include "holo/pulses.hpp"
#include "holo/rbench.hpp"
#include "holo/sideband.hpp"
#include "holo/tomo.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace holo;

namespace {

Matrix3 propagate(const PulseSchedule& s, double epsilon, std::size_t steps, const std::string& integrator) {
  PropagationOptions o;
  o.steps = steps;
  if (integrator == "midpoint") o.integrator = Integrator::Midpoint;
  else if (integrator != "magnus4") throw std::invalid_argument("integrator must be 'magnus4' or 'midpoint'");
  return propagate_unitary(s, epsilon, o).propagator;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Holonomic qutrit gate synthesis, propagation, tomography and benchmarking";
  m.attr("__version__") = HOLO_VERSION;

  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);

  py::enum_<Scheme>(m, "Scheme")
      .value("holonomic", Scheme::Holonomic)
      .value("dynamical", Scheme::Dynamical);

  py::class_<GateSpec>(m, "GateSpec")
      .def(py::init([](double theta, double phi, double gamma, double eta, Scheme scheme) {
             GateSpec s{theta, phi, gamma, eta, scheme};
             s.validate();
             return s;
           }),
           py::arg("theta") = 0.0, py::arg("phi") = 0.0, py::arg("gamma") = 0.0, py::arg("eta") = 0.0,
           py::arg("scheme") = Scheme::Holonomic)
      .def_static("dynamical", &GateSpec::dynamical, py::arg("theta"), py::arg("phi"), py::arg("eta"))
      .def_readwrite("theta", &GateSpec::theta)
      .def_readwrite("phi", &GateSpec::phi)
      .def_readwrite("gamma", &GateSpec::gamma)
      .def_readwrite("eta", &GateSpec::eta)
      .def_readwrite("scheme", &GateSpec::scheme)
      .def("__repr__", [](const GateSpec& s) {
        return "GateSpec(theta=" + std::to_string(s.theta) + ", phi=" + std::to_string(s.phi) +
               ", gamma=" + std::to_string(s.gamma) + ", eta=" + std::to_string(s.eta) + ", scheme='" +
               to_string(s.scheme) + "')";
      });

  py::class_<PulseSchedule>(m, "PulseSchedule")
      .def_readonly("duration", &PulseSchedule::duration)
      .def_readonly("omega_max", &PulseSchedule::omega_max)
      .def_readonly("spec", &PulseSchedule::spec)
      .def_readonly("times", &PulseSchedule::times)
      .def_readonly("omega0", &PulseSchedule::omega0)
      .def_readonly("phi0", &PulseSchedule::phi0)
      .def_readonly("omega1", &PulseSchedule::omega1)
      .def_readonly("phi1", &PulseSchedule::phi1)
      .def("peak_rabi", &PulseSchedule::peak_rabi)
      .def("to_tones", [](const PulseSchedule& s) { return format_tones(s); });

  m.def("named_gate", [](const std::string& name) { return named_gate(name); }, py::arg("name"));
  m.def("compute_duration", &compute_duration, py::arg("spec"), py::arg("omega_max") = kDefaultOmegaMax);
  m.def("synthesize", &synthesize, py::arg("spec"), py::arg("omega_max") = kDefaultOmegaMax,
        py::arg("n_samples") = kDefaultSamples);
  m.def("target_unitary", &target_unitary, py::arg("spec"));
  m.def("axis_angle", &axis_angle, py::arg("u"));
  m.def("clifford_matrices", [] {
    std::vector<Matrix2> out;
    for (const auto& c : clifford_table()) out.push_back(c.matrix);
    return out;
  });

  m.def("propagate", &propagate, py::arg("schedule"), py::arg("epsilon") = 0.0, py::arg("steps") = kDefaultSteps,
        py::arg("integrator") = "magnus4", "Qutrit propagator of a schedule under a static Rabi error");
  m.def("survival_probability",
        [](const PulseSchedule& s, double eps) { return survival_probability(s, eps); }, py::arg("schedule"),
        py::arg("epsilon"));
  m.def("subspace_fidelity", &fidelity_qubit_subspace, py::arg("u"), py::arg("target"));
  m.def("average_gate_fidelity", &average_gate_fidelity, py::arg("u"), py::arg("target"));
  m.def("leakage", &leakage, py::arg("u"));

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init<>())
      .def_static("from_coherence_times", &NoiseModel::from_coherence_times, py::arg("t2_1a") = kCoherence1a,
                  py::arg("t2_0a") = kCoherence0a)
      .def_readwrite("epsilon", &NoiseModel::epsilon)
      .def_readwrite("dephasing_1a", &NoiseModel::dephasing_1a)
      .def_readwrite("dephasing_0a", &NoiseModel::dephasing_0a)
      .def_readwrite("prep_error", &NoiseModel::prep_error)
      .def_readwrite("detection_error_bright", &NoiseModel::detection_error_bright)
      .def_readwrite("detection_error_dark", &NoiseModel::detection_error_dark);

  m.def(
      "qpt",
      [](const PulseSchedule& s, const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed) {
        const auto ch = QubitChannel::from_superoperator(channel_superoperator(s, noise));
        const auto obs = shots == 0 ? analytic_observations(ch, noise)
                                    : to_observations(simulate_counts(ch, noise, shots, seed));
        const MleResult r = mle_process(obs);
        return py::dict(py::arg("chi") = r.process.chi, py::arg("iterations") = r.iterations,
                        py::arg("converged") = r.converged, py::arg("log_likelihood") = r.log_likelihood);
      },
      py::arg("schedule"), py::arg("noise") = NoiseModel{}, py::arg("shots") = 0, py::arg("seed") = 1,
      "Simulated process tomography of a schedule; shots = 0 uses exact probabilities");
  m.def("unitary_chi", [](const Matrix2& u) { return ProcessMatrix::from_unitary(u).chi; }, py::arg("u"));
  m.def(
      "process_fidelity",
      [](const Matrix4& a, const Matrix4& b) { return process_fidelity(ProcessMatrix{a}, ProcessMatrix{b}); },
      py::arg("chi_a"), py::arg("chi_b"));

  m.def(
      "fit_decay",
      [](const std::vector<double>& m_, const std::vector<double>& f) {
        const DecayFit r = fit_decay(m_, f);
        return py::dict(py::arg("A") = r.a, py::arg("p") = r.p, py::arg("B") = r.b,
                        py::arg("covariance") = r.covariance);
      },
      py::arg("lengths"), py::arg("values"));

  m.def(
      "run_rb",
      [](const std::vector<int>& lengths, int sequences, const std::string& model, double depolarizing,
         const NoiseModel& noise, double eta, std::optional<GateSpec> interleaved, std::uint64_t seed,
         unsigned threads) {
        RBConfig c;
        c.lengths = lengths;
        c.sequences_per_length = sequences;
        c.model = gate_model_from_string(model);
        c.depolarizing = depolarizing;
        c.noise = noise;
        c.eta = eta;
        c.interleaved = interleaved;
        c.seed = seed;
        c.threads = threads;
        const RBReport r = run_rb(c);
        py::dict d(py::arg("p_ref") = r.reference.fit.p, py::arg("A") = r.reference.fit.a,
                   py::arg("B") = r.reference.fit.b, py::arg("F_ave") = r.f_ave,
                   py::arg("mean") = r.reference.mean);
        if (r.f_gate) {
          d["F_gate"] = *r.f_gate;
          d["p_gate"] = r.interleaved->fit.p;
        }
        return d;
      },
      py::arg("lengths") = std::vector<int>{1, 2, 4, 8, 12, 16, 24, 32}, py::arg("sequences") = 20,
      py::arg("model") = "pulse", py::arg("depolarizing") = 0.0, py::arg("noise") = NoiseModel{},
      py::arg("eta") = 0.2, py::arg("interleaved") = std::nullopt, py::arg("seed") = 1, py::arg("threads") = 0);

  m.def(
      "sideband_cphase",
      [](double gamma, double eta, int n_max, double eta_ld) {
        SidebandSystem sys;
        sys.n_max = n_max;
        sys.eta_ld = eta_ld;
        const SidebandSchedule s = synthesize_cphase(gamma, kDefaultOmegaMax, eta);
        const SidebandReport r = verify_full_model(s, sys);
        return py::dict(py::arg("duration") = s.duration(), py::arg("conditional_phase") = r.conditional_phase,
                        py::arg("subspace_fidelity") = r.subspace_fidelity, py::arg("leakage") = r.leakage,
                        py::arg("truncation_change") = r.truncation_change, py::arg("block") = r.block);
      },
      py::arg("gamma"), py::arg("eta") = 0.2, py::arg("n_max") = 5, py::arg("eta_ld") = 0.1);

  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::filesystem::path& out_dir) {
        const RunResult r = run_experiment(parse_config(config_json), out_dir);
        std::vector<std::string> files;
        for (const auto& f : r.files) files.push_back(f.string());
        return py::dict(py::arg("files") = files, py::arg("converged") = r.converged,
                        py::arg("summary") = r.summary);
      },
      py::arg("config_json"), py::arg("out_dir"), "Run a JSON-configured experiment and write its files");
}
