#include "holo/labcli.hpp"

#include "holo/parallel.hpp"
#include "holo/rng.hpp"
#include "holo/sideband.hpp"
#include "holo/textio.hpp"
#include "holo/tomo.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace holo {

using json = nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw std::invalid_argument(where + ": unknown key '" + key + "'");
}

template <class T>
T read(const json& j, const std::string& key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(where + "." + key + ": " + e.what());
  }
}

double read_number(const json& j, const std::string& key, const std::string& where, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw std::invalid_argument(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

std::optional<double> read_optional(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return read_number(j, key, where, 0.0);
}

std::uint64_t read_count(const json& j, const std::string& key, const std::string& where, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_unsigned()) throw std::invalid_argument(where + "." + key + ": expected a non-negative integer");
  return j.at(key).get<std::uint64_t>();
}

GateChoice parse_gate(const json& j, const std::string& where) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    GateSpec s;
    try {
      s = named_gate(name);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
    return {name, s.theta, s.phi, s.gamma};
  }
  check_keys(j, {"theta", "phi", "gamma", "label"}, where);
  GateChoice g;
  g.label = read<std::string>(j, "label", where, "custom");
  g.theta = read_number(j, "theta", where, 0.0);
  g.phi = read_number(j, "phi", where, 0.0);
  g.gamma = read_number(j, "gamma", where, 0.0);
  return g;
}

json gate_to_json(const GateChoice& g) {
  return json{{"label", g.label}, {"theta", g.theta}, {"phi", g.phi}, {"gamma", g.gamma}};
}

GateSpec spec_for(const GateChoice& g, Scheme scheme, double eta) {
  GateSpec hol{g.theta, g.phi, g.gamma, eta, Scheme::Holonomic};
  hol.validate();
  if (scheme == Scheme::Holonomic) return hol;
  GateSpec dyn = GateSpec::dynamical(g.theta, g.phi, eta);
  if (!phase_equivalent(target_unitary(dyn), target_unitary(hol), 1e-9))
    throw std::invalid_argument("dynamical scheme with eta = " + text::num(eta) + " cannot realise gate '" +
                                g.label + "' (its phase is fixed to -2 pi eta)");
  return dyn;
}

// Header echoing version and resolved config, as "## " comment lines.
std::string header_text(const ExperimentConfig& c) {
  return std::string(version_string()) + "\nconfig:\n" + config_to_json(c);
}

std::string header(const ExperimentConfig& c) { return text::comment_block(header_text(c)); }

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << body;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

class Outputs {
 public:
  Outputs(const ExperimentConfig& c, std::filesystem::path dir) : config_(c), dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  void add(const std::string& name, const std::string& body, bool with_header = true) {
    write_file(dir_ / name, with_header ? header(config_) + body : body);
    result.files.emplace_back(name);
  }

  RunResult result;

 private:
  const ExperimentConfig& config_;
  std::filesystem::path dir_;
};

PropagationOptions prop_options(const ExperimentConfig& c) {
  PropagationOptions o;
  o.steps = c.steps;
  return o;
}

std::string matrix_csv(const ComplexMatrix& m, const char* cols) {
  std::ostringstream s;
  s << cols << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      s << i << ',' << j << ',' << text::num(m(i, j).real()) << ',' << text::num(m(i, j).imag()) << '\n';
  return s.str();
}

RBConfig rb_config(const ExperimentConfig& c) {
  RBConfig r;
  r.lengths = c.rb_lengths;
  r.sequences_per_length = c.rb_sequences;
  r.shots = c.rb_shots;
  r.seed = c.seed;
  r.noise = c.resolved_noise();
  r.eta = c.eta;
  r.omega_max = c.omega_max;
  r.n_samples = c.n_samples;
  r.steps = c.steps;
  r.model = c.rb_model;
  r.depolarizing = c.rb_depolarizing;
  r.threads = c.threads;
  if (c.rb_interleaved) r.interleaved = spec_for(*c.rb_interleaved, c.scheme, c.eta);
  return r;
}

void run_synth(const ExperimentConfig& c, Outputs& out) {
  const GateSpec spec = c.gate_spec();
  const PulseSchedule s = synthesize(spec, c.omega_max, c.n_samples);
  const PathParams path = spec.path(s.duration);
  std::ostringstream rows;
  rows << "t_s,omega_rad_s,phi0_rad,alpha,beta,f,chi\n";
  for (double t : s.times) {
    const ControlSample cs = controls_from_path(t, path);
    rows << text::num(cs.t) << ',' << text::num(cs.omega) << ',' << text::num(cs.phi0) << ','
         << text::num(cs.alpha) << ',' << text::num(cs.beta) << ',' << text::num(cs.f) << ','
         << text::num(cs.chi) << '\n';
  }
  out.add("controls.csv", rows.str());
  std::ostringstream sum;
  sum << "duration_s = " << text::num(s.duration) << '\n'
      << "peak_rabi_rad_s = " << text::num(s.peak_rabi()) << '\n'
      << "omega_max_rad_s = " << text::num(s.omega_max) << '\n'
      << "samples = " << s.size() << '\n'
      << "effective_gamma = " << text::num(path.effective_gamma()) << '\n';
  out.add("synth_summary.txt", sum.str());
  out.result.summary = sum.str();
}

void run_export(const ExperimentConfig& c, Outputs& out) {
  const PulseSchedule s = synthesize(c.gate_spec(), c.omega_max, c.n_samples);
  out.add("tones.csv", format_tones(s, header_text(c)), false);
  out.result.summary = "duration_s = " + text::num(s.duration) + "\n";
}

void run_propagate(const ExperimentConfig& c, Outputs& out) {
  const GateSpec spec = c.gate_spec();
  const PulseSchedule s = synthesize(spec, c.omega_max, c.n_samples);
  PropagationOptions o = prop_options(c);
  o.check_convergence = true;
  const NoiseModel noise = c.resolved_noise();
  std::ostringstream sum;
  const Matrix2 target = target_unitary(spec);
  PropagationResult r;
  try {
    r = propagate_unitary(s, noise.epsilon, o);
  } catch (const ConvergenceError& e) {
    out.result.converged = false;
    out.add("propagate_summary.txt", std::string("converged = false\nerror = ") + e.what() + "\n");
    out.result.summary = e.what();
    return;
  }
  out.add("propagator.csv", matrix_csv(r.propagator, "row,col,re,im"));
  sum << "converged = true\n"
      << "steps = " << r.steps << '\n'
      << "truncation_error = " << text::num(*r.truncation_error) << '\n'
      << "subspace_fidelity = " << text::num(fidelity_qubit_subspace(r.propagator, target)) << '\n'
      << "average_gate_fidelity = " << text::num(average_gate_fidelity(r.propagator, target)) << '\n'
      << "leakage = " << text::num(leakage(r.propagator)) << '\n';
  if (noise.has_dephasing()) {
    const auto ch = QubitChannel::from_superoperator(channel_superoperator(s, noise, prop_options(c)));
    sum << "open_average_gate_fidelity = " << text::num(channel_average_fidelity(ch, target)) << '\n';
  }
  out.add("propagate_summary.txt", sum.str());
  out.result.summary = sum.str();
}

void run_qpt(const ExperimentConfig& c, Outputs& out) {
  const GateSpec spec = c.gate_spec();
  const PulseSchedule s = synthesize(spec, c.omega_max, c.n_samples);
  const NoiseModel noise = c.resolved_noise();
  const QubitChannel channel = QubitChannel::from_superoperator(channel_superoperator(s, noise, prop_options(c)));
  std::vector<Observation> obs;
  if (c.qpt_shots > 0) {
    const auto counts = simulate_counts(channel, noise, c.qpt_shots, derive_seed(c.seed, {0x9e7}));
    std::ostringstream cs;
    write_counts_csv(cs, counts);
    out.add("counts.csv", cs.str());
    obs = to_observations(counts);
  } else {
    obs = analytic_observations(channel, noise);
  }
  const MleResult mle = mle_process(obs);
  out.add("chi.csv", matrix_csv(mle.process.chi, "m,n,re,im"));
  const ProcessMatrix ideal = ProcessMatrix::from_unitary(target_unitary(spec));
  std::ostringstream sum;
  sum << "F_att = " << text::num(process_fidelity(mle.process, ideal)) << '\n'
      << "mle_iterations = " << mle.iterations << '\n'
      << "mle_converged = " << (mle.converged ? "true" : "false") << '\n'
      << "log_likelihood = " << text::num(mle.log_likelihood) << '\n'
      << "shots = " << c.qpt_shots << (c.qpt_shots == 0 ? " (analytic)" : "") << '\n';
  out.add("qpt_summary.txt", sum.str());
  out.result.summary = sum.str();
  out.result.converged = mle.converged;
}

void run_rb_kind(const ExperimentConfig& c, Outputs& out) {
  const RBReport rep = run_rb(rb_config(c));
  std::ostringstream ref;
  write_rb_curve_csv(ref, rep.reference);
  out.add("rb_reference.csv", ref.str());
  if (rep.interleaved) {
    std::ostringstream inter;
    write_rb_curve_csv(inter, *rep.interleaved);
    out.add("rb_interleaved.csv", inter.str());
  }
  const std::string sum = rb_summary(rep);
  out.add("rb_summary.txt", sum);
  out.result.summary = sum;
}

void run_sweep_kind(const ExperimentConfig& c, Outputs& out) {
  for (const SweepTable& t : run_sweep(c)) {
    std::ostringstream s;
    s << "## gate = " << t.gate << '\n'
      << "## mode = " << (c.mode == SweepMode::Direct ? "direct (1 - average gate fidelity of the propagated gate)"
                                                       : "rb (1 - F_gate from interleaved randomized benchmarking)")
      << '\n'
      << "epsilon,scheme,infidelity_mean,infidelity_std\n";
    for (const SweepRow& r : t.rows)
      s << text::num(r.epsilon) << ',' << r.scheme << ',' << text::num(r.infidelity_mean) << ','
        << text::num(r.infidelity_std) << '\n';
    out.add("sweep_" + t.gate + ".csv", s.str());
  }
  out.result.summary = "sweep written for " + std::to_string(c.sweep_gates.size()) + " gate(s)\n";
}

void run_sideband_kind(const ExperimentConfig& c, Outputs& out) {
  SidebandSystem sys;
  sys.n_max = c.sb_n_max;
  sys.eta_ld = c.sb_eta_ld;
  sys.omega_x = c.sb_omega_x;
  sys.omega_r = c.omega_max / (2.0 * c.sb_eta_ld);
  const SidebandSchedule sched = synthesize_cphase(c.sb_gamma, c.omega_max, c.eta, c.n_samples);
  std::ostringstream rows;
  rows << "t_s,omega_tilde_rad_s,phi_tilde_rad\n";
  for (std::size_t k = 0; k < sched.pulse.size(); ++k)
    rows << text::num(sched.times()[k]) << ',' << text::num(sched.omega_tilde()[k]) << ','
         << text::num(sched.phi_tilde()[k]) << '\n';
  out.add("sideband_schedule.csv", rows.str());
  const SidebandReport rep = verify_full_model(sched, sys, c.steps);
  const Matrix4 eff = effective_propagator(sched, c.steps);
  std::ostringstream sum;
  sum << "duration_s = " << text::num(sched.duration()) << '\n'
      << "effective_conditional_phase = " << text::num(conditional_phase(eff)) << '\n'
      << format_sideband_report(rep);
  out.add("sideband_report.txt", sum.str());
  out.result.summary = sum.str();
  out.result.converged = !rep.under_truncated;
}

std::string file_digest(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string s = ss.str();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

const char* version_string() { return "holoqutrit " HOLO_VERSION; }

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Synth: return "synth";
    case ExperimentKind::Propagate: return "propagate";
    case ExperimentKind::Qpt: return "qpt";
    case ExperimentKind::Rb: return "rb";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::Sideband: return "sideband";
    case ExperimentKind::ExportAwg: return "export-awg";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::Synth, ExperimentKind::Propagate, ExperimentKind::Qpt, ExperimentKind::Rb,
                 ExperimentKind::Sweep, ExperimentKind::Sideband, ExperimentKind::ExportAwg})
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

SchemeChoice parse_scheme_choice(const std::string& t) {
  const auto colon = t.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("scheme '" + t + "': expected <scheme>:<eta>");
  SchemeChoice c;
  c.label = t;
  c.scheme = scheme_from_string(t.substr(0, colon).c_str());
  c.eta = text::parse_double(t.substr(colon + 1), "scheme eta");
  if (!(c.eta >= 0.0)) throw std::invalid_argument("scheme '" + t + "': eta must be >= 0");
  if (c.scheme == Scheme::Dynamical && !(c.eta > 0.0))
    throw std::invalid_argument("scheme '" + t + "': dynamical gates need eta > 0");
  return c;
}

GateSpec ExperimentConfig::gate_spec() const { return spec_for(gate, scheme, eta); }

NoiseModel ExperimentConfig::resolved_noise() const {
  NoiseModel n = noise;
  if (t2_1a) n.dephasing_1a = 2.0 / *t2_1a;
  if (t2_0a) n.dephasing_0a = 2.0 / *t2_0a;
  return n;
}

std::vector<double> ExperimentConfig::epsilon_grid() const {
  std::vector<double> g;
  for (int i = 0; i < eps_points; ++i)
    g.push_back(eps_points == 1 ? eps_min : eps_min + (eps_max - eps_min) * i / (eps_points - 1));
  return g;
}

void ExperimentConfig::validate() const {
  if (!(omega_max > 0.0)) throw std::invalid_argument("omega_max: must be > 0");
  if (!(eta >= 0.0)) throw std::invalid_argument("eta: must be >= 0");
  if (n_samples < 256 || n_samples % 2) throw std::invalid_argument("n_samples: must be even and >= 256");
  if (steps < n_samples) throw std::invalid_argument("steps: must be >= n_samples");
  if (t2_1a && !(*t2_1a > 0.0)) throw std::invalid_argument("noise.t2_1a: must be > 0");
  if (t2_0a && !(*t2_0a > 0.0)) throw std::invalid_argument("noise.t2_0a: must be > 0");
  try {
    resolved_noise().validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("noise: ") + e.what());
  }
  if (!(eps_min >= -0.5 && eps_max <= 0.5 && eps_min <= eps_max))
    throw std::invalid_argument("sweep.epsilon: grid must lie within [-0.5, 0.5] with min <= max");
  if (eps_points < 1) throw std::invalid_argument("sweep.epsilon.points: must be >= 1");
  if (realizations < 1) throw std::invalid_argument("sweep.realizations: must be >= 1");
  try {
    gate_spec();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("gate: ") + e.what());
  }
  if (kind == ExperimentKind::Sweep) {
    if (sweep_gates.empty()) throw std::invalid_argument("sweep.gates: must not be empty");
    if (sweep_schemes.size() < 2 || sweep_schemes.size() > 4)
      throw std::invalid_argument("sweep.schemes: list two to four schemes");
    for (const auto& g : sweep_gates)
      for (const auto& s : sweep_schemes) spec_for(g, s.scheme, s.eta);
  }
  if (kind == ExperimentKind::Rb) {
    try {
      rb_config(*this).validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("rb: ") + e.what());
    }
  }
  if (kind == ExperimentKind::Sideband) {
    SidebandSystem sys;
    sys.n_max = sb_n_max;
    sys.eta_ld = sb_eta_ld;
    sys.omega_x = sb_omega_x;
    try {
      sys.validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("sideband: ") + e.what());
    }
  }
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  check_keys(j, {"kind", "gate", "scheme", "eta", "omega_max", "n_samples", "steps", "noise", "sweep", "qpt", "rb",
                 "sideband", "seed", "threads", "out"},
             "config");
  ExperimentConfig c;
  if (j.contains("kind")) c.kind = experiment_kind_from_string(read<std::string>(j, "kind", "config", ""));
  if (j.contains("gate")) c.gate = parse_gate(j.at("gate"), "gate");
  c.scheme = scheme_from_string(read<std::string>(j, "scheme", "config", "holonomic").c_str());
  c.eta = read_number(j, "eta", "config", c.eta);
  c.omega_max = read_number(j, "omega_max", "config", c.omega_max);
  c.n_samples = read_count(j, "n_samples", "config", c.n_samples);
  c.steps = read_count(j, "steps", "config", c.steps);
  c.seed = read_count(j, "seed", "config", c.seed);
  c.threads = static_cast<unsigned>(read_count(j, "threads", "config", c.threads));
  c.out = read<std::string>(j, "out", "config", c.out);

  if (j.contains("noise")) {
    const json& n = j.at("noise");
    check_keys(n, {"epsilon", "t2_1a", "t2_0a", "prep_error", "detection_error_bright", "detection_error_dark"},
               "noise");
    c.noise.epsilon = read_number(n, "epsilon", "noise", 0.0);
    c.t2_1a = read_optional(n, "t2_1a", "noise");
    c.t2_0a = read_optional(n, "t2_0a", "noise");
    c.noise.prep_error = read_number(n, "prep_error", "noise", 0.0);
    c.noise.detection_error_bright = read_number(n, "detection_error_bright", "noise", 0.0);
    c.noise.detection_error_dark = read_number(n, "detection_error_dark", "noise", 0.0);
  }

  c.sweep_gates = {parse_gate(json("X"), "sweep.gates"), parse_gate(json("H"), "sweep.gates")};
  c.sweep_schemes = {parse_scheme_choice("holonomic:0"), parse_scheme_choice("holonomic:1"),
                     parse_scheme_choice("holonomic:0.5"), parse_scheme_choice("dynamical:0.5")};
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, {"gates", "schemes", "epsilon", "mode", "realizations"}, "sweep");
    if (s.contains("gates")) {
      c.sweep_gates.clear();
      for (const auto& g : s.at("gates")) c.sweep_gates.push_back(parse_gate(g, "sweep.gates"));
    }
    if (s.contains("schemes")) {
      c.sweep_schemes.clear();
      for (const auto& t : s.at("schemes")) {
        if (!t.is_string()) throw std::invalid_argument("sweep.schemes: entries must be strings");
        c.sweep_schemes.push_back(parse_scheme_choice(t.get<std::string>()));
      }
    }
    if (s.contains("epsilon")) {
      const json& e = s.at("epsilon");
      check_keys(e, {"min", "max", "points"}, "sweep.epsilon");
      c.eps_min = read_number(e, "min", "sweep.epsilon", c.eps_min);
      c.eps_max = read_number(e, "max", "sweep.epsilon", c.eps_max);
      c.eps_points = read<int>(e, "points", "sweep.epsilon", c.eps_points);
    }
    const auto mode = read<std::string>(s, "mode", "sweep", "direct");
    if (mode == "direct") c.mode = SweepMode::Direct;
    else if (mode == "rb") c.mode = SweepMode::Rb;
    else throw std::invalid_argument("sweep.mode: expected 'direct' or 'rb'");
    c.realizations = read<int>(s, "realizations", "sweep", c.realizations);
  }
  if (j.contains("qpt")) {
    const json& q = j.at("qpt");
    check_keys(q, {"shots"}, "qpt");
    c.qpt_shots = read_count(q, "shots", "qpt", c.qpt_shots);
  }
  if (j.contains("rb")) {
    const json& r = j.at("rb");
    check_keys(r, {"lengths", "sequences", "shots", "model", "depolarizing", "interleaved"}, "rb");
    c.rb_lengths = read<std::vector<int>>(r, "lengths", "rb", c.rb_lengths);
    c.rb_sequences = read<int>(r, "sequences", "rb", c.rb_sequences);
    c.rb_shots = read_count(r, "shots", "rb", c.rb_shots);
    c.rb_model = gate_model_from_string(read<std::string>(r, "model", "rb", "pulse"));
    c.rb_depolarizing = read_number(r, "depolarizing", "rb", 0.0);
    if (r.contains("interleaved") && !r.at("interleaved").is_null())
      c.rb_interleaved = parse_gate(r.at("interleaved"), "rb.interleaved");
  }
  if (j.contains("sideband")) {
    const json& s = j.at("sideband");
    check_keys(s, {"gamma", "n_max", "eta_ld", "omega_x"}, "sideband");
    c.sb_gamma = read_number(s, "gamma", "sideband", c.sb_gamma);
    c.sb_n_max = read<int>(s, "n_max", "sideband", c.sb_n_max);
    c.sb_eta_ld = read_number(s, "eta_ld", "sideband", c.sb_eta_ld);
    c.sb_omega_x = read_number(s, "omega_x", "sideband", c.sb_omega_x);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  // threads and out are left out: outputs must not depend on them.
  json j;
  j["kind"] = to_string(c.kind);
  j["gate"] = gate_to_json(c.gate);
  j["scheme"] = to_string(c.scheme);
  j["eta"] = c.eta;
  j["omega_max"] = c.omega_max;
  j["n_samples"] = c.n_samples;
  j["steps"] = c.steps;
  j["seed"] = c.seed;
  j["noise"] = json{{"epsilon", c.noise.epsilon},
                    {"t2_1a", c.t2_1a ? json(*c.t2_1a) : json(nullptr)},
                    {"t2_0a", c.t2_0a ? json(*c.t2_0a) : json(nullptr)},
                    {"prep_error", c.noise.prep_error},
                    {"detection_error_bright", c.noise.detection_error_bright},
                    {"detection_error_dark", c.noise.detection_error_dark}};
  json gates = json::array();
  for (const auto& g : c.sweep_gates) gates.push_back(gate_to_json(g));
  json schemes = json::array();
  for (const auto& s : c.sweep_schemes) schemes.push_back(s.label);
  j["sweep"] = json{{"gates", gates},
                    {"schemes", schemes},
                    {"epsilon", json{{"min", c.eps_min}, {"max", c.eps_max}, {"points", c.eps_points}}},
                    {"mode", c.mode == SweepMode::Direct ? "direct" : "rb"},
                    {"realizations", c.realizations}};
  j["qpt"] = json{{"shots", c.qpt_shots}};
  j["rb"] = json{{"lengths", c.rb_lengths},
                 {"sequences", c.rb_sequences},
                 {"shots", c.rb_shots},
                 {"model", to_string(c.rb_model)},
                 {"depolarizing", c.rb_depolarizing},
                 {"interleaved", c.rb_interleaved ? gate_to_json(*c.rb_interleaved) : json(nullptr)}};
  j["sideband"] = json{{"gamma", c.sb_gamma}, {"n_max", c.sb_n_max}, {"eta_ld", c.sb_eta_ld}, {"omega_x", c.sb_omega_x}};
  return j.dump(2);
}

std::vector<SweepTable> run_sweep(const ExperimentConfig& c) {
  c.validate();
  const auto grid = c.epsilon_grid();
  const NoiseModel base = c.resolved_noise();
  std::vector<SweepTable> tables;
  for (const GateChoice& g : c.sweep_gates) {
    SweepTable t;
    t.gate = g.label;
    const std::size_t ns = c.sweep_schemes.size();
    std::vector<PulseSchedule> sched(ns);
    for (std::size_t s = 0; s < ns; ++s)
      sched[s] = synthesize(spec_for(g, c.sweep_schemes[s].scheme, c.sweep_schemes[s].eta), c.omega_max, c.n_samples);
    t.rows.resize(grid.size() * ns);
    // RB mode parallelises inside run_rb; direct mode over grid cells.
    const unsigned outer = c.mode == SweepMode::Direct ? c.threads : 1;
    parallel_for(t.rows.size(), outer, [&](std::size_t cell) {
      const std::size_t e = cell / ns;
      const std::size_t s = cell % ns;
      const SchemeChoice& sc = c.sweep_schemes[s];
      const GateSpec spec = sched[s].spec;
      NoiseModel noise = base;
      noise.epsilon = grid[e];
      SweepRow row{grid[e], sc.label, 0.0, 0.0};
      if (c.mode == SweepMode::Direct) {
        const Matrix2 target = target_unitary(spec);
        if (noise.has_dephasing()) {
          const auto ch = QubitChannel::from_superoperator(channel_superoperator(sched[s], noise, prop_options(c)));
          row.infidelity_mean = 1.0 - channel_average_fidelity(ch, target);
        } else {
          const Matrix3 u = propagate_unitary(sched[s], noise.epsilon, prop_options(c)).propagator;
          row.infidelity_mean = 1.0 - average_gate_fidelity(u, target);
        }
      } else {
        RBConfig r = rb_config(c);
        r.noise = noise;
        r.eta = sc.eta;
        r.sequences_per_length = c.realizations;
        r.interleaved = spec;
        r.model = GateModel::Pulse;
        const RBReport rep = run_rb(r);
        row.infidelity_mean = 1.0 - *rep.f_gate;
        row.infidelity_std = *rep.f_gate_std;
      }
      t.rows[cell] = row;
    });
    tables.push_back(std::move(t));
  }
  return tables;
}

RunResult run_experiment(const ExperimentConfig& c, const std::filesystem::path& out_dir) {
  c.validate();
  Outputs out(c, out_dir);
  switch (c.kind) {
    case ExperimentKind::Synth: run_synth(c, out); break;
    case ExperimentKind::ExportAwg: run_export(c, out); break;
    case ExperimentKind::Propagate: run_propagate(c, out); break;
    case ExperimentKind::Qpt: run_qpt(c, out); break;
    case ExperimentKind::Rb: run_rb_kind(c, out); break;
    case ExperimentKind::Sweep: run_sweep_kind(c, out); break;
    case ExperimentKind::Sideband: run_sideband_kind(c, out); break;
  }
  std::ostringstream m;
  m << "kind = " << to_string(c.kind) << '\n'
    << "seed = " << c.seed << '\n'
    << "converged = " << (out.result.converged ? "true" : "false") << '\n'
    << "files:\n";
  for (const auto& f : out.result.files) m << "  " << f.string() << " fnv1a64=" << file_digest(out_dir / f) << '\n';
  write_file(out_dir / "manifest.txt", header(c) + m.str());
  out.result.files.emplace_back("manifest.txt");
  return out.result;
}

}  // namespace holo
