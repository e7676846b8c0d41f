#include "holo/rbench.hpp"

#include "holo/parallel.hpp"
#include "holo/rng.hpp"
#include "holo/textio.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace holo {

namespace {

Matrix3 embed(const Matrix2& u) {
  Matrix3 e = Matrix3::Identity();
  e.topLeftCorner<2, 2>() = u;
  return e;
}

// (1 - d) rho + d Tr_q(rho) I_q / 2 on the qubit block; coherences with |a> scale by (1 - d).
Superop3 depolarizing_superoperator(double d) {
  Superop3 s = Superop3::Zero();
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      Matrix3 in = Matrix3::Zero();
      in(i, j) = 1.0;
      Matrix3 out = in;
      if (i < 2 || j < 2) out *= (i == 2 && j == 2) ? 1.0 : (1.0 - d);
      if (i == j && i < 2) {
        out(0, 0) += 0.5 * d;
        out(1, 1) += 0.5 * d;
      }
      s.col(3 * j + i) = vec(out);
    }
  return s;
}

GateSpec with_eta(GateSpec s, double eta) {
  s.eta = eta;
  s.scheme = Scheme::Holonomic;
  return s;
}

struct DrawnSequence {
  std::vector<int> cliffords;
  Matrix2 product = Matrix2::Identity();
  GateSpec recovery;
};

DrawnSequence draw(int m, std::uint64_t seed, const std::optional<GateSpec>& interleaved) {
  if (m < 1) throw std::invalid_argument("build_sequence: m must be >= 1");
  const auto& table = clifford_table();
  Rng rng(seed);
  std::uniform_int_distribution<int> pick(0, 23);
  DrawnSequence d;
  const Matrix2 inter = interleaved ? target_unitary(*interleaved) : Matrix2::Identity();
  for (int k = 0; k < m; ++k) {
    const int c = pick(rng);
    d.cliffords.push_back(c);
    d.product = table[static_cast<std::size_t>(c)].matrix * d.product;
    if (interleaved) d.product = inter * d.product;
  }
  d.recovery = axis_angle(d.product.adjoint());
  return d;
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

const char* to_string(GateModel model) {
  switch (model) {
    case GateModel::Pulse: return "pulse";
    case GateModel::Ideal: return "ideal";
    case GateModel::Depolarizing: return "depolarizing";
  }
  return "?";
}

GateModel gate_model_from_string(const std::string& name) {
  if (name == "pulse") return GateModel::Pulse;
  if (name == "ideal") return GateModel::Ideal;
  if (name == "depolarizing") return GateModel::Depolarizing;
  throw std::invalid_argument("unknown gate model '" + name + "' (expected pulse, ideal or depolarizing)");
}

void RBConfig::validate() const {
  if (lengths.size() < 3) throw std::invalid_argument("RBConfig: need at least three lengths");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < 1) throw std::invalid_argument("RBConfig: lengths must be >= 1");
    if (i > 0 && lengths[i] <= lengths[i - 1]) throw std::invalid_argument("RBConfig: lengths must increase");
  }
  if (sequences_per_length < 2) throw std::invalid_argument("RBConfig: sequences_per_length must be >= 2");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("RBConfig: eta must be >= 0");
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) throw std::invalid_argument("RBConfig: omega_max must be > 0");
  if (!(depolarizing >= 0.0 && depolarizing <= 1.0)) throw std::invalid_argument("RBConfig: depolarizing outside [0, 1]");
  if (steps == 0) throw std::invalid_argument("RBConfig: steps must be >= 1");
  noise.validate();
  if (interleaved) interleaved->validate();
}

RBSequence build_sequence(int m, std::uint64_t seed, const std::optional<GateSpec>& interleaved, double eta) {
  const DrawnSequence d = draw(m, seed, interleaved);
  RBSequence s;
  for (int c : d.cliffords) {
    s.gates.push_back(with_eta(clifford_table()[static_cast<std::size_t>(c)].spec, eta));
    if (interleaved) s.gates.push_back(*interleaved);
  }
  s.recovery = with_eta(d.recovery, eta);
  return s;
}

Superop3 gate_channel(const GateSpec& spec, const RBConfig& config) {
  switch (config.model) {
    case GateModel::Pulse: {
      const PulseSchedule sched = synthesize(spec, config.omega_max, config.n_samples);
      PropagationOptions opt;
      opt.steps = config.steps;
      return channel_superoperator(sched, config.noise, opt);
    }
    case GateModel::Ideal: return unitary_superoperator(embed(target_unitary(spec)));
    case GateModel::Depolarizing:
      return depolarizing_superoperator(config.depolarizing) * unitary_superoperator(embed(target_unitary(spec)));
  }
  throw std::logic_error("gate_channel: bad model");
}

RBCurve run_rb_curve(const RBConfig& config, bool interleave) {
  config.validate();
  if (interleave && !config.interleaved) throw std::invalid_argument("run_rb_curve: no interleaved gate configured");
  const auto& table = clifford_table();
  const std::optional<GateSpec> inter = interleave ? config.interleaved : std::nullopt;

  std::vector<Superop3> cache(24);
  parallel_for(24, config.threads, [&](std::size_t i) {
    cache[i] = gate_channel(with_eta(table[i].spec, config.eta), config);
  });
  const Superop3 inter_channel = inter ? gate_channel(*inter, config) : Superop3::Identity();

  struct Job {
    int m;
    int idx;
  };
  std::vector<Job> jobs;
  for (int m : config.lengths)
    for (int i = 0; i < config.sequences_per_length; ++i) jobs.push_back({m, i});
  std::vector<double> survival(jobs.size());

  const NoiseModel& n = config.noise;
  const std::uint64_t tag = interleave ? 1 : 0;
  parallel_for(jobs.size(), config.threads, [&](std::size_t j) {
    const auto m = static_cast<std::uint64_t>(jobs[j].m);
    const auto idx = static_cast<std::uint64_t>(jobs[j].idx);
    const DrawnSequence d = draw(jobs[j].m, derive_seed(config.seed, {tag, m, idx}), inter);
    Matrix3 rho = Matrix3::Zero();
    rho(0, 0) = 1.0 - n.prep_error;
    rho(1, 1) = n.prep_error;
    for (int c : d.cliffords) {
      rho = apply_superoperator(cache[static_cast<std::size_t>(c)], rho);
      if (inter) rho = apply_superoperator(inter_channel, rho);
    }
    const GateSpec rec = with_eta(d.recovery, config.eta);
    if (const auto c = find_clifford(target_unitary(rec))) {
      rho = apply_superoperator(cache[static_cast<std::size_t>(*c)], rho);
    } else {
      rho = apply_superoperator(gate_channel(rec, config), rho);
    }
    const double p0 = std::clamp(rho(0, 0).real(), 0.0, 1.0);
    double rec_bright = p0 * (1.0 - n.detection_error_bright) + (1.0 - p0) * n.detection_error_dark;
    if (config.shots > 0) {
      Rng rng(derive_seed(config.seed, {tag, m, idx, 0xb0b}));
      std::binomial_distribution<std::uint64_t> shots(config.shots, rec_bright);
      rec_bright = static_cast<double>(shots(rng)) / static_cast<double>(config.shots);
    }
    survival[j] = rec_bright;
  });

  RBCurve curve;
  curve.interleaved = interleave;
  std::size_t j = 0;
  for (int m : config.lengths) {
    std::vector<double> v(survival.begin() + static_cast<std::ptrdiff_t>(j),
                          survival.begin() + static_cast<std::ptrdiff_t>(j + config.sequences_per_length));
    j += static_cast<std::size_t>(config.sequences_per_length);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    curve.lengths.push_back(m);
    curve.mean.push_back(mean);
    curve.stddev.push_back(sample_std(v, mean));
    curve.n_sequences.push_back(config.sequences_per_length);
  }
  const std::vector<double> ms(curve.lengths.begin(), curve.lengths.end());
  curve.fit = fit_decay(ms, curve.mean);
  return curve;
}

RBReport run_rb(const RBConfig& config) {
  RBReport r;
  r.reference = run_rb_curve(config, false);
  const double p_ref = r.reference.fit.p;
  r.f_ave = 1.0 - (1.0 - p_ref) / 2.0;
  if (config.interleaved) {
    r.interleaved = run_rb_curve(config, true);
    const double p_gate = r.interleaved->fit.p;
    r.f_gate = 1.0 - (1.0 - p_gate / p_ref) / 2.0;
    const double var_g = r.interleaved->fit.covariance(1, 1);
    const double var_r = r.reference.fit.covariance(1, 1);
    r.f_gate_std = 0.5 * std::sqrt(std::max(0.0, var_g / (p_ref * p_ref) +
                                                     var_r * p_gate * p_gate / std::pow(p_ref, 4)));
    r.non_clifford_interleaved = !find_clifford(target_unitary(*config.interleaved)).has_value();
  }
  return r;
}

void write_rb_curve_csv(std::ostream& out, const RBCurve& curve) {
  out << "m,mean_fidelity,std,n_sequences\n";
  for (std::size_t i = 0; i < curve.lengths.size(); ++i)
    out << curve.lengths[i] << ',' << text::num(curve.mean[i]) << ',' << text::num(curve.stddev[i]) << ','
        << curve.n_sequences[i] << '\n';
}

std::string rb_summary(const RBReport& report) {
  std::ostringstream s;
  auto block = [&](const char* name, const RBCurve& c) {
    s << name << ".A = " << text::num(c.fit.a) << '\n';
    s << name << ".p = " << text::num(c.fit.p) << '\n';
    s << name << ".B = " << text::num(c.fit.b) << '\n';
    s << name << ".p_std = " << text::num(std::sqrt(std::max(0.0, c.fit.covariance(1, 1)))) << '\n';
    s << name << ".fit_iterations = " << c.fit.iterations << '\n';
  };
  block("reference", report.reference);
  s << "F_ave = " << text::num(report.f_ave) << '\n';
  if (report.interleaved) {
    block("interleaved", *report.interleaved);
    s << "F_gate = " << text::num(*report.f_gate) << '\n';
    s << "F_gate_std = " << text::num(*report.f_gate_std) << '\n';
    s << "interleaved_clifford = " << (report.non_clifford_interleaved ? "false" : "true") << '\n';
    if (report.non_clifford_interleaved)
      s << "note = interleaved gate is not a Clifford; F_gate is an approximate decay interpretation\n";
  }
  return s.str();
}

}  // namespace holo
