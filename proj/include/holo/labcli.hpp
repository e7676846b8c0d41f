#pragma once

// Config-driven experiment runner behind the `holo` command line tool.
//
// Configs are JSON objects; unknown keys are rejected at every level. Every
// output file starts with a header that echoes the resolved config and the
// library version.

#include "holo/engine.hpp"
#include "holo/gates.hpp"
#include "holo/pulses.hpp"
#include "holo/rbench.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace holo {

const char* version_string();  ///< "holoqutrit <version>"

enum class ExperimentKind { Synth, Propagate, Qpt, Rb, Sweep, Sideband, ExportAwg };
const char* to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& name);

enum class SweepMode { Direct, Rb };

/// A sweep entry "holonomic:<eta>" or "dynamical:<eta>".
struct SchemeChoice {
  std::string label;
  Scheme scheme = Scheme::Holonomic;
  double eta = 0.0;
};
SchemeChoice parse_scheme_choice(const std::string& text);

/// Gate in the form of a name ("X") or explicit angles.
struct GateChoice {
  std::string label;
  double theta = 0.0;
  double phi = 0.0;
  double gamma = 0.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Synth;
  GateChoice gate{"X", kPi / 2, 0.0, kPi};
  Scheme scheme = Scheme::Holonomic;
  double eta = 0.2;
  double omega_max = kDefaultOmegaMax;
  std::size_t n_samples = kDefaultSamples;
  std::size_t steps = kDefaultSteps;
  NoiseModel noise;
  std::optional<double> t2_1a;  ///< seconds; sets noise.dephasing_1a = 2 / t2
  std::optional<double> t2_0a;
  double eps_min = -0.2;
  double eps_max = 0.2;
  int eps_points = 41;
  std::vector<GateChoice> sweep_gates;
  std::vector<SchemeChoice> sweep_schemes;
  SweepMode mode = SweepMode::Direct;
  int realizations = 2000;
  std::uint64_t seed = 1;
  std::uint64_t qpt_shots = 10000;  ///< 0: analytic probabilities
  std::vector<int> rb_lengths{1, 2, 4, 8, 12, 16, 24, 32};
  int rb_sequences = 20;
  std::uint64_t rb_shots = 0;
  GateModel rb_model = GateModel::Pulse;
  double rb_depolarizing = 0.0;
  std::optional<GateChoice> rb_interleaved;
  double sb_gamma = kPi;
  int sb_n_max = 5;
  double sb_eta_ld = 0.1;
  double sb_omega_x = 2.0 * kPi * 2.4e6;
  unsigned threads = 0;
  std::string out = "out";

  GateSpec gate_spec() const;
  NoiseModel resolved_noise() const;
  std::vector<double> epsilon_grid() const;
  void validate() const;
};

/// Parses JSON text; throws std::invalid_argument naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Resolved config as canonical JSON (sorted keys, every default spelled out).
std::string config_to_json(const ExperimentConfig& config);

struct SweepRow {
  double epsilon = 0.0;
  std::string scheme;
  double infidelity_mean = 0.0;
  double infidelity_std = 0.0;
};

struct SweepTable {
  std::string gate;
  std::vector<SweepRow> rows;
};

/// One table per sweep gate, rows ordered by epsilon then scheme.
std::vector<SweepTable> run_sweep(const ExperimentConfig& config);

struct RunResult {
  std::vector<std::filesystem::path> files;  ///< relative to the output directory
  bool converged = true;
  std::string summary;
};

/// Runs config.kind and writes its files plus manifest.txt into out_dir.
RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace holo
