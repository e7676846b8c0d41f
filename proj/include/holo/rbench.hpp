#pragma once

// Reference and interleaved randomized benchmarking over the qutrit gate
// pipeline. Every gate is a 9x9 Liouville superoperator on the qutrit, so
// leakage to |a> and dephasing are carried through the sequence.

#include "holo/engine.hpp"
#include "holo/fit.hpp"
#include "holo/gates.hpp"
#include "holo/pulses.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace holo {

enum class GateModel {
  Pulse,         ///< synthesised drive propagated under the noise model
  Ideal,         ///< exact target unitaries
  Depolarizing,  ///< exact targets followed by a qubit depolarizing channel
};

const char* to_string(GateModel model);
GateModel gate_model_from_string(const std::string& name);

struct RBConfig {
  std::vector<int> lengths{1, 2, 4, 8, 12, 16, 24, 32};
  int sequences_per_length = 20;
  std::uint64_t shots = 0;  ///< 0: exact survival probabilities
  std::uint64_t seed = 1;
  std::optional<GateSpec> interleaved;
  NoiseModel noise;
  /// Path parameter used for the Clifford and recovery pulses.
  double eta = 0.2;
  double omega_max = kDefaultOmegaMax;
  std::size_t n_samples = kDefaultSamples;
  std::size_t steps = kDefaultSteps;
  GateModel model = GateModel::Pulse;
  double depolarizing = 0.0;
  unsigned threads = 0;  ///< 0: hardware concurrency; results do not depend on it

  void validate() const;
};

struct RBSequence {
  std::vector<GateSpec> gates;  ///< Cliffords, with the interleaved gate after each one
  GateSpec recovery;
};

/// m uniformly drawn Cliffords from the stream `seed`, plus the recovery gate
/// axis_angle(inverse of the product). Clifford and recovery specs carry `eta`.
RBSequence build_sequence(int m, std::uint64_t seed, const std::optional<GateSpec>& interleaved = std::nullopt,
                          double eta = 0.0);

struct RBCurve {
  std::vector<int> lengths;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<int> n_sequences;
  DecayFit fit;
  bool interleaved = false;
};

struct RBReport {
  RBCurve reference;
  std::optional<RBCurve> interleaved;
  double f_ave = 0.0;                 ///< 1 - (1 - p_ref) / 2
  std::optional<double> f_gate;       ///< 1 - (1 - p_gate / p_ref) / 2
  std::optional<double> f_gate_std;   ///< propagated from the fit covariances
  bool non_clifford_interleaved = false;
};

/// Channel of one gate under the configured model and noise.
Superop3 gate_channel(const GateSpec& spec, const RBConfig& config);

RBCurve run_rb_curve(const RBConfig& config, bool interleave);
RBReport run_rb(const RBConfig& config);

void write_rb_curve_csv(std::ostream& out, const RBCurve& curve);
/// key = value block with A, p, B, covariance, F_ave and F_gate.
std::string rb_summary(const RBReport& report);

}  // namespace holo
