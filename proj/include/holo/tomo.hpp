#pragma once

// Simulated prepare-gate-measure pipeline and maximum-likelihood process
// tomography for a single qubit.
//
// Preparations (label 0..5): I, Rx(pi), Ry(pi/2), Ry(-pi/2), Rx(-pi/2), Rx(pi/2)
// applied to |0>, i.e. |0>, |1>, |+>, |->, |+i>, |-i>.
// Measurement bases (label 0..2): Z, X, Y. X and Y are read out as Z after the
// pre-rotations Ry(-pi/2) and Rx(pi/2). The "bright" outcome is |0> after the
// pre-rotation, i.e. the +1 eigenvalue of the measured Pauli.

#include "holo/engine.hpp"
#include "holo/qcore.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace holo {

inline constexpr int kNumPreparations = 6;
inline constexpr int kNumBases = 3;

/// R_k(angle) = exp(-i angle sigma_k / 2), k in {'x','y','z'}.
Matrix2 rotation(char axis, double angle);

QuantumState prepare_input(int label);
Matrix2 preparation_rotation(int label);
Matrix2 measurement_rotation(int basis);
/// Projector onto the bright outcome of a basis.
Matrix2 bright_projector(int basis);

/// Qubit channel stored as its Choi matrix J = sum_ij |i><j| (x) E(|i><j|),
/// row/column index = 2 * in + out.
class QubitChannel {
 public:
  explicit QubitChannel(Matrix4 choi);

  static QubitChannel identity();
  static QubitChannel from_unitary(const Matrix2& u);
  /// Qubit block of a qutrit propagator (trace-decreasing when it leaks).
  static QubitChannel from_qutrit_unitary(const Matrix3& u);
  /// Qubit-to-qubit restriction of a qutrit Liouville superoperator.
  static QubitChannel from_superoperator(const Superop3& s);
  /// (1 - d) U rho U^dagger + d Tr(rho) I / 2
  static QubitChannel depolarized(const Matrix2& u, double d);

  const Matrix4& choi() const { return choi_; }
  Matrix2 apply(const Matrix2& rho) const;

 private:
  Matrix4 choi_;
};

/// 4x4 chi matrix in the operator basis (I, X, Y, Z):
/// E(rho) = sum_mn chi_mn sigma_m rho sigma_n^dagger.
struct ProcessMatrix {
  Matrix4 chi = Matrix4::Zero();

  static ProcessMatrix from_choi(const Matrix4& choi);
  static ProcessMatrix from_channel(const QubitChannel& c) { return from_choi(c.choi()); }
  static ProcessMatrix from_unitary(const Matrix2& u) { return from_choi(QubitChannel::from_unitary(u).choi()); }
  Matrix4 to_choi() const;

  /// Throws std::invalid_argument on a Hermiticity, trace, positivity or
  /// trace-preservation violation.
  void validate() const;
};

/// |Tr(chi_a chi_b^dagger)|
double process_fidelity(const ProcessMatrix& a, const ProcessMatrix& b);

/// Average gate fidelity of a (possibly trace-decreasing) channel against a
/// unitary: (<v|J|v> + Tr J) / 6 with v the vectorised target.
double channel_average_fidelity(const QubitChannel& channel, const Matrix2& target);

struct CountsRecord {
  int prep = 0;
  int basis = 0;
  std::uint64_t shots = 0;
  std::uint64_t bright = 0;
};

/// Outcome weights for one (prep, basis) setting; counts or exact probabilities.
struct Observation {
  int prep = 0;
  int basis = 0;
  double bright = 0.0;
  double dark = 0.0;
};

/// Recorded-bright probability for every (prep, basis), SPAM included.
std::vector<Observation> analytic_observations(const QubitChannel& channel, const NoiseModel& noise);

/// Binomially sampled counts; cell (p, b) draws from its own stream derived from seed.
std::vector<CountsRecord> simulate_counts(const QubitChannel& channel, const NoiseModel& noise,
                                          std::uint64_t shots, std::uint64_t seed);

std::vector<Observation> to_observations(std::span<const CountsRecord> records);

void write_counts_csv(std::ostream& out, std::span<const CountsRecord> records);
std::vector<CountsRecord> read_counts_csv(std::istream& in);

struct MleOptions {
  int max_iterations = 10000;
  double tolerance = 1e-10;  ///< stop when the log-likelihood gain falls below this
};

struct MleResult {
  ProcessMatrix process;
  int iterations = 0;
  bool converged = false;
  double log_likelihood = 0.0;
  double initial_log_likelihood = 0.0;
};

/// Least-squares Choi estimate projected to the positive cone.
Matrix4 linear_inversion(std::span<const Observation> data);

/// Fixed-point (R J R) likelihood ascent with a trace-preservation
/// normalisation each step, started from the projected linear inversion.
MleResult mle_process(std::span<const Observation> data, const MleOptions& options = {});

/// Log-likelihood sum f log p (frequencies normalised per setting).
double log_likelihood(const Matrix4& choi, std::span<const Observation> data);

}  // namespace holo
