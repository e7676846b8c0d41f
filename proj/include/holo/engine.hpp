#pragma once

#include "holo/pulses.hpp"
#include "holo/qcore.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace holo {

/// Ramsey coherence times of the |1>-|a> and |0>-|a> transitions (seconds).
inline constexpr double kCoherence1a = 20e-3;
inline constexpr double kCoherence0a = 200e-3;
inline constexpr std::size_t kDefaultSteps = 8192;

struct NoiseModel {
  double epsilon = 0.0;       ///< static fractional Rabi error, Omega -> (1 + eps) Omega
  double dephasing_1a = 0.0;  ///< rate of the sqrt(G)|1><1| jump operator, 1/s
  double dephasing_0a = 0.0;  ///< rate of the sqrt(G)|0><0| jump operator, 1/s
  double prep_error = 0.0;
  double detection_error_bright = 0.0;  ///< P(bright outcome recorded as dark)
  double detection_error_dark = 0.0;    ///< P(dark outcome recorded as bright)

  /// Dephasing rates G = 2 / T2 so that the off-diagonal element decays as exp(-t / T2).
  static NoiseModel from_coherence_times(double t2_1a = kCoherence1a, double t2_0a = kCoherence0a);

  bool has_dephasing() const { return dephasing_1a > 0.0 || dephasing_0a > 0.0; }
  void validate() const;
};

enum class Integrator {
  Midpoint,  ///< exp(-i H(t_mid) dt), second order
  Magnus4,   ///< two-point Gauss Magnus exponential, fourth order
};

struct PropagationOptions {
  /// Steps over the full cycle [0, T]; rounded up to a whole number per sample interval.
  std::size_t steps = kDefaultSteps;
  Integrator integrator = Integrator::Magnus4;
  /// Window [t_begin, t_end]; both must fall on sample times. Negative t_end means T.
  double t_begin = 0.0;
  double t_end = -1.0;
  bool record_trajectory = false;
  /// Re-run at doubled resolution and throw ConvergenceError if any entry moves > 1e-6.
  bool check_convergence = false;
};

struct PropagationResult {
  Matrix3 propagator = Matrix3::Identity();
  /// Propagator at the end of every sample interval (when recorded).
  std::vector<Matrix3> trajectory;
  std::size_t steps = 0;
  /// Max entry change on step doubling, when checked.
  std::optional<double> truncation_error;
};

struct OpenPropagationResult {
  ComplexMatrix state;  ///< final density matrix (3x3)
  std::vector<ComplexMatrix> trajectory;
  std::size_t steps = 0;
  double max_trace_drift = 0.0;
};

/// (1 + eps) [Omega0/2 e^{-i phi0} |0><a| + Omega1/2 e^{-i phi1} |1><a| + h.c.] in the
/// ordered basis (|0>, |1>, |a>), with the complex tone amplitudes linearly
/// interpolated between samples.
Matrix3 hamiltonian_at(const PulseSchedule& schedule, double t, double epsilon = 0.0);

PropagationResult propagate_unitary(const PulseSchedule& schedule, double epsilon = 0.0,
                                    const PropagationOptions& options = {});

/// |<psi(T/2)|psi_eps(T/2)>|^2 for the bright state driven over the first half.
double survival_probability(const PulseSchedule& schedule, double epsilon,
                            const PropagationOptions& options = {});

/// Lindblad evolution with pure dephasing on |1> and |0>, fixed-step RK4.
OpenPropagationResult propagate_open(const PulseSchedule& schedule, const NoiseModel& noise,
                                     const ComplexMatrix& initial, const PropagationOptions& options = {});

/// Column-stacked superoperator of the whole drive (including noise.epsilon).
Superop3 channel_superoperator(const PulseSchedule& schedule, const NoiseModel& noise,
                               const PropagationOptions& options = {});

Superop3 unitary_superoperator(const Matrix3& u);
Superop3 liouvillian(const Matrix3& h, const NoiseModel& noise);
Matrix3 apply_superoperator(const Superop3& s, const Matrix3& rho);

}  // namespace holo
