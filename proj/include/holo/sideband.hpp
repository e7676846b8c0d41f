#pragma once

// Blue-sideband controlled-phase gate on spin (x) phonon.
//
// Basis index = spin * (n_max + 1) + n with spin 0 = |0>, 1 = |1>, 2 = |a>.
// The pair {|a,0>, |1,1>} is driven exactly like the single-qubit |a>, |1>
// transition with theta = 0, so the single-qubit synthesis is reused with
// Omega~ = Omega1 and phi~ = phi1.

#include "holo/engine.hpp"
#include "holo/pulses.hpp"
#include "holo/qcore.hpp"

#include <string>

namespace holo {

struct SidebandSystem {
  int n_max = 5;
  double eta_ld = 0.1;
  double omega_r = kDefaultOmegaMax / (2.0 * 0.1);  ///< peak Raman Rabi rate, rad/s
  double omega_x = 2.0 * kPi * 2.4e6;              ///< trap frequency, rad/s

  int dim() const { return 3 * (n_max + 1); }
  int index(int spin, int n) const { return spin * (n_max + 1) + n; }
  /// 2 eta_LD Omega_r, the effective coupling scale of the |a,0> <-> |1,1> pair.
  double effective_omega_max() const { return 2.0 * eta_ld * omega_r; }
  void validate() const;
};

struct SidebandSchedule {
  PulseSchedule pulse;  ///< theta = 0 single-qubit schedule
  double gamma = 0.0;
  double eta = 0.0;

  double duration() const { return pulse.duration; }
  const std::vector<double>& times() const { return pulse.times; }
  const std::vector<double>& omega_tilde() const { return pulse.omega1; }
  const std::vector<double>& phi_tilde() const { return pulse.phi1; }
  void validate() const;
};

/// i Omega_r eta_LD (sigma+ a^dagger e^{i phi} + h.c.) with sigma+ = |1><a|.
ComplexMatrix anti_jc_hamiltonian(const SidebandSystem& sys, double omega_r, double phi);

/// Raman drive (Omega_r, phi) reproducing the effective coupling
/// Omega~/2 e^{-i phi~} on <1,1|H|a,0>: Omega_r = Omega~ / (2 eta_LD), phi = -phi~ - pi/2.
struct RamanDrive {
  double omega_r = 0.0;
  double phi = 0.0;
};
RamanDrive raman_from_effective(double omega_tilde, double phi_tilde, double eta_ld);

SidebandSchedule synthesize_cphase(double gamma, double omega_tilde_max = kDefaultOmegaMax, double eta = 0.2,
                                   std::size_t n_samples = kDefaultSamples);

/// diag(1, 1, 1, e^{i gamma}) on |00>, |01>, |10>, |11>.
Matrix4 cphase_target(double gamma);

/// Computational block from the effective three-level propagation: |11> takes
/// the |1> -> |1> amplitude, the other three states are untouched.
Matrix4 effective_propagator(const SidebandSchedule& schedule, std::size_t steps = kDefaultSteps);

/// arg(<11|U|11> conj(<00|U|00>))
double conditional_phase(const Matrix4& u);

/// |Tr(P U^dagger P V)| / 4 with P the computational projector.
double cphase_fidelity(const Matrix4& block, double gamma);

struct SidebandReport {
  int n_max = 0;
  double eta_ld = 0.0;
  double peak_omega_r = 0.0;
  double conditional_phase = 0.0;
  double subspace_fidelity = 0.0;
  double leakage = 0.0;               ///< max over computational inputs
  double fixed_point_deviation = 0.0; ///< max over |1,0> and |0,n>
  double truncation_change = 0.0;     ///< computational block change at n_max + 2
  bool under_truncated = false;       ///< truncation_change > 1e-6
  Matrix4 block = Matrix4::Zero();
};

/// Full anti-JC propagation of a truncated n_max model (and n_max + 2 for the
/// truncation check), fourth-order Magnus on the same step grid as the engine.
ComplexMatrix full_propagator(const SidebandSchedule& schedule, const SidebandSystem& sys,
                              std::size_t steps = kDefaultSteps);
SidebandReport verify_full_model(const SidebandSchedule& schedule, const SidebandSystem& sys,
                                 std::size_t steps = kDefaultSteps);

/// key = value text report.
std::string format_sideband_report(const SidebandReport& r);

}  // namespace holo
