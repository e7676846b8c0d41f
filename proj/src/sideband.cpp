#include "holo/sideband.hpp"

#include "holo/textio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace holo {

namespace {

const double kGaussOffset = std::sqrt(3.0) / 6.0;
const double kMagnusCommutator = std::sqrt(3.0) / 12.0;

// Computational states |00>, |01>, |10>, |11> in the full basis.
std::array<int, 4> computational(const SidebandSystem& sys) {
  return {sys.index(0, 0), sys.index(0, 1), sys.index(1, 0), sys.index(1, 1)};
}

Matrix4 computational_block(const ComplexMatrix& u, const SidebandSystem& sys) {
  const auto c = computational(sys);
  Matrix4 b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) b(i, j) = u(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]);
  return b;
}

}  // namespace

void SidebandSystem::validate() const {
  if (n_max < 3) throw std::invalid_argument("SidebandSystem: n_max must be >= 3");
  if (!(eta_ld > 0.0 && eta_ld <= 0.3)) throw std::invalid_argument("SidebandSystem: eta_ld outside (0, 0.3]");
  if (!(omega_r > 0.0) || !std::isfinite(omega_r)) throw std::invalid_argument("SidebandSystem: omega_r must be > 0");
  if (!(omega_x > 0.0) || !std::isfinite(omega_x)) throw std::invalid_argument("SidebandSystem: omega_x must be > 0");
}

void SidebandSchedule::validate() const {
  pulse.validate();
  if (pulse.spec.theta != 0.0) throw std::invalid_argument("SidebandSchedule: pulse must have theta = 0");
  const auto& w = omega_tilde();
  const double peak = *std::max_element(w.begin(), w.end());
  if (std::abs(peak - pulse.omega_max) > 1e-3 * pulse.omega_max)
    throw std::invalid_argument("SidebandSchedule: peak coupling differs from the bound by more than 0.1%");
  const std::size_t n = pulse.intervals();
  if (w[0] != 0.0 || w[n / 2] != 0.0 || w[n] != 0.0)
    throw std::invalid_argument("SidebandSchedule: coupling must vanish at 0, T/2 and T");
}

ComplexMatrix anti_jc_hamiltonian(const SidebandSystem& sys, double omega_r, double phi) {
  sys.validate();
  if (!(omega_r >= 0.0)) throw std::invalid_argument("anti_jc_hamiltonian: omega_r must be >= 0");
  ComplexMatrix h = ComplexMatrix::Zero(sys.dim(), sys.dim());
  const Complex g = kI * omega_r * sys.eta_ld * std::polar(1.0, phi);
  for (int n = 0; n < sys.n_max; ++n) {
    const int up = sys.index(1, n + 1);
    const int down = sys.index(2, n);
    h(up, down) = g * std::sqrt(static_cast<double>(n + 1));
    h(down, up) = std::conj(h(up, down));
  }
  return h;
}

RamanDrive raman_from_effective(double omega_tilde, double phi_tilde, double eta_ld) {
  return {omega_tilde / (2.0 * eta_ld), -phi_tilde - 0.5 * kPi};
}

SidebandSchedule synthesize_cphase(double gamma, double omega_tilde_max, double eta, std::size_t n_samples) {
  GateSpec spec;
  spec.theta = 0.0;
  spec.phi = 0.0;
  spec.gamma = gamma;
  spec.eta = eta;
  SidebandSchedule s{synthesize(spec, omega_tilde_max, n_samples), gamma, eta};
  s.validate();
  return s;
}

Matrix4 cphase_target(double gamma) {
  Matrix4 v = Matrix4::Identity();
  v(3, 3) = std::polar(1.0, gamma);
  return v;
}

Matrix4 effective_propagator(const SidebandSchedule& schedule, std::size_t steps) {
  PropagationOptions opt;
  opt.steps = steps;
  const Matrix3 u = propagate_unitary(schedule.pulse, 0.0, opt).propagator;
  Matrix4 b = Matrix4::Identity();
  b(3, 3) = u(1, 1);
  return b;
}

double conditional_phase(const Matrix4& u) { return std::arg(u(3, 3) * std::conj(u(0, 0))); }

double cphase_fidelity(const Matrix4& block, double gamma) {
  return std::abs((block.adjoint() * cphase_target(gamma)).trace()) / 4.0;
}

ComplexMatrix full_propagator(const SidebandSchedule& schedule, const SidebandSystem& sys, std::size_t steps) {
  sys.validate();
  const PulseSchedule& p = schedule.pulse;
  p.check_structure();
  const std::size_t n = p.intervals();
  if (steps < n) throw std::invalid_argument("full_propagator: steps must be >= sample intervals");
  const std::size_t sub = (steps + n - 1) / n;
  const double dw = 1.0 / static_cast<double>(sub);
  const double h = dw * p.step();

  // Effective complex amplitude Omega~ e^{-i phi~}, interpolated like the engine's tones.
  std::vector<Complex> amp(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) amp[k] = std::polar(p.omega1[k], -p.phi1[k]);
  auto ham = [&](std::size_t k, double w) {
    const Complex a = (1.0 - w) * amp[k] + w * amp[k + 1];
    const RamanDrive r = raman_from_effective(std::abs(a), -std::arg(a), sys.eta_ld);
    return anti_jc_hamiltonian(sys, r.omega_r, r.phi);
  };

  ComplexMatrix u = ComplexMatrix::Identity(sys.dim(), sys.dim());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < sub; ++j) {
      const double w0 = j * dw;
      const ComplexMatrix ha = ham(k, w0 + (0.5 - kGaussOffset) * dw);
      const ComplexMatrix hb = ham(k, w0 + (0.5 + kGaussOffset) * dw);
      const ComplexMatrix gen = -kI * (0.5 * h) * (ha + hb) - kMagnusCommutator * h * h * (hb * ha - ha * hb);
      u = matrix_exponential(gen) * u;
    }
  }
  if (!is_unitary(u, kUnitarityAccept)) throw ConvergenceError("full_propagator: lost unitarity");
  return u;
}

SidebandReport verify_full_model(const SidebandSchedule& schedule, const SidebandSystem& sys, std::size_t steps) {
  const ComplexMatrix u = full_propagator(schedule, sys, steps);
  SidebandReport r;
  r.n_max = sys.n_max;
  r.eta_ld = sys.eta_ld;
  r.peak_omega_r = *std::max_element(schedule.omega_tilde().begin(), schedule.omega_tilde().end()) /
                   (2.0 * sys.eta_ld);
  r.block = computational_block(u, sys);
  r.conditional_phase = conditional_phase(r.block);
  r.subspace_fidelity = cphase_fidelity(r.block, schedule.gamma);
  for (int j = 0; j < 4; ++j) r.leakage = std::max(r.leakage, 1.0 - r.block.col(j).squaredNorm());
  r.leakage = std::max(r.leakage, 0.0);

  std::vector<int> fixed{sys.index(1, 0)};
  for (int n = 0; n <= sys.n_max; ++n) fixed.push_back(sys.index(0, n));
  for (int i : fixed) r.fixed_point_deviation = std::max(r.fixed_point_deviation, std::abs(1.0 - std::norm(u(i, i))));

  SidebandSystem bigger = sys;
  bigger.n_max += 2;
  const Matrix4 big_block = computational_block(full_propagator(schedule, bigger, steps), bigger);
  r.truncation_change = (big_block - r.block).cwiseAbs().maxCoeff();
  r.under_truncated = r.truncation_change > 1e-6;
  return r;
}

std::string format_sideband_report(const SidebandReport& r) {
  std::ostringstream s;
  s << "n_max = " << r.n_max << '\n';
  s << "eta_ld = " << text::num(r.eta_ld) << '\n';
  s << "phase_mapping = Omega_r = Omega~/(2 eta_ld), phi = -phi~ - pi/2\n";
  s << "peak_omega_r_rad_s = " << text::num(r.peak_omega_r) << '\n';
  s << "conditional_phase = " << text::num(r.conditional_phase) << '\n';
  s << "subspace_fidelity = " << text::num(r.subspace_fidelity) << '\n';
  s << "leakage = " << text::num(r.leakage) << '\n';
  s << "fixed_point_deviation = " << text::num(r.fixed_point_deviation) << '\n';
  s << "truncation_change = " << text::num(r.truncation_change) << '\n';
  s << "under_truncated = " << (r.under_truncated ? "true" : "false") << '\n';
  return s.str();
}

}  // namespace holo
