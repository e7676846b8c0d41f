#include "holo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace holo {

NoiseModel NoiseModel::from_coherence_times(double t2_1a, double t2_0a) {
  if (!(t2_1a > 0.0) || !(t2_0a > 0.0)) throw std::invalid_argument("coherence times must be positive");
  NoiseModel n;
  n.dephasing_1a = 2.0 / t2_1a;
  n.dephasing_0a = 2.0 / t2_0a;
  return n;
}

void NoiseModel::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!(epsilon >= -0.5 && epsilon <= 0.5)) throw std::invalid_argument("NoiseModel: epsilon outside [-0.5, 0.5]");
  if (!(dephasing_1a >= 0.0) || !(dephasing_0a >= 0.0) || !std::isfinite(dephasing_1a) ||
      !std::isfinite(dephasing_0a))
    throw std::invalid_argument("NoiseModel: dephasing rates must be finite and >= 0");
  if (!prob(prep_error) || !prob(detection_error_bright) || !prob(detection_error_dark))
    throw std::invalid_argument("NoiseModel: probabilities must lie in [0, 1]");
}

namespace {

// Complex tone amplitudes a_j = Omega_j exp(-i phi_j), interpolated linearly.
class Drive {
 public:
  explicit Drive(const PulseSchedule& s) : h_(s.step()), n_(s.intervals()) {
    s.check_structure();
    a0_.resize(s.size());
    a1_.resize(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      a0_[k] = std::polar(s.omega0[k], -s.phi0[k]);
      a1_[k] = std::polar(s.omega1[k], -s.phi1[k]);
    }
  }

  std::size_t intervals() const { return n_; }
  double step() const { return h_; }

  // H at t = (k + w) h with k the interval index and w in [0, 1].
  Matrix3 at(std::size_t k, double w, double scale) const {
    const Complex c0 = 0.5 * scale * ((1.0 - w) * a0_[k] + w * a0_[k + 1]);
    const Complex c1 = 0.5 * scale * ((1.0 - w) * a1_[k] + w * a1_[k + 1]);
    Matrix3 h = Matrix3::Zero();
    h(0, 2) = c0;
    h(1, 2) = c1;
    h(2, 0) = std::conj(c0);
    h(2, 1) = std::conj(c1);
    return h;
  }

  Matrix3 at_time(double t, double scale) const {
    auto k = static_cast<std::size_t>(std::floor(t / h_));
    k = std::min(k, n_ - 1);
    const double w = std::clamp(t / h_ - static_cast<double>(k), 0.0, 1.0);
    return at(k, w, scale);
  }

 private:
  double h_;
  std::size_t n_;
  std::vector<Complex> a0_;
  std::vector<Complex> a1_;
};

struct Window {
  std::size_t first = 0;  // first interval
  std::size_t last = 0;   // one past the last interval
  std::size_t substeps = 1;
};

std::size_t sample_index(double t, const PulseSchedule& s, const char* what) {
  const double x = t / s.step();
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-6 || r < 0 || r > static_cast<double>(s.intervals()))
    throw std::invalid_argument(std::string(what) + " must fall on a sample time");
  return static_cast<std::size_t>(r);
}

Window make_window(const PulseSchedule& s, const PropagationOptions& o) {
  const std::size_t n = s.intervals();
  if (o.steps < n)
    throw std::invalid_argument("propagation: steps (" + std::to_string(o.steps) +
                                ") must be >= sample intervals (" + std::to_string(n) + ")");
  Window w;
  w.first = sample_index(o.t_begin, s, "t_begin");
  w.last = o.t_end < 0.0 ? n : sample_index(o.t_end, s, "t_end");
  if (w.last < w.first) throw std::invalid_argument("propagation: t_end before t_begin");
  w.substeps = (o.steps + n - 1) / n;
  return w;
}

const double kGaussOffset = std::sqrt(3.0) / 6.0;
const double kMagnusCommutator = std::sqrt(3.0) / 12.0;

Matrix3 step_generator(const Drive& d, std::size_t k, double w0, double dw, double scale,
                       Integrator integrator) {
  const double h = dw * d.step();
  if (integrator == Integrator::Midpoint) return -kI * h * d.at(k, w0 + 0.5 * dw, scale);
  const Matrix3 ha = d.at(k, w0 + (0.5 - kGaussOffset) * dw, scale);
  const Matrix3 hb = d.at(k, w0 + (0.5 + kGaussOffset) * dw, scale);
  // Omega_4 = -i h (Ha + Hb)/2 - (sqrt3/12) h^2 [Hb, Ha]
  return -kI * (0.5 * h) * (ha + hb) - kMagnusCommutator * h * h * (hb * ha - ha * hb);
}

PropagationResult run_unitary(const Drive& d, const Window& win, double scale, Integrator integrator,
                              bool record) {
  PropagationResult r;
  const double dw = 1.0 / static_cast<double>(win.substeps);
  Matrix3 u = Matrix3::Identity();
  for (std::size_t k = win.first; k < win.last; ++k) {
    for (std::size_t j = 0; j < win.substeps; ++j) {
      u = matrix_exponential(step_generator(d, k, j * dw, dw, scale, integrator)) * u;
    }
    if (record) r.trajectory.push_back(u);
  }
  r.propagator = u;
  r.steps = (win.last - win.first) * win.substeps;
  return r;
}

}  // namespace

Matrix3 hamiltonian_at(const PulseSchedule& schedule, double t, double epsilon) {
  if (!(t >= 0.0 && t <= schedule.duration))
    throw std::invalid_argument("hamiltonian_at: t outside [0, T]");
  return Drive(schedule).at_time(t, 1.0 + epsilon);
}

PropagationResult propagate_unitary(const PulseSchedule& schedule, double epsilon,
                                    const PropagationOptions& options) {
  const Drive drive(schedule);
  const Window win = make_window(schedule, options);
  PropagationResult r = run_unitary(drive, win, 1.0 + epsilon, options.integrator, options.record_trajectory);
  if (!is_unitary(r.propagator, kUnitarityAccept))
    throw ConvergenceError("propagate_unitary: propagator lost unitarity");
  if (options.check_convergence) {
    Window fine = win;
    fine.substeps *= 2;
    const PropagationResult f = run_unitary(drive, fine, 1.0 + epsilon, options.integrator, false);
    const double change = (f.propagator - r.propagator).cwiseAbs().maxCoeff();
    r.truncation_error = change;
    if (change > 1e-6) {
      throw ConvergenceError("propagate_unitary: step doubling changed the propagator by " +
                             std::to_string(change) + " (> 1e-6) at " + std::to_string(r.steps) + " steps");
    }
  }
  return r;
}

double survival_probability(const PulseSchedule& schedule, double epsilon, const PropagationOptions& options) {
  if (schedule.spec.scheme != Scheme::Holonomic)
    throw std::invalid_argument("survival_probability: needs a holonomic schedule");
  PropagationOptions half = options;
  half.t_begin = 0.0;
  half.t_end = 0.5 * schedule.duration;
  half.record_trajectory = false;
  const Vector3 b = bright_state(schedule.spec.theta, schedule.spec.phi);
  const Vector3 ideal = propagate_unitary(schedule, 0.0, half).propagator * b;
  const Vector3 perturbed = propagate_unitary(schedule, epsilon, half).propagator * b;
  return std::norm(ideal.dot(perturbed));
}

namespace {

// Superoperator of X -> A X B for column-stacked vec: B^T (x) A.
Superop3 sandwich(const Matrix3& a, const Matrix3& b) {
  Superop3 s;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      s.block<3, 3>(3 * j, 3 * l) = b(l, j) * a;
  return s;
}

Superop3 dissipator(const NoiseModel& noise) {
  Superop3 d = Superop3::Zero();
  const Matrix3 ident = Matrix3::Identity();
  auto add = [&](int level, double rate) {
    if (rate == 0.0) return;
    Matrix3 p = Matrix3::Zero();
    p(level, level) = 1.0;
    d += rate * (sandwich(p, p) - 0.5 * sandwich(p, ident) - 0.5 * sandwich(ident, p));
  };
  add(1, noise.dephasing_1a);
  add(0, noise.dephasing_0a);
  return d;
}

Matrix3 lindblad_rhs(const Matrix3& h, const Matrix3& rho, const NoiseModel& noise) {
  Matrix3 out = -kI * (h * rho - rho * h);
  // Pure dephasing on a level k damps every coherence touching k at rate G/2.
  const double g[3] = {noise.dephasing_0a, noise.dephasing_1a, 0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) out(i, j) -= 0.5 * (g[i] + g[j]) * rho(i, j);
  return out;
}

double trace_drift(const Matrix3& rho) { return std::abs(rho.trace() - Complex(1.0)); }

}  // namespace

Superop3 unitary_superoperator(const Matrix3& u) { return sandwich(u, u.adjoint()); }

Superop3 liouvillian(const Matrix3& h, const NoiseModel& noise) {
  const Matrix3 ident = Matrix3::Identity();
  return -kI * (sandwich(h, ident) - sandwich(ident, h)) + dissipator(noise);
}

Matrix3 apply_superoperator(const Superop3& s, const Matrix3& rho) {
  Eigen::Matrix<Complex, 9, 1> v = Eigen::Map<const Eigen::Matrix<Complex, 9, 1>>(rho.data());
  v = (s * v).eval();
  return Eigen::Map<const Matrix3>(v.data());
}

OpenPropagationResult propagate_open(const PulseSchedule& schedule, const NoiseModel& noise,
                                     const ComplexMatrix& initial, const PropagationOptions& options) {
  noise.validate();
  if (initial.rows() != 3 || initial.cols() != 3) throw std::invalid_argument("propagate_open: need a 3x3 state");
  const DensityMatrix checked(initial);
  const Drive drive(schedule);
  const Window win = make_window(schedule, options);
  const double scale = 1.0 + noise.epsilon;
  const double dw = 1.0 / static_cast<double>(win.substeps);
  const double h = dw * drive.step();

  OpenPropagationResult r;
  Matrix3 rho = checked.matrix();
  for (std::size_t k = win.first; k < win.last; ++k) {
    for (std::size_t j = 0; j < win.substeps; ++j) {
      const double w = j * dw;
      const Matrix3 h0 = drive.at(k, w, scale);
      const Matrix3 h1 = drive.at(k, w + 0.5 * dw, scale);
      const Matrix3 h2 = drive.at(k, w + dw, scale);
      const Matrix3 k1 = lindblad_rhs(h0, rho, noise);
      const Matrix3 k2 = lindblad_rhs(h1, rho + 0.5 * h * k1, noise);
      const Matrix3 k3 = lindblad_rhs(h1, rho + 0.5 * h * k2, noise);
      const Matrix3 k4 = lindblad_rhs(h2, rho + h * k3, noise);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      r.max_trace_drift = std::max(r.max_trace_drift, trace_drift(rho));
    }
    if (options.record_trajectory) r.trajectory.emplace_back(rho);
  }
  r.steps = (win.last - win.first) * win.substeps;
  if (r.max_trace_drift > 1e-6)
    throw ConvergenceError("propagate_open: trace drifted by " + std::to_string(r.max_trace_drift));
  r.state = 0.5 * (rho + rho.adjoint());
  return r;
}

Superop3 channel_superoperator(const PulseSchedule& schedule, const NoiseModel& noise,
                               const PropagationOptions& options) {
  noise.validate();
  if (!noise.has_dephasing()) {
    return unitary_superoperator(propagate_unitary(schedule, noise.epsilon, options).propagator);
  }
  const Drive drive(schedule);
  const Window win = make_window(schedule, options);
  const double scale = 1.0 + noise.epsilon;
  const double dw = 1.0 / static_cast<double>(win.substeps);
  const double h = dw * drive.step();
  const Superop3 diss = dissipator(noise);
  const Matrix3 ident = Matrix3::Identity();
  auto gen = [&](const Matrix3& ham) {
    return Superop3(-kI * (sandwich(ham, ident) - sandwich(ident, ham)) + diss);
  };

  Superop3 m = Superop3::Identity();
  for (std::size_t k = win.first; k < win.last; ++k) {
    for (std::size_t j = 0; j < win.substeps; ++j) {
      const double w = j * dw;
      const Superop3 l0 = gen(drive.at(k, w, scale));
      const Superop3 l1 = gen(drive.at(k, w + 0.5 * dw, scale));
      const Superop3 l2 = gen(drive.at(k, w + dw, scale));
      const Superop3 k1 = l0 * m;
      const Superop3 k2 = l1 * (m + 0.5 * h * k1);
      const Superop3 k3 = l1 * (m + 0.5 * h * k2);
      const Superop3 k4 = l2 * (m + h * k3);
      m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  // Trace preservation: vec(I)^T M = vec(I)^T.
  Eigen::Matrix<Complex, 1, 9> tr_row = Eigen::Matrix<Complex, 1, 9>::Zero();
  tr_row(0) = tr_row(4) = tr_row(8) = 1.0;
  const double drift = (tr_row * m - tr_row).cwiseAbs().maxCoeff();
  if (drift > 1e-6) throw ConvergenceError("channel_superoperator: trace drifted by " + std::to_string(drift));
  return m;
}

}  // namespace holo
