#include "holo/engine.hpp"
#include "holo/gates.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace holo;

namespace {

// Constant two-tone drive; the oracle Hamiltonian is written out by hand.
PulseSchedule constant_drive(double a0, double p0, double a1, double p1, double duration, std::size_t n) {
  PulseSchedule s;
  s.duration = duration;
  s.omega_max = std::hypot(a0, a1);
  for (std::size_t k = 0; k <= n; ++k) {
    s.times.push_back(duration * static_cast<double>(k) / static_cast<double>(n));
    s.omega0.push_back(a0);
    s.phi0.push_back(p0);
    s.omega1.push_back(a1);
    s.phi1.push_back(p1);
  }
  return s;
}

ComplexMatrix constant_hamiltonian(double a0, double p0, double a1, double p1) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 2) = 0.5 * a0 * std::polar(1.0, -p0);
  h(1, 2) = 0.5 * a1 * std::polar(1.0, -p1);
  h(2, 0) = std::conj(h(0, 2));
  h(2, 1) = std::conj(h(1, 2));
  return h;
}

double p_eps_coefficient(double eta) {
  const PulseSchedule s = synthesize(GateSpec{kPi / 2, 0.0, kPi, eta});
  // Least squares of 1 - P = c eps^2 through the origin.
  double num = 0, den = 0;
  for (double e : {0.005, 0.01, 0.02}) {
    num += (1 - survival_probability(s, e)) * e * e;
    den += e * e * e * e;
  }
  return num / den;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("constant drive matches the exact exponential") {
  const double t = 120e-6;
  const PulseSchedule s = constant_drive(3e4, 0.3, 5e4, -1.1, t, 256);
  const ComplexMatrix oracle = testing::expm_hermitian(constant_hamiltonian(3e4, 0.3, 5e4, -1.1), t);
  for (Integrator integ : {Integrator::Midpoint, Integrator::Magnus4}) {
    PropagationOptions o;
    o.steps = 1024;
    o.integrator = integ;
    CHECK(testing::max_abs(ComplexMatrix(propagate_unitary(s, 0.0, o).propagator) - oracle) < 1e-11);
  }
  const ComplexMatrix scaled = testing::expm_hermitian(1.1 * constant_hamiltonian(3e4, 0.3, 5e4, -1.1), t);
  CHECK(testing::max_abs(ComplexMatrix(propagate_unitary(s, 0.1).propagator) - scaled) < 1e-11);
}

TEST_CASE("hamiltonian is Hermitian and scaled by 1 + eps") {
  const PulseSchedule s = synthesize(GateSpec{kPi / 3, 0.4, kPi / 2, 0.2});
  for (double f : {0.13, 0.5, 0.81}) {
    const Matrix3 h = hamiltonian_at(s, f * s.duration, 0.0);
    CHECK(testing::max_abs(h - h.adjoint()) == 0.0);
    CHECK(h.block<2, 2>(0, 0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(testing::max_abs(hamiltonian_at(s, f * s.duration, 0.2) - 1.2 * h) < 1e-9);
  }
  CHECK_THROWS_AS(hamiltonian_at(s, 2 * s.duration), std::invalid_argument);
}

TEST_CASE("synthesised gates realise their targets") {
  for (double eta : {0.0, 0.2, 1.0}) {
    for (double theta : {0.0, kPi / 4, kPi / 2, kPi}) {
      const GateSpec spec{theta, kPi / 2, kPi / 2, eta};
      const Matrix3 u = propagate_unitary(synthesize(spec)).propagator;
      CHECK(unitarity_error(u) < 1e-12);
      CHECK(fidelity_qubit_subspace(u, target_unitary(spec)) >= 1 - 1e-9);
      CHECK(leakage(u) < 1e-10);
    }
  }
  const GateSpec dyn = GateSpec::dynamical(kPi / 4, 0.0, 0.5);
  const Matrix3 u = propagate_unitary(synthesize(dyn)).propagator;
  CHECK(fidelity_qubit_subspace(u, target_unitary(dyn)) >= 1 - 1e-9);
}

TEST_CASE("integrator orders") {
  const PulseSchedule s = synthesize(GateSpec{kPi / 2, 0.0, kPi, 0.5}, kDefaultOmegaMax, 256);
  PropagationOptions ref;
  ref.steps = 1 << 15;
  const Matrix3 exact = propagate_unitary(s, 0.0, ref).propagator;
  auto err = [&](Integrator integ, std::size_t steps) {
    PropagationOptions o;
    o.integrator = integ;
    o.steps = steps;
    return testing::max_abs(propagate_unitary(s, 0.0, o).propagator - exact);
  };
  const double mid_ratio = err(Integrator::Midpoint, 512) / err(Integrator::Midpoint, 1024);
  const double mag_ratio = err(Integrator::Magnus4, 512) / err(Integrator::Magnus4, 1024);
  CHECK(mid_ratio == doctest::Approx(4.0).epsilon(0.1));
  CHECK(mag_ratio == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("step doubling at the default resolution") {
  for (double eta : {0.0, 1.0}) {
    PropagationOptions o;
    o.check_convergence = true;
    const PropagationResult r = propagate_unitary(synthesize(GateSpec{kPi / 2, 0.0, kPi, eta}), 0.2, o);
    REQUIRE(r.truncation_error.has_value());
    CHECK(*r.truncation_error < 1e-9);
  }
  PropagationOptions coarse;
  coarse.steps = 100;
  CHECK_THROWS_AS(propagate_unitary(synthesize(GateSpec{kPi / 2, 0.0, kPi, 0.0}), 0.0, coarse),
                  std::invalid_argument);
}

TEST_CASE("trajectory and windows") {
  const PulseSchedule s = synthesize(GateSpec{kPi / 2, 0.0, kPi, 0.2}, kDefaultOmegaMax, 512);
  PropagationOptions o;
  o.record_trajectory = true;
  const PropagationResult full = propagate_unitary(s, 0.0, o);
  CHECK(full.trajectory.size() == 512);
  PropagationOptions a;
  a.t_end = 0.5 * s.duration;
  PropagationOptions b;
  b.t_begin = 0.5 * s.duration;
  const Matrix3 split = propagate_unitary(s, 0.0, b).propagator * propagate_unitary(s, 0.0, a).propagator;
  CHECK(testing::max_abs(split - full.propagator) < 1e-13);
  CHECK(testing::max_abs(full.trajectory[255] - propagate_unitary(s, 0.0, a).propagator) < 1e-13);
  PropagationOptions off;
  off.t_end = 0.3333333 * s.duration;
  CHECK_THROWS_AS(propagate_unitary(s, 0.0, off), std::invalid_argument);
}

TEST_CASE("first-half survival follows the quadratic law") {
  // 1 - P ~ eps^2 sin^2(eta pi) / (2 eta)^2
  const double c_half = p_eps_coefficient(0.5);
  CHECK(c_half == doctest::Approx(1.0).epsilon(0.05));
  const double c_fifth = p_eps_coefficient(0.2);
  const double expected = std::pow(std::sin(0.2 * kPi) / 0.4, 2);
  CHECK(c_fifth == doctest::Approx(expected).epsilon(0.05));
  const PulseSchedule s1 = synthesize(GateSpec{kPi / 2, 0.0, kPi, 1.0});
  CHECK(1 - survival_probability(s1, 0.1) < 1e-3);
  CHECK(survival_probability(s1, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(survival_probability(synthesize(GateSpec::dynamical(0.0, 0.0, 0.5)), 0.1), std::invalid_argument);
}

TEST_CASE("Ramsey decay under pure dephasing") {
  // No drive: rho_{1a} decays as exp(-t / T2) and rho_{0a} as exp(-t / T2').
  const double t = 5e-3;
  const PulseSchedule idle = constant_drive(0.0, 0.0, 0.0, 0.0, t, 64);
  const NoiseModel n = NoiseModel::from_coherence_times();
  ComplexMatrix rho = ComplexMatrix::Constant(3, 3, 1.0 / 3.0);
  PropagationOptions o;
  o.steps = 2048;
  const OpenPropagationResult r = propagate_open(idle, n, rho, o);
  CHECK(std::abs(r.state(1, 2)) == doctest::Approx(std::exp(-t / kCoherence1a) / 3).epsilon(1e-9));
  CHECK(std::abs(r.state(0, 2)) == doctest::Approx(std::exp(-t / kCoherence0a) / 3).epsilon(1e-9));
  // Both levels dephase against each other: rates add.
  const double g01 = 0.5 * (n.dephasing_0a + n.dephasing_1a);
  CHECK(std::abs(r.state(0, 1)) == doctest::Approx(std::exp(-g01 * t) / 3).epsilon(1e-9));
  CHECK(r.state(0, 0).real() == doctest::Approx(1.0 / 3.0));
  const Matrix3 via_super = apply_superoperator(channel_superoperator(idle, n, o), Matrix3(rho));
  CHECK(testing::max_abs(via_super - r.state) < 1e-12);
}

TEST_CASE("open evolution reduces to the unitary one without dephasing") {
  const PulseSchedule s = synthesize(GateSpec{kPi / 4, 0.0, kPi, 0.2});
  const Matrix3 u = propagate_unitary(s, 0.05).propagator;
  NoiseModel n;
  n.epsilon = 0.05;
  ComplexMatrix rho = ComplexMatrix::Zero(3, 3);
  rho(0, 0) = 0.7;
  rho(1, 1) = 0.3;
  rho(0, 1) = rho(1, 0) = 0.2;
  const OpenPropagationResult r = propagate_open(s, n, rho);
  CHECK(testing::max_abs(r.state - u * rho * u.adjoint()) < 1e-9);
  CHECK(testing::max_abs(channel_superoperator(s, n) - unitary_superoperator(u)) < 1e-14);
}

TEST_CASE("superoperator RK4 matches the Liouvillian exponential for a constant drive") {
  const double t = 200e-6;
  const PulseSchedule s = constant_drive(2e4, 0.5, 4e4, 2.0, t, 128);
  NoiseModel n = NoiseModel::from_coherence_times(1e-3, 3e-3);
  const Matrix3 h(constant_hamiltonian(2e4, 0.5, 4e4, 2.0));
  const ComplexMatrix oracle = matrix_exponential(ComplexMatrix(liouvillian(h, n)), Complex(t));
  CHECK(testing::max_abs(ComplexMatrix(channel_superoperator(s, n)) - oracle) < 1e-10);
  // The Liouvillian itself: L vec(rho) = vec(-i[H, rho] + D(rho)).
  std::mt19937_64 rng(4);
  const Matrix3 rho(testing::random_hermitian(3, rng));
  Matrix3 expect = -kI * (h * rho - rho * h);
  const double g[3] = {n.dephasing_0a, n.dephasing_1a, 0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) expect(i, j) -= 0.5 * (g[i] + g[j]) * rho(i, j);
  CHECK(testing::max_abs(unvec(liouvillian(h, n) * vec(rho)) - expect) < 1e-9);
}

TEST_CASE("noise model validation") {
  NoiseModel n;
  n.epsilon = 0.6;
  CHECK_THROWS_AS(n.validate(), std::invalid_argument);
  n.epsilon = 0.0;
  n.prep_error = 1.5;
  CHECK_THROWS_AS(n.validate(), std::invalid_argument);
  CHECK_THROWS_AS(NoiseModel::from_coherence_times(0.0, 1.0), std::invalid_argument);
  const NoiseModel c = NoiseModel::from_coherence_times();
  CHECK(c.dephasing_1a == doctest::Approx(100.0));
  CHECK(c.dephasing_0a == doctest::Approx(10.0));
}

}
