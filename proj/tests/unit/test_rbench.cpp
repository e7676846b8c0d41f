#include "holo/rbench.hpp"
#include "holo/rng.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace holo;

namespace {

Matrix2 product(const RBSequence& s) {
  Matrix2 u = Matrix2::Identity();
  for (const GateSpec& g : s.gates) u = target_unitary(g) * u;
  return target_unitary(s.recovery) * u;
}

}  // namespace

TEST_SUITE("rbench") {

TEST_CASE("single-Clifford sequence recovers with the inverse") {
  bool found_x = false;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const RBSequence s = build_sequence(1, seed);
    REQUIRE(s.gates.size() == 1);
    CHECK(phase_distance(target_unitary(s.recovery), target_unitary(s.gates[0]).adjoint()) < 1e-10);
    if (phase_distance(target_unitary(s.gates[0]), pauli_x()) < 1e-10) {
      found_x = true;
      CHECK(phase_distance(target_unitary(s.recovery), pauli_x()) < 1e-10);
    }
  }
  CHECK(found_x);
}

TEST_CASE("sequences compose to the identity") {
  const GateSpec t = named_gate("T");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RBSequence plain = build_sequence(12, seed, std::nullopt, 0.2);
    CHECK(plain.gates.size() == 12);
    CHECK(phase_distance(product(plain), Matrix2::Identity()) < 1e-10);
    CHECK(plain.recovery.eta == 0.2);
    const RBSequence inter = build_sequence(7, seed, t);
    CHECK(inter.gates.size() == 14);
    CHECK(phase_distance(product(inter), Matrix2::Identity()) < 1e-10);
  }
  CHECK_THROWS_AS(build_sequence(0, 1), std::invalid_argument);
}

TEST_CASE("ideal gates survive with certainty") {
  RBConfig c;
  c.model = GateModel::Ideal;
  c.sequences_per_length = 5;
  const RBCurve curve = run_rb_curve(c, false);
  for (double f : curve.mean) CHECK(f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(curve.fit.p == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("depolarizing model follows the analytic decay") {
  // Survival after m Cliffords and the recovery, each followed by
  // depolarizing d: 1/2 + (1/2)(1 - d)^(m + 1).
  RBConfig c;
  c.model = GateModel::Depolarizing;
  c.depolarizing = 0.01;
  const RBCurve curve = run_rb_curve(c, false);
  for (std::size_t i = 0; i < curve.lengths.size(); ++i)
    CHECK(curve.mean[i] == doctest::Approx(0.5 + 0.5 * std::pow(0.99, curve.lengths[i] + 1)).epsilon(1e-12));
  CHECK(std::abs(curve.fit.p - 0.99) <= 0.002);
  const RBReport rep = run_rb(c);
  CHECK(rep.f_ave == doctest::Approx(1 - 0.01 / 2).epsilon(1e-3));
}

TEST_CASE("interleaved depolarizing gate") {
  RBConfig c;
  c.model = GateModel::Depolarizing;
  c.depolarizing = 0.01;
  c.interleaved = named_gate("X");
  const RBReport r = run_rb(c);
  REQUIRE(r.f_gate.has_value());
  CHECK(r.interleaved->fit.p == doctest::Approx(0.99 * 0.99).epsilon(1e-6));
  CHECK(*r.f_gate == doctest::Approx(0.995).epsilon(1e-6));
  CHECK_FALSE(r.non_clifford_interleaved);
  c.interleaved = named_gate("T");
  CHECK(run_rb(c).non_clifford_interleaved);
}

TEST_CASE("results do not depend on the thread count") {
  RBConfig c;
  c.model = GateModel::Depolarizing;
  c.depolarizing = 0.02;
  c.shots = 200;
  c.seed = 99;
  c.threads = 1;
  std::ostringstream a, b;
  write_rb_curve_csv(a, run_rb_curve(c, false));
  c.threads = 4;
  write_rb_curve_csv(b, run_rb_curve(c, false));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("m,mean_fidelity,std,n_sequences\n", 0) == 0);
}

TEST_CASE("pulse pipeline: robust path beats the plain one under Rabi error") {
  RBConfig c;
  c.lengths = {1, 2, 4, 8, 16};
  c.sequences_per_length = 10;
  c.noise.epsilon = 0.1;
  c.eta = 0.0;
  const double f0 = run_rb(c).f_ave;
  c.eta = 1.0;
  const double f1 = run_rb(c).f_ave;
  CHECK(f1 > f0);
  c.noise.epsilon = 0.0;
  c.eta = 0.2;
  CHECK(run_rb(c).f_ave >= 0.999);
}

TEST_CASE("config validation") {
  RBConfig c;
  c.lengths = {1, 4};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.lengths = {1, 4, 4};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.lengths = {1, 4, 8};
  c.sequences_per_length = 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(gate_model_from_string("ideal") == GateModel::Ideal);
  CHECK_THROWS_AS(gate_model_from_string("perfect"), std::invalid_argument);
}

}
