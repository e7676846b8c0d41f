#include "holo/gates.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace holo;

TEST_SUITE("gates") {

TEST_CASE("named gates equal the standard matrices") {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix2 x, h, t, s;
  x << 0, 1, 1, 0;
  h << r, r, r, -r;
  t << 1, 0, 0, std::polar(1.0, kPi / 4);
  s << 1, 0, 0, kI;
  CHECK(testing::max_abs(target_unitary(named_gate("X")) - x) < 1e-12);
  CHECK(testing::max_abs(target_unitary(named_gate("H")) - h) < 1e-12);
  CHECK(testing::max_abs(target_unitary(named_gate("T")) - t) < 1e-12);
  CHECK(testing::max_abs(target_unitary(named_gate("S")) - s) < 1e-12);
  CHECK(testing::max_abs(target_unitary(named_gate("Y")) - pauli_y()) < 1e-12);
  CHECK(testing::max_abs(target_unitary(named_gate("Z")) - pauli_z()) < 1e-12);
  CHECK_THROWS_AS(named_gate("CNOT"), std::invalid_argument);
}

TEST_CASE("U(gamma) U(-gamma) = I") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> th(0, kPi), ph(-kPi, kPi), ga(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    GateSpec a{th(rng), ph(rng), ga(rng)};
    GateSpec b = a;
    b.gamma = -a.gamma;
    CHECK(testing::max_abs(target_unitary(a) * target_unitary(b) - Matrix2::Identity()) < 1e-15);
  }
}

TEST_CASE("dynamical and holonomic targets coincide at gamma = gamma_D") {
  const GateSpec d = GateSpec::dynamical(0.8, -0.4, 0.3);
  const GateSpec h{0.8, -0.4, -2 * kPi * 0.3, 0.3};
  CHECK(testing::max_abs(target_unitary(d) - target_unitary(h)) < 1e-15);
}

TEST_CASE("axis_angle conventions") {
  const GateSpec x = axis_angle(pauli_x());
  CHECK(x.theta == doctest::Approx(kPi / 2));
  CHECK(x.phi == doctest::Approx(0.0));
  CHECK(x.gamma == doctest::Approx(kPi));
  const GateSpec id = axis_angle(std::polar(1.0, 0.3) * Matrix2::Identity());
  CHECK(id.theta == 0.0);
  CHECK(id.phi == 0.0);
  CHECK(id.gamma == 0.0);
  // Half turn about -x is reported about +x.
  const GateSpec mx = axis_angle(-pauli_x());
  CHECK(mx.phi == doctest::Approx(0.0));
  Matrix2 bad = Matrix2::Identity();
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(axis_angle(bad), std::invalid_argument);
}

TEST_CASE("axis_angle inverts target_unitary on random SU(2)") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 1000; ++i) {
    const Matrix2 u = testing::random_unitary(2, rng);
    const GateSpec s = axis_angle(u);
    CHECK(s.gamma >= 0.0);
    CHECK(s.gamma <= kPi + 1e-15);
    CHECK(s.phi >= -kPi);
    CHECK(s.phi < kPi);
    CHECK(phase_distance(target_unitary(s), u) < 1e-10);
  }
}

TEST_CASE("canonical phase makes the first nonzero entry real-positive") {
  const Matrix2 c = canonical_phase(std::polar(1.0, 1.2) * pauli_y());
  CHECK(c(1, 0).real() > 0.0);
  CHECK(std::abs(c(1, 0).imag()) < 1e-15);
  CHECK(phase_equivalent(c, pauli_y()));
}

TEST_CASE("Clifford table is a group of 24 distinct elements") {
  const auto& table = clifford_table();
  for (std::size_t i = 0; i < 24; ++i) {
    CHECK(table[i].index == static_cast<int>(i));
    CHECK(phase_distance(table[i].matrix, target_unitary(table[i].spec)) < 1e-12);
    for (std::size_t j = i + 1; j < 24; ++j) CHECK(phase_distance(table[i].matrix, table[j].matrix) > 0.1);
  }
  int closed = 0;
  for (const auto& a : table)
    for (const auto& b : table) closed += find_clifford(a.matrix * b.matrix).has_value();
  CHECK(closed == 24 * 24);
  CHECK(find_clifford(pauli_x()).has_value());
  CHECK(find_clifford(target_unitary(named_gate("H"))).has_value());
  CHECK_FALSE(find_clifford(target_unitary(named_gate("T"))).has_value());
}

}
