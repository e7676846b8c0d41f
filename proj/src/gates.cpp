#include "holo/gates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace holo {

namespace {

// Wraps into [-pi, pi).
double wrap_phase(double x) {
  double y = std::fmod(x + kPi, 2.0 * kPi);
  if (y < 0) y += 2.0 * kPi;
  y -= kPi;
  return y >= kPi ? y - 2.0 * kPi : y;
}

GateSpec spec_from_axis(double nx, double ny, double nz, double gamma) {
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  nx /= norm;
  ny /= norm;
  nz /= norm;
  GateSpec s;
  s.gamma = gamma;
  s.theta = std::acos(std::clamp(nz, -1.0, 1.0));
  s.phi = (std::hypot(nx, ny) < 1e-12) ? 0.0 : wrap_phase(std::atan2(ny, nx));
  return s;
}

}  // namespace

QubitUnitary target_unitary(const GateSpec& spec) {
  const double gamma = spec.scheme == Scheme::Dynamical ? -2.0 * kPi * spec.eta : spec.gamma;
  const double nx = std::sin(spec.theta) * std::cos(spec.phi);
  const double ny = std::sin(spec.theta) * std::sin(spec.phi);
  const double nz = std::cos(spec.theta);
  const Matrix2 n_sigma = nx * pauli_x() + ny * pauli_y() + nz * pauli_z();
  const Matrix2 rot = std::cos(gamma / 2) * Matrix2::Identity() - kI * std::sin(gamma / 2) * n_sigma;
  return std::polar(1.0, gamma / 2) * rot;
}

GateSpec axis_angle(const QubitUnitary& u) {
  if (!is_unitary(u, kUnitarityAccept)) throw std::invalid_argument("axis_angle: input not unitary");
  // Project to SU(2): V = cos(g/2) I - i sin(g/2) n.sigma.
  const Complex root = std::sqrt(u.determinant());
  Matrix2 v = u / root;
  double a0 = 0.5 * v.trace().real();
  double vx = 0.5 * (kI * (v * pauli_x()).trace()).real();
  double vy = 0.5 * (kI * (v * pauli_y()).trace()).real();
  double vz = 0.5 * (kI * (v * pauli_z()).trace()).real();
  if (a0 < 0) {
    a0 = -a0;
    vx = -vx;
    vy = -vy;
    vz = -vz;
  }
  const double s = std::sqrt(vx * vx + vy * vy + vz * vz);
  const double gamma = 2.0 * std::atan2(s, a0);
  if (s < 1e-14) return GateSpec{};
  if (std::abs(a0) < 1e-12) {
    // Half turn: n and -n give the same rotation.
    const double first = std::abs(vx) > 1e-12 ? vx : (std::abs(vy) > 1e-12 ? vy : vz);
    if (first < 0) {
      vx = -vx;
      vy = -vy;
      vz = -vz;
    }
  }
  return spec_from_axis(vx, vy, vz, gamma);
}

QubitUnitary canonical_phase(const QubitUnitary& u) {
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
      if (std::abs(u(i, j)) > 1e-12) return u * std::polar(1.0, -std::arg(u(i, j)));
  return u;
}

bool phase_equivalent(const QubitUnitary& a, const QubitUnitary& b, double tol) {
  return phase_distance(a, b) <= tol;
}

GateSpec named_gate(std::string_view name) {
  if (name == "I") return GateSpec{0.0, 0.0, 0.0};
  if (name == "X") return GateSpec{kPi / 2, 0.0, kPi};
  if (name == "Y") return GateSpec{kPi / 2, kPi / 2, kPi};
  if (name == "Z") return GateSpec{0.0, 0.0, kPi};
  if (name == "H") return GateSpec{kPi / 4, 0.0, kPi};
  if (name == "S") return GateSpec{0.0, 0.0, kPi / 2};
  if (name == "T") return GateSpec{0.0, 0.0, kPi / 4};
  throw std::invalid_argument("named_gate: unknown gate '" + std::string(name) + "'");
}

const std::array<CliffordElement, 24>& clifford_table() {
  static const std::array<CliffordElement, 24> table = [] {
    struct Rot {
      double x, y, z, gamma;
    };
    std::vector<Rot> rots;
    rots.push_back({0, 0, 1, 0});
    for (double sign : {1.0, -1.0}) {
      rots.push_back({sign, 0, 0, kPi / 2});
      rots.push_back({0, sign, 0, kPi / 2});
      rots.push_back({0, 0, sign, kPi / 2});
    }
    rots.push_back({1, 0, 0, kPi});
    rots.push_back({0, 1, 0, kPi});
    rots.push_back({0, 0, 1, kPi});
    for (const Rot& r : {Rot{1, 1, 0, kPi}, Rot{1, -1, 0, kPi}, Rot{1, 0, 1, kPi}, Rot{1, 0, -1, kPi},
                         Rot{0, 1, 1, kPi}, Rot{0, 1, -1, kPi}})
      rots.push_back(r);
    for (double sx : {1.0, -1.0})
      for (double sy : {1.0, -1.0})
        for (double sz : {1.0, -1.0}) rots.push_back({sx, sy, sz, 2.0 * kPi / 3.0});

    std::array<CliffordElement, 24> out{};
    for (int i = 0; i < 24; ++i) {
      const Rot& r = rots[static_cast<std::size_t>(i)];
      const GateSpec raw = spec_from_axis(r.x, r.y, r.z, r.gamma);
      const GateSpec canonical = r.gamma == 0.0 ? GateSpec{} : axis_angle(target_unitary(raw));
      out[static_cast<std::size_t>(i)] = CliffordElement{i, canonical, target_unitary(canonical)};
    }
    return out;
  }();
  return table;
}

std::optional<int> find_clifford(const QubitUnitary& u, double tol) {
  for (const auto& c : clifford_table())
    if (phase_distance(c.matrix, u) <= tol) return c.index;
  return std::nullopt;
}

}  // namespace holo
