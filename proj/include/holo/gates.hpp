#pragma once

#include "holo/pulses.hpp"
#include "holo/qcore.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace holo {

using QubitUnitary = Matrix2;

/// e^{i gamma/2} exp(-i (gamma/2) n.sigma), n = (sin t cos p, sin t sin p, cos t).
/// Dynamical specs use the same expression with gamma = -2 pi eta.
QubitUnitary target_unitary(const GateSpec& spec);

/// Inverse of target_unitary up to global phase. Canonical output:
/// gamma in [0, pi], theta in [0, pi], phi in [-pi, pi); identity -> (0, 0, 0);
/// at gamma = pi the axis with a positive first nonzero component is chosen.
/// The returned spec is holonomic with eta = 0.
GateSpec axis_angle(const QubitUnitary& u);

/// Rescales u so that its first entry of magnitude > 1e-12 is real-positive.
QubitUnitary canonical_phase(const QubitUnitary& u);
bool phase_equivalent(const QubitUnitary& a, const QubitUnitary& b, double tol = 1e-10);

/// Named single-qubit gates: "I", "X", "Y", "Z", "H", "S", "T".
GateSpec named_gate(std::string_view name);

struct CliffordElement {
  int index = 0;
  GateSpec spec;  ///< canonical axis-angle form
  QubitUnitary matrix;
};

/// The 24 single-qubit Cliffords: identity, 6 quarter turns about +-x, +-y, +-z,
/// 3 half turns about x, y, z, 6 half turns about face diagonals and 8 third
/// turns about body diagonals.
const std::array<CliffordElement, 24>& clifford_table();

/// Index of the table element phase-equivalent to u, if any.
std::optional<int> find_clifford(const QubitUnitary& u, double tol = 1e-9);

}  // namespace holo
