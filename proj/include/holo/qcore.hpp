#pragma once

// Dense complex linear algebra and state/operator helpers shared by every
// other module. Dimensions are tiny (2..24), so everything is dense Eigen.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace holo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;
using Matrix3 = Eigen::Matrix3cd;
using Matrix4 = Eigen::Matrix4cd;
using Vector2 = Eigen::Vector2cd;
using Vector3 = Eigen::Vector3cd;
/// Liouville-space superoperator on a qutrit (column-stacked vec(rho)).
using Superop3 = Eigen::Matrix<Complex, 9, 9>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Tolerance ladder.
inline constexpr double kUnitarityAccept = 1e-9;
inline constexpr double kUnitarityAssert = 1e-12;

/// Raised when an iterative numerical procedure fails its own convergence check.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Matrix2 pauli_x();
Matrix2 pauli_y();
Matrix2 pauli_z();

/// exp(scale * m) by scaling and squaring with a diagonal Padé approximant.
/// Throws std::invalid_argument for non-square or non-finite input.
ComplexMatrix matrix_exponential(const ComplexMatrix& m, Complex scale = 1.0);

/// Fixed-size 3x3 fast path used in the propagation loops.
Matrix3 matrix_exponential(const Matrix3& m);

/// max |(U^dagger U - I)_ij|
double unitarity_error(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u, double tol = kUnitarityAccept);

/// |Tr(P U^dagger P V)| / 2 on the {|0>,|1>} block of a qutrit propagator.
double fidelity_qubit_subspace(const Matrix3& u, const Matrix2& v);

/// Largest population moved to |a> from either qubit basis input.
double leakage(const Matrix3& u);

/// Average gate fidelity of the (possibly leaky) qubit block of u against v:
/// (|Tr(V^dagger M)|^2 + Tr(M^dagger M)) / 6 with M the 2x2 block.
double average_gate_fidelity(const Matrix3& u, const Matrix2& v);

/// max_ij |U - e^{i phi} V| with the phase that best aligns V to U; zero iff
/// they agree up to a global phase (infinite when orthogonal).
double phase_distance(const ComplexMatrix& u, const ComplexMatrix& v);

/// Pure state on C^dim. Amplitudes must be normalised to 1e-12.
class QuantumState {
 public:
  explicit QuantumState(ComplexVector amplitudes);

  static QuantumState basis(Eigen::Index dim, Eigen::Index index);

  Eigen::Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

  /// |<this|other>|^2
  double overlap(const QuantumState& other) const;

 private:
  ComplexVector amplitudes_;
};

/// Density matrix; construction enforces Hermiticity (1e-12), unit trace
/// (1e-10) and eigenvalues >= -1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix rho);

  static DensityMatrix pure(const QuantumState& psi);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  Eigen::Index dim() const { return rho_.rows(); }
  const ComplexMatrix& matrix() const { return rho_; }
  double population(Eigen::Index i) const { return rho_(i, i).real(); }
  double min_eigenvalue() const;

 private:
  ComplexMatrix rho_;
};

/// Column-stacked vec / unvec for square matrices.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v);

}  // namespace holo
