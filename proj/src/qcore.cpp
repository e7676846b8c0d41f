#include "holo/qcore.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace holo {

namespace {

// Padé coefficients and 1-norm thresholds from Higham, "The scaling and
// squaring method for the matrix exponential revisited" (2005).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <typename M>
double one_norm(const M& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Low-order approximants share one shape: U = A * sum odd, V = sum even.
template <typename M, std::size_t N>
M pade_low(const M& a, const std::array<double, N>& b) {
  const M ident = M::Identity(a.rows(), a.cols());
  const M a2 = a * a;
  // Horner in A^2 for both halves.
  M odd = b[N - 1] * ident;
  M even = b[N - 2] * ident;
  for (int k = static_cast<int>(N) - 3; k >= 1; k -= 2) {
    odd = (a2 * odd + b[k] * ident).eval();
    even = (a2 * even + b[k - 1] * ident).eval();
  }
  const M u = a * odd;
  return (even - u).partialPivLu().solve(even + u);
}

template <typename M>
M pade13(const M& a) {
  const auto& b = kPade13;
  const M ident = M::Identity(a.rows(), a.cols());
  const M a2 = a * a;
  const M a4 = a2 * a2;
  const M a6 = a4 * a2;
  const M u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                   b[3] * a2 + b[1] * ident);
  const M v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
              b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

template <typename M>
M expm_impl(const M& a) {
  const double norm = one_norm(a);
  if (norm <= kTheta3) return pade_low(a, kPade3);
  if (norm <= kTheta5) return pade_low(a, kPade5);
  if (norm <= kTheta7) return pade_low(a, kPade7);
  if (norm <= kTheta9) return pade_low(a, kPade9);
  const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  M r = pade13(M(a * std::ldexp(1.0, -s)));
  for (int i = 0; i < s; ++i) r = (r * r).eval();
  return r;
}

void require_finite(const ComplexMatrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("matrix_exponential: non-finite entries");
}

}  // namespace

Matrix2 pauli_x() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return m;
}

Matrix2 pauli_y() {
  Matrix2 m;
  m << 0, -kI, kI, 0;
  return m;
}

Matrix2 pauli_z() {
  Matrix2 m;
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& m, Complex scale) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_exponential: matrix not square");
  require_finite(m);
  if (!std::isfinite(scale.real()) || !std::isfinite(scale.imag()))
    throw std::invalid_argument("matrix_exponential: non-finite scale");
  if (m.rows() == 0) return m;
  return expm_impl<ComplexMatrix>(scale * m);
}

Matrix3 matrix_exponential(const Matrix3& m) {
  if (!m.allFinite()) throw std::invalid_argument("matrix_exponential: non-finite entries");
  return expm_impl<Matrix3>(m);
}

double unitarity_error(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const ComplexMatrix d = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

bool is_unitary(const ComplexMatrix& u, double tol) { return unitarity_error(u) <= tol; }

double fidelity_qubit_subspace(const Matrix3& u, const Matrix2& v) {
  if (!is_unitary(u, kUnitarityAccept))
    throw std::invalid_argument("fidelity_qubit_subspace: propagator not unitary");
  if (!is_unitary(v, kUnitarityAssert))
    throw std::invalid_argument("fidelity_qubit_subspace: target not unitary");
  const Matrix2 block = u.topLeftCorner<2, 2>();
  return std::min(1.0, std::abs((block.adjoint() * v).trace()) / 2.0);
}

double leakage(const Matrix3& u) {
  if (!is_unitary(u, kUnitarityAccept)) throw std::invalid_argument("leakage: propagator not unitary");
  return std::max(std::norm(u(2, 0)), std::norm(u(2, 1)));
}

double average_gate_fidelity(const Matrix3& u, const Matrix2& v) {
  const Matrix2 block = u.topLeftCorner<2, 2>();
  const double overlap = std::norm((v.adjoint() * block).trace());
  const double retained = (block.adjoint() * block).trace().real();
  return (overlap + retained) / 6.0;
}

double phase_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("phase_distance: shape mismatch");
  const Complex overlap = (v.adjoint() * u).trace();
  if (std::abs(overlap) < 1e-300) return std::numeric_limits<double>::infinity();
  const Complex phase = overlap / std::abs(overlap);
  return (u - phase * v).cwiseAbs().maxCoeff();
}

QuantumState::QuantumState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw std::invalid_argument("QuantumState: empty");
  if (!amplitudes_.allFinite()) throw std::invalid_argument("QuantumState: non-finite amplitude");
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-12)
    throw std::invalid_argument("QuantumState: not normalised");
}

QuantumState QuantumState::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw std::invalid_argument("QuantumState::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v[index] = 1.0;
  return QuantumState(std::move(v));
}

double QuantumState::overlap(const QuantumState& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("QuantumState::overlap: dimension mismatch");
  return std::norm(amplitudes_.dot(other.amplitudes_));
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() == 0 || rho_.rows() != rho_.cols())
    throw std::invalid_argument("DensityMatrix: must be square and non-empty");
  if (!rho_.allFinite()) throw std::invalid_argument("DensityMatrix: non-finite entry");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(rho_.trace() - Complex(1.0)) > 1e-10)
    throw std::invalid_argument("DensityMatrix: trace != 1");
  if (min_eigenvalue() < -1e-10) throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const QuantumState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) throw std::invalid_argument("unvec: length is not a perfect square");
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

}  // namespace holo
