#pragma once

// Test-side oracles and random generators. Nothing here calls into the
// library routine it is used to check.

#include "holo/qcore.hpp"

#include <Eigen/Eigenvalues>

#include <random>

namespace testing {

using holo::Complex;
using holo::ComplexMatrix;

inline ComplexMatrix random_matrix(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  const ComplexMatrix a = random_matrix(n, rng, scale);
  return 0.5 * (a + a.adjoint());
}

/// Haar-ish unitary from the QR of a Gaussian matrix.
inline ComplexMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
  return q;
}

/// exp(-i H t) through the Hermitian eigendecomposition.
inline ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(A) for a diagonalisable matrix through its eigendecomposition.
inline ComplexMatrix expm_eigen(const ComplexMatrix& a) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(a);
  const ComplexMatrix v = es.eigenvectors();
  return v * es.eigenvalues().array().exp().matrix().asDiagonal() * v.inverse();
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace testing
