#pragma once

// Least-squares fit of the randomized-benchmarking decay F(m) = A p^m + B.

#include <Eigen/Dense>

#include <span>
#include <stdexcept>

namespace holo {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecayFit {
  double a = 0.0;
  double p = 0.0;
  double b = 0.0;
  /// Parameter covariance in (A, p, B) order, residual-variance scaled.
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double residual_sum_squares = 0.0;
  int iterations = 0;
};

struct DecayFitOptions {
  int max_iterations = 500;
  double tolerance = 1e-15;  ///< relative change in the residual sum of squares
};

/// Levenberg-Marquardt with p kept in (0, 1] and B in [0, 1], started from a
/// log-linear estimate. Needs at least three distinct lengths.
DecayFit fit_decay(std::span<const double> lengths, std::span<const double> values,
                   const DecayFitOptions& options = {});

}  // namespace holo
