#include "holo/fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace holo {

namespace {

struct Model {
  std::span<const double> m;
  std::span<const double> y;

  double rss(const Eigen::Vector3d& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double r = y[i] - (x(0) * std::pow(x(1), m[i]) + x(2));
      s += r * r;
    }
    return s;
  }

  void linearise(const Eigen::Vector3d& x, Eigen::MatrixX3d& jac, Eigen::VectorXd& res) const {
    const auto n = static_cast<Eigen::Index>(m.size());
    jac.resize(n, 3);
    res.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mi = m[static_cast<std::size_t>(i)];
      const double pm = std::pow(x(1), mi);
      jac(i, 0) = pm;
      jac(i, 1) = x(0) * mi * std::pow(x(1), mi - 1.0);
      jac(i, 2) = 1.0;
      res(i) = y[static_cast<std::size_t>(i)] - (x(0) * pm + x(2));
    }
  }
};

Eigen::Vector3d clamp_params(Eigen::Vector3d x) {
  x(1) = std::clamp(x(1), 1e-12, 1.0);
  x(2) = std::clamp(x(2), 0.0, 1.0);
  return x;
}

// Log-linear seed: B0 from the asymptote guess, then ln(F - B0) = ln A + m ln p.
Eigen::Vector3d initial_guess(std::span<const double> m, std::span<const double> y) {
  const double lo = *std::min_element(y.begin(), y.end());
  const double b0 = std::clamp(std::min(0.5, lo - 1e-3), 0.0, 1.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double d = y[i] - b0;
    if (d <= 0.0) continue;
    sx += m[i];
    sy += std::log(d);
    sxx += m[i] * m[i];
    sxy += m[i] * std::log(d);
    ++n;
  }
  Eigen::Vector3d x(1.0 - b0, 0.99, b0);
  const double den = n * sxx - sx * sx;
  if (n >= 2 && den > 0.0) {
    const double slope = (n * sxy - sx * sy) / den;
    const double icpt = (sy - slope * sx) / n;
    x(0) = std::exp(icpt);
    x(1) = std::exp(slope);
  }
  return clamp_params(x);
}

}  // namespace

DecayFit fit_decay(std::span<const double> lengths, std::span<const double> values, const DecayFitOptions& options) {
  if (lengths.size() != values.size()) throw FitError("fit_decay: length/value size mismatch");
  if (std::set<double>(lengths.begin(), lengths.end()).size() < 3)
    throw FitError("fit_decay: need at least three distinct sequence lengths");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]) || !std::isfinite(lengths[i]) || lengths[i] < 0.0)
      throw FitError("fit_decay: non-finite or negative input");

  const Model model{lengths, values};
  Eigen::Vector3d x = initial_guess(lengths, values);
  double cost = model.rss(x);
  double lambda = 1e-3;
  Eigen::MatrixX3d jac;
  Eigen::VectorXd res;
  DecayFit out;
  for (int it = 1; it <= options.max_iterations; ++it) {
    out.iterations = it;
    model.linearise(x, jac, res);
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d grad = jac.transpose() * res;
    bool improved = false;
    double next_cost = cost;
    Eigen::Vector3d next = x;
    while (lambda < 1e12) {
      Eigen::Matrix3d lhs = jtj;
      lhs.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
      next = clamp_params(x + lhs.ldlt().solve(grad));
      next_cost = model.rss(next);
      if (std::isfinite(next_cost) && next_cost <= cost) {
        improved = true;
        lambda = std::max(lambda / 10.0, 1e-12);
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
    const double change = cost - next_cost;
    x = next;
    cost = next_cost;
    if (change <= options.tolerance * std::max(cost, 1e-300) || cost == 0.0) break;
  }
  if (!x.allFinite() || !std::isfinite(cost)) throw FitError("fit_decay: diverged");
  if (!(x(1) > 0.0 && x(1) <= 1.0)) throw FitError("fit_decay: p outside (0, 1]");

  model.linearise(x, jac, res);
  const auto dof = static_cast<double>(lengths.size()) - 3.0;
  const double sigma2 = dof > 0 ? cost / dof : 0.0;
  const Eigen::Matrix3d jtj = jac.transpose() * jac;
  out.covariance = sigma2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
  out.a = x(0);
  out.p = x(1);
  out.b = x(2);
  out.residual_sum_squares = cost;
  return out;
}

}  // namespace holo
