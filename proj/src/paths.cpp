#include "holo/paths.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace holo {

namespace {

constexpr double kPi = std::numbers::pi;

void require_in_range(double t, double lo, double hi, const char* what) {
  if (!(t >= lo && t <= hi)) {
    throw std::invalid_argument(std::string(what) + ": t = " + std::to_string(t) +
                                " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

double cube(double x) { return x * x * x; }

// sin(pi x) with exact zeros at integers and exact +-1 at half-integers.
double sin_pi(double x) {
  const double r = x - 2.0 * std::round(0.5 * x);
  if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
  if (std::abs(r) == 0.5) return r > 0 ? 1.0 : -1.0;
  return std::sin(kPi * r);
}

}  // namespace

const char* to_string(Scheme scheme) {
  return scheme == Scheme::Holonomic ? "holonomic" : "dynamical";
}

Scheme scheme_from_string(const char* name) {
  const std::string s(name);
  if (s == "holonomic") return Scheme::Holonomic;
  if (s == "dynamical") return Scheme::Dynamical;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected holonomic or dynamical)");
}

double PathParams::effective_gamma() const {
  return scheme == Scheme::Holonomic ? gamma : -2.0 * kPi * eta;
}

void PathParams::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("PathParams: duration must be positive");
  if (!std::isfinite(eta) || !std::isfinite(gamma))
    throw std::invalid_argument("PathParams: non-finite eta or gamma");
}

double alpha_of_t(double t, double duration) {
  require_in_range(t, 0.0, duration, "alpha_of_t");
  const double s = sin_pi(t / duration);
  return kPi * s * s;
}

double alpha_rate(double t, double duration) {
  require_in_range(t, 0.0, duration, "alpha_rate");
  return kPi * kPi / duration * sin_pi(2.0 * t / duration);
}

double f_of_alpha(double alpha, double eta, int sign) {
  if (!(alpha >= 0.0 && alpha <= kPi)) throw std::invalid_argument("f_of_alpha: alpha outside [0, pi]");
  if (sign != 1 && sign != -1) throw std::invalid_argument("f_of_alpha: sign must be +1 or -1");
  return sign * eta * (2.0 * alpha - std::sin(2.0 * alpha));
}

int segment_of(double t, double duration) { return t <= 0.5 * duration ? 1 : 2; }

namespace {

// Sign of f on a segment: the dynamical second half runs f backwards.
int f_sign(const PathParams& p, int segment) {
  return (p.scheme == Scheme::Dynamical && segment == 2) ? -1 : 1;
}

double beta_start(const PathParams& p, int segment) {
  return (segment == 2 && p.scheme == Scheme::Holonomic) ? p.gamma : 0.0;
}

}  // namespace

double beta_of_t(double t, const PathParams& params, int segment) {
  params.validate();
  const double half = 0.5 * params.duration;
  if (segment == 1) {
    require_in_range(t, 0.0, half, "beta_of_t (segment 1)");
  } else if (segment == 2) {
    require_in_range(t, half, params.duration, "beta_of_t (segment 2)");
  } else {
    throw std::invalid_argument("beta_of_t: segment must be 1 or 2");
  }
  // alpha(0) = 0 and alpha(T/2) = pi, so sin^3 alpha vanishes at both segment starts.
  const double t_start = segment == 1 ? 0.0 : half;
  const double s_now = std::sin(alpha_of_t(t, params.duration));
  const double s_start = std::sin(alpha_of_t(t_start, params.duration));
  return beta_start(params, segment) +
         f_sign(params, segment) * (4.0 * params.eta / 3.0) * (cube(s_now) - cube(s_start));
}

ControlSample controls_from_path(double t, const PathParams& params) {
  params.validate();
  require_in_range(t, 0.0, params.duration, "controls_from_path");
  const int segment = segment_of(t, params.duration);
  const int sign = f_sign(params, segment);

  ControlSample c;
  c.t = t;
  c.alpha = alpha_of_t(t, params.duration);
  c.f = f_of_alpha(c.alpha, params.eta, sign);
  c.beta = beta_of_t(t, params, segment);

  const double alpha_dot = alpha_rate(t, params.duration);
  const double sin_a = std::sin(c.alpha);
  // f' sin(alpha) = 4 eta sin^3(alpha) alpha' stays finite where cot(alpha) blows up.
  const double f_dot_sin = sign * 4.0 * params.eta * cube(sin_a) * alpha_dot;

  c.omega = std::hypot(alpha_dot, f_dot_sin);
  if (alpha_dot == 0.0 && f_dot_sin == 0.0) {
    c.chi = segment == 1 ? 0.5 * kPi : -0.5 * kPi;
  } else {
    c.chi = std::atan2(alpha_dot, f_dot_sin);
  }
  c.phi0 = c.chi - c.beta;
  return c;
}

}  // namespace holo
