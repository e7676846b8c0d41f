#pragma once

// Evolution-path parameterisation of the bright/auxiliary two-level problem
// and the inverse map from path angles to drive controls.
//
// The state in the {|b>, |a>} subspace is
//   |psi(t)> = exp(-i f/2) ( cos(alpha/2) exp(i beta/2), sin(alpha/2) exp(-i beta/2) )
// and the drive H = Omega/2 exp(-i phi0) |b><a| + h.c. solves the Schrodinger
// equation for it iff
//   f' = beta' / cos(alpha),  alpha' = Omega sin(beta + phi0),
//   beta' = Omega cot(alpha) cos(beta + phi0).
//
// Path family: alpha(t) = pi sin^2(pi t / T), f = eta (2 alpha - sin 2 alpha),
// split into two halves [0, T/2] and [T/2, T].

namespace holo {

enum class Scheme { Holonomic, Dynamical };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(const char* name);

struct PathParams {
  double duration = 0.0;  ///< T, seconds
  double eta = 0.0;
  Scheme scheme = Scheme::Holonomic;
  /// Phase jump imprinted at the start of the second half (holonomic only).
  double gamma = 0.0;

  /// Net phase acquired by the bright state over one cycle: gamma for
  /// holonomic paths, -2 pi eta for dynamical ones.
  double effective_gamma() const;
  void validate() const;
};

struct ControlSample {
  double t = 0.0;
  double omega = 0.0;  ///< total Rabi rate, rad/s
  double phi0 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double f = 0.0;
  /// beta + phi0
  double chi = 0.0;
};

double alpha_of_t(double t, double duration);
/// d alpha / dt
double alpha_rate(double t, double duration);

/// sign * eta * (2 alpha - sin 2 alpha); sign = -1 is the dynamical second half.
double f_of_alpha(double alpha, double eta, int sign = 1);

/// Closed form beta_start + sign (4 eta / 3) (sin^3 alpha(t) - sin^3 alpha(t_start)).
/// segment is 1 for [0, T/2] and 2 for [T/2, T].
double beta_of_t(double t, const PathParams& params, int segment);

/// Segment containing t; T/2 belongs to the first half.
int segment_of(double t, double duration);

ControlSample controls_from_path(double t, const PathParams& params);

}  // namespace holo
