#include "holo/paths.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace holo;
namespace {
constexpr double kT = 351e-6;
}  // namespace

TEST_SUITE("paths") {

TEST_CASE("alpha runs 0 -> pi -> 0 with exact zeros") {
  CHECK(alpha_of_t(0.0, kT) == 0.0);
  CHECK(alpha_of_t(0.5 * kT, kT) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(alpha_of_t(kT, kT) == 0.0);
  CHECK(alpha_of_t(0.25 * kT, kT) == doctest::Approx(kPi / 2));
  CHECK(alpha_rate(0.0, kT) == 0.0);
  CHECK(alpha_rate(0.5 * kT, kT) == 0.0);
  CHECK(alpha_rate(kT, kT) == 0.0);
  CHECK_THROWS_AS(alpha_of_t(-1e-9, kT), std::invalid_argument);
  CHECK_THROWS_AS(alpha_of_t(1.01 * kT, kT), std::invalid_argument);
}

TEST_CASE("alpha_rate is the derivative of alpha") {
  const double h = 1e-6 * kT;
  for (double s : {0.05, 0.2, 0.37, 0.5, 0.61, 0.9}) {
    const double t = s * kT;
    const double fd = (alpha_of_t(t + h, kT) - alpha_of_t(t - h, kT)) / (2 * h);
    CHECK(alpha_rate(t, kT) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("f(alpha) = eta (2 alpha - sin 2 alpha)") {
  CHECK(f_of_alpha(0.0, 0.7) == 0.0);
  CHECK(f_of_alpha(kPi, 0.5) == doctest::Approx(kPi));
  CHECK(f_of_alpha(kPi, 0.5, -1) == doctest::Approx(-kPi));
  CHECK_THROWS_AS(f_of_alpha(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(f_of_alpha(1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("beta matches quadrature of f' cos(alpha)") {
  // Oracle: beta' = f' cos(alpha) with f' = eta (2 - 2 cos 2 alpha) alpha' by the chain rule.
  for (double eta : {0.2, 0.5, 1.0}) {
    for (Scheme scheme : {Scheme::Holonomic, Scheme::Dynamical}) {
      const PathParams p{kT, eta, scheme, 1.3};
      for (double s : {0.1, 0.3, 0.5, 0.7, 0.95}) {
        const double t = s * kT;
        const int seg = segment_of(t, kT);
        const double t0 = seg == 1 ? 0.0 : 0.5 * kT;
        const double sign = (scheme == Scheme::Dynamical && seg == 2) ? -1.0 : 1.0;
        const auto integrand = [&](double u) {
          const double a = alpha_of_t(u, kT);
          return sign * eta * (2.0 - 2.0 * std::cos(2 * a)) * alpha_rate(u, kT) * std::cos(a);
        };
        const double start = (seg == 2 && scheme == Scheme::Holonomic) ? 1.3 : 0.0;
        const double oracle = start + testing::simpson(integrand, t0, t, 2000);
        CHECK(beta_of_t(t, p, seg) == doctest::Approx(oracle).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("controls solve the path equations") {
  // alpha' = Omega sin(chi), beta' = Omega cot(alpha) cos(chi), chi = beta + phi0.
  const double h = 1e-7 * kT;
  for (double eta : {0.0, 0.2, 1.0}) {
    for (Scheme scheme : {Scheme::Holonomic, Scheme::Dynamical}) {
      if (scheme == Scheme::Dynamical && eta == 0.0) continue;
      const PathParams p{kT, eta, scheme, 0.9};
      for (double s : {0.07, 0.22, 0.41, 0.58, 0.77, 0.93}) {
        const double t = s * kT;
        const int seg = segment_of(t, kT);
        const ControlSample c = controls_from_path(t, p);
        CHECK(c.chi == doctest::Approx(c.beta + c.phi0));
        const double da = (alpha_of_t(t + h, kT) - alpha_of_t(t - h, kT)) / (2 * h);
        const double db = (beta_of_t(t + h, p, seg) - beta_of_t(t - h, p, seg)) / (2 * h);
        const double scale = kPi * kPi / kT;
        CHECK(std::abs(c.omega * std::sin(c.chi) - da) < 1e-6 * scale);
        CHECK(std::abs(c.omega * std::cos(c.chi) / std::tan(c.alpha) - db) < 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("drive vanishes at 0, T/2 and T") {
  const PathParams p{kT, 0.5, Scheme::Holonomic, kPi};
  for (double t : {0.0, 0.5 * kT, kT}) CHECK(controls_from_path(t, p).omega == 0.0);
  CHECK(segment_of(0.5 * kT, kT) == 1);
  CHECK(segment_of(0.5000001 * kT, kT) == 2);
}

TEST_CASE("scheme names round trip") {
  CHECK(scheme_from_string("holonomic") == Scheme::Holonomic);
  CHECK(std::string(to_string(Scheme::Dynamical)) == "dynamical");
  CHECK_THROWS_AS(scheme_from_string("adiabatic"), std::invalid_argument);
  CHECK(PathParams{kT, 0.5, Scheme::Dynamical, 0.0}.effective_gamma() == doctest::Approx(-kPi));
}

}
