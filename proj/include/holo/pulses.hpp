#pragma once

#include "holo/paths.hpp"
#include "holo/qcore.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace holo {

inline constexpr double kTone0Hz = 12.6428e9;        ///< |0> <-> |a>
inline constexpr double kQubitSplittingHz = 12.5e6;  ///< |0> <-> |1>
inline constexpr double kTone1Hz = kTone0Hz - kQubitSplittingHz;
inline constexpr double kDefaultOmegaMax = 2.0 * kPi * 1.0e4;  ///< rad/s
inline constexpr std::size_t kDefaultSamples = 4096;

/// Target rotation U(theta, phi, gamma) and the path used to realise it.
struct GateSpec {
  double theta = 0.0;  ///< [0, pi]
  double phi = 0.0;    ///< [-pi, pi)
  double gamma = 0.0;  ///< (-2 pi, 2 pi]
  double eta = 0.0;
  Scheme scheme = Scheme::Holonomic;

  /// Dynamical gate with the same envelope as a holonomic eta gate; gamma = -2 pi eta.
  static GateSpec dynamical(double theta, double phi, double eta);

  void validate() const;
  PathParams path(double duration) const;
};

/// Bright state sin(theta/2)|0> - cos(theta/2) e^{i phi}|1> embedded in the qutrit.
Vector3 bright_state(double theta, double phi);
/// Dark state -cos(theta/2) e^{-i phi}|0> - sin(theta/2)|1>.
Vector3 dark_state(double theta, double phi);

/// Two-tone drive sampled at t_k = k T / n, k = 0..n (both endpoints included).
struct PulseSchedule {
  double duration = 0.0;
  double omega_max = 0.0;
  double tone0_hz = kTone0Hz;
  double tone1_hz = kTone1Hz;
  GateSpec spec;
  std::vector<double> times;
  std::vector<double> omega0;
  std::vector<double> phi0;
  std::vector<double> omega1;
  std::vector<double> phi1;

  std::size_t size() const { return times.size(); }
  std::size_t intervals() const { return times.empty() ? 0 : times.size() - 1; }
  double step() const { return duration / static_cast<double>(intervals()); }
  double sample_rate() const { return static_cast<double>(intervals()) / duration; }
  double total_rabi(std::size_t k) const;
  double peak_rabi() const;

  /// Shape checks the propagator relies on (equal lengths, uniform grid).
  void check_structure() const;
  /// Full invariant set of a synthesised schedule.
  void validate() const;
};

/// max over s in [0, 1] of |sin 2 pi s| sqrt(1 + 16 eta^2 sin^6(pi sin^2 pi s)),
/// so that max_t Omega(t) = (pi^2 / T) * peak_rate_factor(eta).
double peak_rate_factor(double eta);

/// Shortest cycle time whose peak total Rabi rate equals omega_max.
double compute_duration(const GateSpec& spec, double omega_max);

PulseSchedule synthesize(const GateSpec& spec, double omega_max = kDefaultOmegaMax,
                         std::size_t n_samples = kDefaultSamples);

/// Tone descriptor text: "# key = value" metadata, then CSV rows
/// t_s,omega0_rad_s,phi0_rad,omega1_rad_s,phi1_rad at 17 significant digits.
/// Lines starting with "##" are free-form comments.
std::string format_tones(const PulseSchedule& schedule, const std::string& comment = {});
void export_tones(const PulseSchedule& schedule, const std::filesystem::path& path,
                  const std::string& comment = {});
PulseSchedule parse_tones(std::istream& in);
PulseSchedule load_tones(const std::filesystem::path& path);

}  // namespace holo
