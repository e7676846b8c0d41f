#include "holo/pulses.hpp"

#include "holo/textio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace holo {

double text::parse_double(const std::string& s, std::string_view what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": cannot parse number '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument(std::string(what) + ": trailing text in '" + s + "'");
  return v;
}

GateSpec GateSpec::dynamical(double theta, double phi, double eta) {
  return GateSpec{theta, phi, -2.0 * kPi * eta, eta, Scheme::Dynamical};
}

void GateSpec::validate() const {
  if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(gamma) || !std::isfinite(eta))
    throw std::invalid_argument("GateSpec: non-finite field");
  if (theta < 0.0 || theta > kPi) throw std::invalid_argument("GateSpec: theta outside [0, pi]");
  if (phi < -kPi || phi >= kPi) throw std::invalid_argument("GateSpec: phi outside [-pi, pi)");
  if (gamma <= -2.0 * kPi || gamma > 2.0 * kPi)
    throw std::invalid_argument("GateSpec: gamma outside (-2pi, 2pi]");
  if (scheme == Scheme::Dynamical && std::abs(gamma + 2.0 * kPi * eta) > 1e-12)
    throw std::invalid_argument("GateSpec: dynamical gate requires gamma = -2 pi eta");
}

PathParams GateSpec::path(double duration) const {
  return PathParams{duration, eta, scheme, gamma};
}

Vector3 bright_state(double theta, double phi) {
  return Vector3(std::sin(theta / 2), -std::cos(theta / 2) * std::polar(1.0, phi), 0.0);
}

Vector3 dark_state(double theta, double phi) {
  return Vector3(-std::cos(theta / 2) * std::polar(1.0, -phi), -std::sin(theta / 2), 0.0);
}

double PulseSchedule::total_rabi(std::size_t k) const { return std::hypot(omega0.at(k), omega1.at(k)); }

double PulseSchedule::peak_rabi() const {
  double peak = 0.0;
  for (std::size_t k = 0; k < size(); ++k) peak = std::max(peak, total_rabi(k));
  return peak;
}

void PulseSchedule::check_structure() const {
  const std::size_t n = times.size();
  if (n < 2) throw std::invalid_argument("PulseSchedule: needs at least two samples");
  if (omega0.size() != n || omega1.size() != n || phi0.size() != n || phi1.size() != n)
    throw std::invalid_argument("PulseSchedule: column lengths differ");
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("PulseSchedule: duration must be positive");
  const double h = step();
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = static_cast<double>(k) * h;
    if (std::abs(times[k] - expected) > 1e-9 * h)
      throw std::invalid_argument("PulseSchedule: sample times not uniform on [0, T]");
    if (!std::isfinite(omega0[k]) || !std::isfinite(omega1[k]) || !std::isfinite(phi0[k]) ||
        !std::isfinite(phi1[k]))
      throw std::invalid_argument("PulseSchedule: non-finite sample");
  }
}

void PulseSchedule::validate() const {
  if (times.empty()) throw std::invalid_argument("PulseSchedule: empty schedule");
  check_structure();
  spec.validate();
  if (intervals() % 2 != 0) throw std::invalid_argument("PulseSchedule: T/2 is not a sample");
  if (!(omega_max > 0.0)) throw std::invalid_argument("PulseSchedule: omega_max must be positive");
  const double tol = 1e-12 * omega_max;
  for (std::size_t k = 0; k < size(); ++k) {
    if (omega0[k] < 0.0 || omega1[k] < 0.0) throw std::invalid_argument("PulseSchedule: negative amplitude");
  }
  if (std::abs(peak_rabi() - omega_max) > 1e-3 * omega_max)
    throw std::invalid_argument("PulseSchedule: peak Rabi rate differs from omega_max by > 0.1%");
  for (std::size_t k : {std::size_t{0}, intervals() / 2, intervals()}) {
    if (total_rabi(k) > tol) throw std::invalid_argument("PulseSchedule: drive must vanish at 0, T/2, T");
  }
  const double ratio = std::tan(spec.theta / 2);
  for (std::size_t k = 0; k < size(); ++k) {
    if (omega1[k] > tol && std::abs(omega0[k] - ratio * omega1[k]) > 1e-9 * omega_max)
      throw std::invalid_argument("PulseSchedule: amplitude ratio differs from tan(theta/2)");
    if (std::abs(phi0[k] - phi1[k] + kPi - spec.phi) > 1e-9)
      throw std::invalid_argument("PulseSchedule: phi0 - phi1 + pi != phi");
  }
}

namespace {

double rate_shape(double s, double eta) {
  const double sa = std::sin(kPi * std::pow(std::sin(kPi * s), 2));
  return std::abs(std::sin(2.0 * kPi * s)) * std::sqrt(1.0 + 16.0 * eta * eta * std::pow(sa, 6));
}

}  // namespace

double peak_rate_factor(double eta) {
  if (!std::isfinite(eta)) throw std::invalid_argument("peak_rate_factor: non-finite eta");
  // The shape is symmetric about s = 1/4 on [0, 1/2] and repeats on [1/2, 1].
  constexpr int kGrid = 4000;
  constexpr double kHi = 0.25;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = rate_shape(kHi * i / kGrid, eta);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = kHi * std::max(0, best - 1) / kGrid;
  double b = kHi * std::min(kGrid, best + 1) / kGrid;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = rate_shape(c, eta);
  double fd = rate_shape(d, eta);
  while (b - a > 1e-12) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = rate_shape(c, eta);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = rate_shape(d, eta);
    }
  }
  return std::max({best_val, fc, fd, rate_shape(0.5 * (a + b), eta)});
}

double compute_duration(const GateSpec& spec, double omega_max) {
  if (!(omega_max > 0.0) || !std::isfinite(omega_max))
    throw std::invalid_argument("compute_duration: omega_max must be positive");
  return kPi * kPi / omega_max * peak_rate_factor(spec.eta);
}

PulseSchedule synthesize(const GateSpec& spec, double omega_max, std::size_t n_samples) {
  spec.validate();
  if (n_samples < 256 || n_samples % 2 != 0)
    throw std::invalid_argument("synthesize: n_samples must be even and >= 256");

  PulseSchedule out;
  out.spec = spec;
  out.omega_max = omega_max;
  out.duration = compute_duration(spec, omega_max);
  const PathParams path = spec.path(out.duration);

  // theta = 0 or pi leaves one tone silent; keep it exactly zero.
  const double s0 = spec.theta == kPi ? 1.0 : std::sin(spec.theta / 2);
  const double s1 = spec.theta == kPi ? 0.0 : std::cos(spec.theta / 2);

  const std::size_t rows = n_samples + 1;
  out.times.resize(rows);
  out.omega0.resize(rows);
  out.omega1.resize(rows);
  out.phi0.resize(rows);
  out.phi1.resize(rows);
  for (std::size_t k = 0; k < rows; ++k) {
    const double t = k == n_samples ? out.duration
                                    : out.duration * static_cast<double>(k) / static_cast<double>(n_samples);
    const ControlSample c = controls_from_path(t, path);
    out.times[k] = t;
    out.omega0[k] = c.omega * s0;
    out.omega1[k] = c.omega * s1;
    out.phi0[k] = c.phi0;
    out.phi1[k] = c.phi0 + kPi - spec.phi;
  }
  return out;
}

namespace {

constexpr const char* kColumns = "t_s,omega0_rad_s,phi0_rad,omega1_rad_s,phi1_rad";
constexpr const char* kMetaKeys[] = {"omega_max_rad_s", "duration_s", "sample_rate_hz", "scheme",
                                     "eta",             "theta_rad",  "phi_rad",        "gamma_rad",
                                     "tone0_hz",        "tone1_hz"};

}  // namespace

std::string format_tones(const PulseSchedule& s, const std::string& comment) {
  s.validate();
  std::ostringstream os;
  if (!comment.empty()) os << text::comment_block(comment);
  using text::num;
  os << "# omega_max_rad_s = " << num(s.omega_max) << '\n'
     << "# duration_s = " << num(s.duration) << '\n'
     << "# sample_rate_hz = " << num(s.sample_rate()) << '\n'
     << "# scheme = " << to_string(s.spec.scheme) << '\n'
     << "# eta = " << num(s.spec.eta) << '\n'
     << "# theta_rad = " << num(s.spec.theta) << '\n'
     << "# phi_rad = " << num(s.spec.phi) << '\n'
     << "# gamma_rad = " << num(s.spec.gamma) << '\n'
     << "# tone0_hz = " << num(s.tone0_hz) << '\n'
     << "# tone1_hz = " << num(s.tone1_hz) << '\n'
     << kColumns << '\n';
  for (std::size_t k = 0; k < s.size(); ++k) {
    os << num(s.times[k]) << ',' << num(s.omega0[k]) << ',' << num(s.phi0[k]) << ','
       << num(s.omega1[k]) << ',' << num(s.phi1[k]) << '\n';
  }
  return os.str();
}

void export_tones(const PulseSchedule& schedule, const std::filesystem::path& path,
                  const std::string& comment) {
  const std::string body = format_tones(schedule, comment);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("export_tones: cannot open " + path.string());
  out << body;
  if (!out) throw std::runtime_error("export_tones: write failed for " + path.string());
}

PulseSchedule parse_tones(std::istream& in) {
  std::map<std::string, std::string> meta;
  PulseSchedule s;
  bool columns_seen = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.rfind("##", 0) == 0) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("tone file: malformed metadata line " + std::to_string(lineno));
      const std::string key = text::trim(std::string_view(line).substr(1, eq - 1));
      if (std::find(std::begin(kMetaKeys), std::end(kMetaKeys), key) == std::end(kMetaKeys))
        throw std::invalid_argument("tone file: unknown metadata key '" + key + "'");
      meta[key] = text::trim(std::string_view(line).substr(eq + 1));
      continue;
    }
    if (!columns_seen) {
      if (text::trim(line) != kColumns) throw std::invalid_argument("tone file: unexpected column header");
      columns_seen = true;
      continue;
    }
    const auto cells = text::split(line, ',');
    if (cells.size() != 5) throw std::invalid_argument("tone file: row " + std::to_string(lineno) + " needs 5 fields");
    s.times.push_back(text::parse_double(cells[0], "t_s"));
    s.omega0.push_back(text::parse_double(cells[1], "omega0_rad_s"));
    s.phi0.push_back(text::parse_double(cells[2], "phi0_rad"));
    s.omega1.push_back(text::parse_double(cells[3], "omega1_rad_s"));
    s.phi1.push_back(text::parse_double(cells[4], "phi1_rad"));
  }
  for (const char* key : kMetaKeys) {
    if (!meta.count(key)) throw std::invalid_argument(std::string("tone file: missing metadata key '") + key + "'");
  }
  auto get = [&](const char* key) { return text::parse_double(meta.at(key), key); };
  s.omega_max = get("omega_max_rad_s");
  s.duration = get("duration_s");
  s.tone0_hz = get("tone0_hz");
  s.tone1_hz = get("tone1_hz");
  s.spec.scheme = scheme_from_string(meta.at("scheme").c_str());
  s.spec.eta = get("eta");
  s.spec.theta = get("theta_rad");
  s.spec.phi = get("phi_rad");
  s.spec.gamma = get("gamma_rad");
  s.validate();
  if (std::abs(get("sample_rate_hz") - s.sample_rate()) > 1e-9 * s.sample_rate())
    throw std::invalid_argument("tone file: sample_rate_hz disagrees with rows");
  return s;
}

PulseSchedule load_tones(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_tones: cannot open " + path.string());
  return parse_tones(in);
}

}  // namespace holo
