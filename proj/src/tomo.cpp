#include "holo/tomo.hpp"

#include "holo/rng.hpp"
#include "holo/textio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace holo {

namespace {

void require_label(int v, int n, const char* what) {
  if (v < 0 || v >= n) throw std::invalid_argument(std::string(what) + " label out of range: " + std::to_string(v));
}

Matrix2 partial_trace_out(const Matrix4& j) {
  Matrix2 r = Matrix2::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) r(a, b) = j(2 * a, 2 * b) + j(2 * a + 1, 2 * b + 1);
  return r;
}

// (A (x) I) on the in (x) out ordering.
Matrix4 left_kron_identity(const Matrix2& a) {
  Matrix4 m = Matrix4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      m(2 * i, 2 * j) = a(i, j);
      m(2 * i + 1, 2 * j + 1) = a(i, j);
    }
  return m;
}

Matrix4 kron(const Matrix2& a, const Matrix2& b) {
  Matrix4 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

std::array<Matrix2, 4> pauli_basis() { return {Matrix2::Identity(), pauli_x(), pauli_y(), pauli_z()}; }

// Vectorised (I (x) sigma_m)|Omega>, entry 2 i + k = (sigma_m)_{k i}.
Eigen::Vector4cd pauli_vector(const Matrix2& s) {
  Eigen::Vector4cd v;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) v(2 * i + k) = s(k, i);
  return v;
}

Matrix2 inverse_sqrt_psd(const Matrix2& m) {
  Eigen::SelfAdjointEigenSolver<Matrix2> es(m);
  const Eigen::Vector2d ev = es.eigenvalues().cwiseMax(1e-300);
  return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix4 project_psd(const Matrix4& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4> es(0.5 * (m + m.adjoint()));
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// J' = (L^{-1/2} (x) I) J (L^{-1/2} (x) I) with L = Tr_out J, enforcing Tr_out J' = I.
Matrix4 normalise_trace_preserving(const Matrix4& j) {
  const Matrix4 s = left_kron_identity(inverse_sqrt_psd(partial_trace_out(j)));
  const Matrix4 out = s * j * s;
  return 0.5 * (out + out.adjoint());
}

// Measurement operator rho_prep^T (x) Pi, so that p = Tr(J M).
Matrix4 measurement_operator(int prep, int basis, bool bright) {
  const QuantumState psi = prepare_input(prep);
  const Matrix2 rho = psi.amplitudes() * psi.amplitudes().adjoint();
  const Matrix2 pb = bright_projector(basis);
  const Matrix2 pi = bright ? pb : Matrix2(Matrix2::Identity() - pb);
  return kron(rho.transpose(), pi);
}

struct Term {
  Matrix4 op;
  double freq;
};

std::vector<Term> terms_for(std::span<const Observation> data) {
  std::array<int, kNumPreparations * kNumBases> seen{};
  std::vector<Term> terms;
  for (const Observation& o : data) {
    require_label(o.prep, kNumPreparations, "preparation");
    require_label(o.basis, kNumBases, "basis");
    const double total = o.bright + o.dark;
    if (!(o.bright >= 0.0) || !(o.dark >= 0.0) || !(total > 0.0))
      throw std::invalid_argument("tomography: observation weights must be non-negative with positive total");
    ++seen[static_cast<std::size_t>(o.prep * kNumBases + o.basis)];
    terms.push_back({measurement_operator(o.prep, o.basis, true), o.bright / total});
    terms.push_back({measurement_operator(o.prep, o.basis, false), o.dark / total});
  }
  for (int c : seen)
    if (c == 0) throw std::invalid_argument("tomography: all 18 (prep, basis) settings are required");
  return terms;
}

double recorded_bright(double p_bright, const NoiseModel& n) {
  return p_bright * (1.0 - n.detection_error_bright) + (1.0 - p_bright) * n.detection_error_dark;
}

Matrix2 prepared_state(int prep, const NoiseModel& n) {
  Matrix2 init = Matrix2::Zero();
  init(0, 0) = 1.0 - n.prep_error;
  init(1, 1) = n.prep_error;
  const Matrix2 r = preparation_rotation(prep);
  return r * init * r.adjoint();
}

}  // namespace

Matrix2 rotation(char axis, double angle) {
  Matrix2 s;
  switch (axis) {
    case 'x': s = pauli_x(); break;
    case 'y': s = pauli_y(); break;
    case 'z': s = pauli_z(); break;
    default: throw std::invalid_argument("rotation: axis must be x, y or z");
  }
  return std::cos(angle / 2) * Matrix2::Identity() - kI * std::sin(angle / 2) * s;
}

Matrix2 preparation_rotation(int label) {
  require_label(label, kNumPreparations, "preparation");
  switch (label) {
    case 0: return Matrix2::Identity();
    case 1: return rotation('x', kPi);
    case 2: return rotation('y', kPi / 2);
    case 3: return rotation('y', -kPi / 2);
    case 4: return rotation('x', -kPi / 2);
    default: return rotation('x', kPi / 2);
  }
}

QuantumState prepare_input(int label) {
  return QuantumState(ComplexVector(preparation_rotation(label).col(0)));
}

Matrix2 measurement_rotation(int basis) {
  require_label(basis, kNumBases, "basis");
  if (basis == 0) return Matrix2::Identity();
  if (basis == 1) return rotation('y', -kPi / 2);
  return rotation('x', kPi / 2);
}

Matrix2 bright_projector(int basis) {
  const Matrix2 r = measurement_rotation(basis);
  Matrix2 p0 = Matrix2::Zero();
  p0(0, 0) = 1.0;
  return r.adjoint() * p0 * r;
}

QubitChannel::QubitChannel(Matrix4 choi) : choi_(std::move(choi)) {
  if (!choi_.allFinite()) throw std::invalid_argument("QubitChannel: non-finite Choi matrix");
}

QubitChannel QubitChannel::identity() { return from_unitary(Matrix2::Identity()); }

QubitChannel QubitChannel::from_unitary(const Matrix2& u) {
  const Eigen::Vector4cd v = pauli_vector(u);
  return QubitChannel(v * v.adjoint());
}

QubitChannel QubitChannel::from_qutrit_unitary(const Matrix3& u) {
  return from_unitary(u.topLeftCorner<2, 2>());
}

QubitChannel QubitChannel::from_superoperator(const Superop3& s) {
  Matrix4 j = Matrix4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int jj = 0; jj < 2; ++jj) {
      Matrix3 in = Matrix3::Zero();
      in(i, jj) = 1.0;
      const Matrix3 out = apply_superoperator(s, in);
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) j(2 * i + k, 2 * jj + l) = out(k, l);
    }
  return QubitChannel(j);
}

QubitChannel QubitChannel::depolarized(const Matrix2& u, double d) {
  if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("depolarized: d outside [0, 1]");
  // Tr(rho) I / 2 has Choi matrix I_4 / 2.
  return QubitChannel((1.0 - d) * from_unitary(u).choi() + d * 0.5 * Matrix4::Identity());
}

Matrix2 QubitChannel::apply(const Matrix2& rho) const {
  Matrix2 out = Matrix2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(k, l) += rho(i, j) * choi_(2 * i + k, 2 * j + l);
  return out;
}

ProcessMatrix ProcessMatrix::from_choi(const Matrix4& choi) {
  const auto basis = pauli_basis();
  ProcessMatrix p;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      p.chi(m, n) = pauli_vector(basis[m]).dot(choi * pauli_vector(basis[n])) / 4.0;
  return p;
}

Matrix4 ProcessMatrix::to_choi() const {
  const auto basis = pauli_basis();
  Matrix4 j = Matrix4::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) j += chi(m, n) * pauli_vector(basis[m]) * pauli_vector(basis[n]).adjoint();
  return j;
}

void ProcessMatrix::validate() const {
  if (!chi.allFinite()) throw std::invalid_argument("ProcessMatrix: non-finite entry");
  if ((chi - chi.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw std::invalid_argument("ProcessMatrix: not Hermitian");
  if (std::abs(chi.trace() - Complex(1.0)) > 1e-8) throw std::invalid_argument("ProcessMatrix: trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix4> es(0.5 * (chi + chi.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) throw std::invalid_argument("ProcessMatrix: not positive semidefinite");
  const auto basis = pauli_basis();
  Matrix2 tp = Matrix2::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) tp += chi(m, n) * basis[n].adjoint() * basis[m];
  if ((tp - Matrix2::Identity()).cwiseAbs().maxCoeff() > 1e-6)
    throw std::invalid_argument("ProcessMatrix: not trace preserving");
}

double process_fidelity(const ProcessMatrix& a, const ProcessMatrix& b) {
  a.validate();
  b.validate();
  return std::min(1.0, std::abs((a.chi * b.chi.adjoint()).trace()));
}

double channel_average_fidelity(const QubitChannel& channel, const Matrix2& target) {
  const Eigen::Vector4cd v = pauli_vector(target);
  const Matrix4& j = channel.choi();
  return (v.dot(j * v).real() + j.trace().real()) / 6.0;
}

std::vector<Observation> analytic_observations(const QubitChannel& channel, const NoiseModel& noise) {
  noise.validate();
  std::vector<Observation> out;
  for (int p = 0; p < kNumPreparations; ++p) {
    const Matrix2 rho_out = channel.apply(prepared_state(p, noise));
    for (int b = 0; b < kNumBases; ++b) {
      const double pb = std::clamp((bright_projector(b) * rho_out).trace().real(), 0.0, 1.0);
      const double rec = recorded_bright(pb, noise);
      out.push_back({p, b, rec, 1.0 - rec});
    }
  }
  return out;
}

std::vector<CountsRecord> simulate_counts(const QubitChannel& channel, const NoiseModel& noise,
                                          std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("simulate_counts: shots must be >= 1");
  const auto probs = analytic_observations(channel, noise);
  std::vector<CountsRecord> out;
  out.reserve(probs.size());
  for (const Observation& o : probs) {
    Rng rng(derive_seed(seed, {0x71u, static_cast<std::uint64_t>(o.prep), static_cast<std::uint64_t>(o.basis)}));
    std::binomial_distribution<std::uint64_t> draw(shots, o.bright);
    out.push_back({o.prep, o.basis, shots, draw(rng)});
  }
  return out;
}

std::vector<Observation> to_observations(std::span<const CountsRecord> records) {
  std::vector<Observation> out;
  out.reserve(records.size());
  for (const CountsRecord& r : records) {
    if (r.bright > r.shots) throw std::invalid_argument("counts record: bright > shots");
    out.push_back({r.prep, r.basis, static_cast<double>(r.bright), static_cast<double>(r.shots - r.bright)});
  }
  return out;
}

void write_counts_csv(std::ostream& out, std::span<const CountsRecord> records) {
  out << "prep,basis,shots,bright\n";
  for (const CountsRecord& r : records) out << r.prep << ',' << r.basis << ',' << r.shots << ',' << r.bright << '\n';
}

std::vector<CountsRecord> read_counts_csv(std::istream& in) {
  std::string line;
  std::vector<CountsRecord> out;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (text::trim(line) != "prep,basis,shots,bright") throw std::invalid_argument("counts csv: bad header");
      header = true;
      continue;
    }
    const auto cells = text::split(line, ',');
    if (cells.size() != 4) throw std::invalid_argument("counts csv: expected 4 fields");
    CountsRecord r;
    r.prep = std::stoi(cells[0]);
    r.basis = std::stoi(cells[1]);
    r.shots = std::stoull(cells[2]);
    r.bright = std::stoull(cells[3]);
    if (r.bright > r.shots) throw std::invalid_argument("counts csv: bright > shots");
    out.push_back(r);
  }
  return out;
}

double log_likelihood(const Matrix4& choi, std::span<const Observation> data) {
  double ll = 0.0;
  for (const Term& t : terms_for(data)) {
    if (t.freq <= 0.0) continue;
    const double p = (choi * t.op).trace().real();
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    ll += t.freq * std::log(p);
  }
  return ll;
}

Matrix4 linear_inversion(std::span<const Observation> data) {
  const auto terms = terms_for(data);
  const auto basis = pauli_basis();
  std::array<Matrix4, 16> g;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) g[static_cast<std::size_t>(4 * a + b)] = 0.5 * kron(basis[a], basis[b]);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(terms.size()), 16);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(terms.size()));
  for (std::size_t r = 0; r < terms.size(); ++r) {
    for (std::size_t c = 0; c < 16; ++c)
      design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (g[c] * terms[r].op).trace().real();
    rhs(static_cast<Eigen::Index>(r)) = terms[r].freq;
  }
  const Eigen::VectorXd x = design.colPivHouseholderQr().solve(rhs);
  Matrix4 j = Matrix4::Zero();
  for (std::size_t c = 0; c < 16; ++c) j += x(static_cast<Eigen::Index>(c)) * g[c];
  return project_psd(j);
}

MleResult mle_process(std::span<const Observation> data, const MleOptions& options) {
  const auto terms = terms_for(data);
  // Full-rank start: the fixed-point map cannot grow eigenvalues out of the kernel.
  constexpr double kMix = 1e-3;
  Matrix4 j = (1.0 - kMix) * linear_inversion(data) + kMix * 0.5 * Matrix4::Identity();
  j = normalise_trace_preserving(j);

  MleResult r;
  double ll = log_likelihood(j, data);
  r.initial_log_likelihood = ll;
  Matrix4 best = j;
  double best_ll = ll;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Matrix4 k = Matrix4::Zero();
    for (const Term& t : terms) {
      if (t.freq <= 0.0) continue;
      const double p = (j * t.op).trace().real();
      k += (t.freq / std::max(p, 1e-300)) * t.op;
    }
    const Matrix4 next = normalise_trace_preserving(k * j * k);
    const double next_ll = log_likelihood(next, data);
    r.iterations = it;
    if (next_ll > best_ll) {
      best = next;
      best_ll = next_ll;
    }
    const double gain = next_ll - ll;
    j = next;
    ll = next_ll;
    if (std::abs(gain) < options.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.log_likelihood = best_ll;
  r.process = ProcessMatrix::from_choi(best);
  // Remove rounding-level asymmetry before the invariant check.
  r.process.chi = 0.5 * (r.process.chi + r.process.chi.adjoint());
  r.process.chi /= r.process.chi.trace().real();
  r.process.validate();
  return r;
}

}  // namespace holo
