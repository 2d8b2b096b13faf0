#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qcs/linalg.hpp"
#include "qcs/rng.hpp"

namespace qcs {

/// n-qubit state over the computational basis. Basis index i encodes the
/// bit string x_1...x_n as i = x_1 2^{n-1} + ... + x_n, so qubit 1 is the
/// most significant bit.
struct QuantumRegister {
  int n_qubits = 0;
  CVector amplitudes;

  std::size_t dim() const { return amplitudes.size(); }
};

inline QuantumRegister basis_state(int n, std::uint64_t k) {
  // 2^24 amplitudes (256 MiB) is the supported simulation ceiling
  if (n < 1 || n > 24)
    throw std::invalid_argument("basis_state: register too wide to simulate");
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (k >= dim) throw std::invalid_argument("basis_state: index out of range");
  QuantumRegister q;
  q.n_qubits = n;
  q.amplitudes.assign(dim, cplx{});
  q.amplitudes[k] = 1.0;
  return q;
}

inline bool is_normalized(const QuantumRegister& q, double eps = kEpsUnitary) {
  return std::abs(norm(q.amplitudes) - 1.0) <= eps;
}

inline std::string bitstring(std::uint64_t index, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if ((index >> (n - 1 - i)) & 1u) s[i] = '1';
  return s;
}

/// Polar coordinates of a single qubit with the global phase dropped:
/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct BlochPoint {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)
};

inline BlochPoint bloch(const QuantumRegister& q, double eps = kEpsUnitary) {
  if (q.n_qubits != 1) throw std::invalid_argument("bloch: single qubit required");
  if (!is_normalized(q, 1e-9))
    throw std::invalid_argument("bloch: state not normalized");
  const cplx a = q.amplitudes[0];
  const cplx b = q.amplitudes[1];
  BlochPoint p;
  p.theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
  const double s = std::sin(p.theta / 2.0);
  const double c = std::cos(p.theta / 2.0);
  if (s < eps || c < eps) {
    p.phi = 0.0;  // poles: phi unconstrained, pick 0
    return p;
  }
  double phi = std::arg(b) - std::arg(a);
  phi = std::fmod(phi, 2.0 * std::numbers::pi);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  p.phi = phi;
  return p;
}

inline QuantumRegister bloch_reconstruct(const BlochPoint& p) {
  QuantumRegister q;
  q.n_qubits = 1;
  q.amplitudes = {std::cos(p.theta / 2.0),
                  std::polar(std::sin(p.theta / 2.0), p.phi)};
  return q;
}

/// Answer of the product-state test. When decomposable, `factors` holds one
/// normalized 2-dim state per qubit whose ordered tensor product rebuilds the
/// input. Otherwise `witness` is a 2x2 amplitude sub-block of rank 2 taken
/// from the failing qubit cut.
struct DecomposabilityResult {
  bool decomposable = false;
  std::vector<CVector> factors;
  CMatrix witness;
};

namespace detail {

// Rank data of the 2 x 2^{n-1} amplitude matrix for one qubit cut, obtained
// from the 2x2 Gram matrix so only the two leading singular values appear.
struct CutRank {
  double sigma1 = 0.0, sigma2 = 0.0;
  CVector top;  // dominant left singular vector (dim 2)
};

inline CutRank cut_rank(const CVector& amps) {
  const std::size_t half = amps.size() / 2;
  CMatrix g(2, 2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < half; ++j)
        s += amps[r * half + j] * std::conj(amps[c * half + j]);
      g(r, c) = s;
    }
  const Eig2 e = eig2_normal(g, 1e-9);
  CutRank out;
  const double l1 = std::max(0.0, e.values[0].real());
  const double l2 = std::max(0.0, e.values[1].real());
  out.sigma1 = std::sqrt(std::max(l1, l2));
  out.sigma2 = std::sqrt(std::min(l1, l2));
  out.top = (l1 >= l2) ? e.vectors[0] : e.vectors[1];
  return out;
}

}  // namespace detail

/// The rank test goes through the 2x2 Gram matrix, which squares the
/// conditioning: for true product states the residual singular value sits
/// near sqrt(machine epsilon) ~ 2e-8, so tolerances below ~1e-7 saturate at
/// double precision.
inline DecomposabilityResult is_decomposable(const QuantumRegister& q,
                                             double eps = 1e-7) {
  DecomposabilityResult res;
  CVector rest = q.amplitudes;
  int remaining = q.n_qubits;
  while (remaining > 1) {
    const std::size_t half = rest.size() / 2;
    const detail::CutRank rk = detail::cut_rank(rest);
    if (rk.sigma2 > eps) {
      // Entangled across this cut: exhibit a rank-2 2x2 sub-block.
      std::size_t c1 = 0, c2 = 1;
      double best = -1.0;
      for (std::size_t i = 0; i < half; ++i)
        for (std::size_t j = i + 1; j < half; ++j) {
          const double d = std::abs(rest[i] * rest[half + j] -
                                    rest[j] * rest[half + i]);
          if (d > best) {
            best = d;
            c1 = i;
            c2 = j;
          }
        }
      res.decomposable = false;
      res.witness = CMatrix(2, 2);
      res.witness(0, 0) = rest[c1];
      res.witness(0, 1) = rest[c2];
      res.witness(1, 0) = rest[half + c1];
      res.witness(1, 1) = rest[half + c2];
      return res;
    }
    const CVector u = rk.top;
    res.factors.push_back(u);
    CVector next(half);
    for (std::size_t j = 0; j < half; ++j)
      next[j] = std::conj(u[0]) * rest[j] + std::conj(u[1]) * rest[half + j];
    const double n = norm(next);
    if (n > 0.0)
      for (auto& e : next) e /= n;
    rest = std::move(next);
    --remaining;
  }
  res.factors.push_back(rest);
  res.decomposable = true;
  return res;
}

/// One branch of a measurement: outcome label, its probability, and the
/// normalized collapsed state (absent for zero-probability branches and for
/// POVM effects, which determine probabilities only).
struct MeasurementOutcome {
  std::size_t index = 0;
  double probability = 0.0;
  std::optional<QuantumRegister> post_state;
};

/// Hermitean observable given by its spectral data: eigenvalue per projector.
struct ProjectiveOperator {
  std::vector<double> eigenvalues;
  std::vector<Projector> projectors;
};

/// Observable with eigenvalue i on basis direction i (a computational-basis
/// readout of all n qubits).
inline ProjectiveOperator computational_basis_observable(int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  ProjectiveOperator op;
  for (std::size_t i = 0; i < dim; ++i) {
    op.eigenvalues.push_back(static_cast<double>(i));
    op.projectors.push_back(projector_onto(dim, {i}));
  }
  return op;
}

/// Observable from a complete orthonormal basis: projector |b_i><b_i| with
/// eigenvalue i.
inline ProjectiveOperator basis_observable(const std::vector<CVector>& basis) {
  ProjectiveOperator op;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    op.eigenvalues.push_back(static_cast<double>(i));
    Projector p;
    p.matrix = outer(basis[i], basis[i]);
    op.projectors.push_back(std::move(p));
  }
  return op;
}

namespace detail {

inline void check_complete(const std::vector<CMatrix>& terms, std::size_t dim,
                           double eps, const char* what) {
  CMatrix sum(dim, dim);
  for (const auto& t : terms) {
    if (t.rows != dim || t.cols != dim)
      throw std::invalid_argument(std::string(what) + ": operator dimension mismatch");
    sum = sum + t;
  }
  if (max_abs_diff(sum, CMatrix::identity(dim)) > eps)
    throw std::invalid_argument(std::string(what) + ": completeness violated");
}

}  // namespace detail

/// p(i) = <psi|P_i|psi>, post-state P_i|psi>/sqrt(p). Requires a complete,
/// pairwise orthogonal projector family.
inline std::vector<MeasurementOutcome> measure_projective(
    const QuantumRegister& q, const ProjectiveOperator& op,
    double eps = 1e-9) {
  if (op.eigenvalues.size() != op.projectors.size())
    throw std::invalid_argument("measure_projective: spectral data mismatch");
  std::vector<CMatrix> mats;
  for (const auto& p : op.projectors) mats.push_back(p.matrix);
  detail::check_complete(mats, q.dim(), eps, "measure_projective");
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j)
      if (max_abs(mats[i] * mats[j]) > eps)
        throw std::invalid_argument("measure_projective: projectors not orthogonal");

  std::vector<MeasurementOutcome> dist;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const CVector proj = mats[i] * q.amplitudes;
    MeasurementOutcome o;
    o.index = i;
    o.probability = std::max(0.0, std::real(inner(q.amplitudes, proj)));
    if (o.probability > eps * eps) {
      QuantumRegister post;
      post.n_qubits = q.n_qubits;
      post.amplitudes = scaled(proj, 1.0 / std::sqrt(o.probability));
      o.post_state = std::move(post);
    }
    dist.push_back(std::move(o));
  }
  return dist;
}

/// General measurement: p(k) = <psi|M_k^dag M_k|psi>, post-state
/// M_k|psi>/sqrt(p). Requires sum_k M_k^dag M_k = I.
inline std::vector<MeasurementOutcome> measure_general(
    const QuantumRegister& q, const std::vector<CMatrix>& ops,
    double eps = 1e-9) {
  std::vector<CMatrix> grams;
  for (const auto& m : ops) grams.push_back(adjoint(m) * m);
  detail::check_complete(grams, q.dim(), eps, "measure_general");

  std::vector<MeasurementOutcome> dist;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const CVector img = ops[k] * q.amplitudes;
    MeasurementOutcome o;
    o.index = k;
    const double n = norm(img);
    o.probability = n * n;
    if (o.probability > eps * eps) {
      QuantumRegister post;
      post.n_qubits = q.n_qubits;
      post.amplitudes = scaled(img, 1.0 / n);
      o.post_state = std::move(post);
    }
    dist.push_back(std::move(o));
  }
  return dist;
}

/// Probabilities p(k) = <psi|E_k|psi> for positive effects summing to I.
/// No post-states: the effects alone do not determine them.
inline std::vector<double> measure_povm(const QuantumRegister& q,
                                        const std::vector<CMatrix>& effects,
                                        double eps = 1e-9) {
  for (const auto& e : effects)
    if (!is_positive_semidefinite(e, eps))
      throw std::invalid_argument("measure_povm: effect not positive semidefinite");
  detail::check_complete(effects, q.dim(), eps, "measure_povm");
  std::vector<double> probs;
  for (const auto& e : effects)
    probs.push_back(
        std::max(0.0, std::real(inner(q.amplitudes, e * q.amplitudes))));
  return probs;
}

/// Draws an outcome index from a probability distribution via CDF inversion
/// on one uniform draw from the supplied generator.
inline std::size_t sample(const std::vector<double>& probs, Rng& rng) {
  if (probs.empty()) throw std::invalid_argument("sample: empty distribution");
  double total = 0.0;
  for (double p : probs) {
    if (p < -1e-9) throw std::invalid_argument("sample: negative probability");
    total += std::max(0.0, p);
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw std::invalid_argument("sample: distribution does not sum to 1");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += std::max(0.0, probs[i]);
    if (u < acc) return i;
  }
  return probs.size() - 1;
}

inline std::size_t sample(const std::vector<double>& probs,
                          std::uint64_t seed) {
  Rng rng(seed);
  return sample(probs, rng);
}

/// State dump: one line `index bitstring re im` per nonzero amplitude,
/// indices ascending.
inline std::string dump_state(const QuantumRegister& q,
                              double threshold = 1e-12) {
  std::ostringstream os;
  for (std::size_t i = 0; i < q.dim(); ++i) {
    const cplx a = q.amplitudes[i];
    if (std::abs(a) <= threshold) continue;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu %s %.12g %.12g\n", i,
                  bitstring(i, q.n_qubits).c_str(), a.real(), a.imag());
    os << buf;
  }
  return os.str();
}

inline QuantumRegister parse_state(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int n_qubits = 0;
  std::vector<std::pair<std::size_t, cplx>> entries;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t index;
    std::string bits;
    double re, im;
    if (!(ls >> index >> bits >> re >> im))
      throw std::invalid_argument("parse_state: malformed line: " + line);
    if (n_qubits == 0)
      n_qubits = static_cast<int>(bits.size());
    else if (static_cast<int>(bits.size()) != n_qubits)
      throw std::invalid_argument("parse_state: inconsistent qubit count");
    entries.emplace_back(index, cplx(re, im));
  }
  if (n_qubits == 0) throw std::invalid_argument("parse_state: empty dump");
  if (n_qubits > 24)
    throw std::invalid_argument("parse_state: register too wide to simulate");
  QuantumRegister q;
  q.n_qubits = n_qubits;
  q.amplitudes.assign(std::size_t{1} << n_qubits, cplx{});
  for (const auto& [i, a] : entries) {
    if (i >= q.dim()) throw std::invalid_argument("parse_state: index out of range");
    q.amplitudes[i] = a;
  }
  return q;
}

}  // namespace qcs
