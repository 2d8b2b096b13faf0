#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcs/circuit.hpp"
#include "qcs/gates.hpp"
#include "qcs/linalg.hpp"
#include "qcs/qstate.hpp"
#include "qcs/random.hpp"

namespace qcs {

/// Parameters of U = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta).
struct ZYFactors {
  double alpha = 0.0;  // (-pi, pi]
  double beta = 0.0;
  double gamma = 0.0;  // [0, pi]
  double delta = 0.0;
};

inline CMatrix zy_matrix(const ZYFactors& f) {
  return phase_p(f.alpha).matrix * rotation(Axis::Z, f.beta).matrix *
         rotation(Axis::Y, f.gamma).matrix * rotation(Axis::Z, f.delta).matrix;
}

/// Splits a 2x2 unitary into phase and Z-Y-Z rotation angles. gamma lands in
/// [0, pi]; at the poles gamma in {0, pi} only beta+delta (resp. beta-delta)
/// is determined, and beta := 0 picks one representative.
inline ZYFactors zy_decompose(const CMatrix& u, double eps = kEpsUnitary) {
  if (u.rows != 2 || u.cols != 2)
    throw std::invalid_argument("zy_decompose: matrix must be 2x2");
  if (!is_unitary(u, eps))
    throw std::invalid_argument("zy_decompose: matrix not unitary within eps");

  ZYFactors f;
  const cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  f.alpha = std::atan2(det.imag(), det.real()) / 2.0;
  const cplx ph = std::polar(1.0, -f.alpha);
  const cplx v00 = ph * u(0, 0);
  const cplx v10 = ph * u(1, 0);
  f.gamma = 2.0 * std::atan2(std::abs(v10), std::abs(v00));

  constexpr double pole = 1e-12;
  if (std::abs(v10) <= pole) {
    f.beta = 0.0;
    f.delta = -2.0 * std::arg(v00);
  } else if (std::abs(v00) <= pole) {
    f.beta = 0.0;
    f.delta = -2.0 * std::arg(v10);
  } else {
    const double s1 = std::arg(v00);  // -(beta+delta)/2
    const double s2 = std::arg(v10);  // (beta-delta)/2
    f.beta = s2 - s1;
    f.delta = -s1 - s2;
  }
  return f;
}

/// A, B, C with ABC = I and e^{i alpha} A X B X C = U, assembled from the
/// Z-Y-Z angles: A = Rz(b)Ry(g/2), B = Ry(-g/2)Rz(-(d+b)/2), C = Rz((d-b)/2).
struct ABCFactors {
  CMatrix a, b, c;
  double alpha = 0.0;
};

inline ABCFactors abc_decompose(const CMatrix& u, double eps = kEpsUnitary) {
  const ZYFactors f = zy_decompose(u, eps);
  ABCFactors out;
  out.a = rotation(Axis::Z, f.beta).matrix * rotation(Axis::Y, f.gamma / 2).matrix;
  out.b = rotation(Axis::Y, -f.gamma / 2).matrix *
          rotation(Axis::Z, -(f.delta + f.beta) / 2).matrix;
  out.c = rotation(Axis::Z, (f.delta - f.beta) / 2).matrix;
  out.alpha = f.alpha;
  return out;
}

namespace detail {

inline Step cnot_step(int control, int target) {
  GateSpec g = pauli(Pauli::X);
  g.name = "CNOT";
  return {std::move(g), controlled_on({control}, target)};
}

inline Step lit_step(const CMatrix& m, ControlPattern pattern) {
  return {GateSpec{"U", m, {}}, std::move(pattern)};
}

// The six-operation controlled-U block: C, CNOT, B, CNOT, A on the target
// and E(alpha) on the control.
inline void append_controlled_u(Circuit& c, const CMatrix& u, int control,
                                int target, double eps = kEpsUnitary) {
  const ABCFactors f = abc_decompose(u, eps);
  c.steps.push_back(lit_step(f.c, on_wires({target})));
  c.steps.push_back(cnot_step(control, target));
  c.steps.push_back(lit_step(f.b, on_wires({target})));
  c.steps.push_back(cnot_step(control, target));
  c.steps.push_back(lit_step(f.a, on_wires({target})));
  c.steps.push_back({phase_e(f.alpha), on_wires({control})});
}

// Lowers a gate with all-ones controls to the elementary basis by the
// square-root recursion. The two generalized NOTs re-enter the same
// recursion with U = X, so the count grows geometrically:
//   count(1) = 6, count(2) = 20, count(m) = 3 count(m-1) + 12.
// That stays under 15 (m+1)^2 for m <= 4; it is not the linear
// borrowed-bit construction and makes no optimality claim.
inline void append_lambda(Circuit& c, const CMatrix& u,
                          const std::vector<int>& controls, int target,
                          double eps = kEpsUnitary) {
  const std::size_t m = controls.size();
  if (m == 0) {
    c.steps.push_back(lit_step(u, on_wires({target})));
    return;
  }
  if (m == 1) {
    append_controlled_u(c, u, controls[0], target, eps);
    return;
  }
  const CMatrix v = sqrt_unitary2(u, eps);
  const CMatrix vd = adjoint(v);
  if (m == 2) {
    append_controlled_u(c, v, controls[1], target, eps);
    c.steps.push_back(cnot_step(controls[0], controls[1]));
    append_controlled_u(c, vd, controls[1], target, eps);
    c.steps.push_back(cnot_step(controls[0], controls[1]));
    append_controlled_u(c, v, controls[0], target, eps);
    return;
  }
  const std::vector<int> head(controls.begin(), controls.end() - 1);
  const int last = controls.back();
  const CMatrix x = pauli(Pauli::X).matrix;
  append_controlled_u(c, v, last, target, eps);
  append_lambda(c, x, head, last, eps);
  append_controlled_u(c, vd, last, target, eps);
  append_lambda(c, x, head, last, eps);
  append_lambda(c, v, head, target, eps);
}

}  // namespace detail

/// Two-wire circuit equal to the controlled-U gate, lowered to exactly six
/// elementary operations (wire 1 control, wire 2 target).
inline Circuit controlled_u_circuit(const CMatrix& u, double eps = kEpsUnitary) {
  Circuit c;
  c.n_wires = 2;
  detail::append_controlled_u(c, u, 1, 2, eps);
  return c;
}

/// Three-wire circuit equal to the doubly controlled U (controls 1 and 2,
/// target 3), written with controlled-V blocks where V^2 = U:
///   V on (2->3), CNOT(1->2), Vdag on (2->3), CNOT(1->2), V on (1->3).
inline Circuit lambda2_circuit(const CMatrix& u, double eps = kEpsUnitary) {
  if (!is_unitary(u, eps))
    throw std::invalid_argument("lambda2_circuit: matrix not unitary");
  const CMatrix v = sqrt_unitary2(u, eps);
  Circuit c;
  c.n_wires = 3;
  c.steps.push_back(detail::lit_step(v, controlled_on({2}, 3)));
  c.steps.push_back(detail::cnot_step(1, 2));
  c.steps.push_back(detail::lit_step(adjoint(v), controlled_on({2}, 3)));
  c.steps.push_back(detail::cnot_step(1, 2));
  c.steps.push_back(detail::lit_step(v, controlled_on({1}, 3)));
  return c;
}

/// Elementary circuit for U controlled on wires 1..n_controls with target
/// n_controls+1. See append_lambda for the gate-count behavior.
inline Circuit lambda_n_circuit(const CMatrix& u, int n_controls,
                                double eps = kEpsUnitary) {
  if (n_controls < 1)
    throw std::invalid_argument("lambda_n_circuit: need at least one control");
  if (!is_unitary(u, eps))
    throw std::invalid_argument("lambda_n_circuit: matrix not unitary");
  Circuit c;
  c.n_wires = n_controls + 1;
  std::vector<int> controls(n_controls);
  for (int i = 0; i < n_controls; ++i) controls[i] = i + 1;
  detail::append_lambda(c, u, controls, n_controls + 1, eps);
  return c;
}

/// N x N unitary acting as `block` on basis directions p and q and as the
/// identity elsewhere.
struct TwoLevelFactor {
  std::size_t p = 0, q = 1;  // p < q
  CMatrix block;             // 2x2 unitary; row 0 <-> level p
};

inline CMatrix expand_two_level(const TwoLevelFactor& f, std::size_t n) {
  if (f.p >= f.q || f.q >= n)
    throw std::invalid_argument("expand_two_level: bad level indices");
  CMatrix m = CMatrix::identity(n);
  m(f.p, f.p) = f.block(0, 0);
  m(f.p, f.q) = f.block(0, 1);
  m(f.q, f.p) = f.block(1, 0);
  m(f.q, f.q) = f.block(1, 1);
  return m;
}

/// Factorizes a unitary into at most N(N-1)/2 two-level factors whose
/// product (in list order) rebuilds it. Column p is cleared bottom-up by
/// Givens-style factors that leave the diagonal entry real positive, the
/// leading block is processed recursively (iteratively here), and whatever
/// 2x2 corner remains becomes the final factor. Near-identity factors are
/// dropped, so diagonal inputs cost at most N-1 factors.
inline std::vector<TwoLevelFactor> two_level_factorize(
    const CMatrix& u, double eps = kEpsUnitary) {
  if (!u.square() || u.rows < 2)
    throw std::invalid_argument("two_level_factorize: need square matrix, N >= 2");
  if (!is_unitary(u, eps))
    throw std::invalid_argument("two_level_factorize: matrix not unitary");
  const std::size_t n = u.rows;
  constexpr double skip = 1e-13;

  CMatrix work = u;
  std::vector<TwoLevelFactor> factors;
  auto apply_rows = [&](std::size_t p, std::size_t q, const CMatrix& b) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx wp = work(p, j), wq = work(q, j);
      work(p, j) = b(0, 0) * wp + b(0, 1) * wq;
      work(q, j) = b(1, 0) * wp + b(1, 1) * wq;
    }
  };

  for (std::size_t p = 0; p + 2 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const cplx a = work(p, p), b = work(q, p);
      const double r = std::sqrt(std::norm(a) + std::norm(b));
      if (r < 1e-300) continue;
      CMatrix g(2, 2);
      g(0, 0) = std::conj(a) / r;
      g(0, 1) = std::conj(b) / r;
      g(1, 0) = -b / r;
      g(1, 1) = a / r;
      if (max_abs_diff(g, CMatrix::identity(2)) <= skip) continue;
      apply_rows(p, q, g);
      factors.push_back({p, q, adjoint(g)});
    }
  }
  CMatrix corner(2, 2);
  corner(0, 0) = work(n - 2, n - 2);
  corner(0, 1) = work(n - 2, n - 1);
  corner(1, 0) = work(n - 1, n - 2);
  corner(1, 1) = work(n - 1, n - 1);
  if (max_abs_diff(corner, CMatrix::identity(2)) > skip)
    factors.push_back({n - 2, n - 1, corner});
  return factors;
}

/// Largest singular value of U - V: the worst-case output distance over all
/// normalized inputs.
inline double error_metric(const CMatrix& u, const CMatrix& v) {
  if (u.rows != v.rows || u.cols != v.cols)
    throw std::invalid_argument("error_metric: dimension mismatch");
  return spectral_norm(u - v);
}

namespace detail {

inline int index_bit(std::size_t value, int wire, int n_wires) {
  return static_cast<int>((value >> (n_wires - wire)) & 1u);
}

// Generalized multi-controlled single-qubit step: gate on `target`, every
// other wire conditioned on the corresponding bit of `pattern_bits`.
inline Step conditioned_step(const GateSpec& g, int target,
                             std::size_t pattern_bits, int n_wires) {
  ControlPattern p;
  for (int w = 1; w <= n_wires; ++w) {
    if (w == target) continue;
    p.control_wires.push_back(w);
    p.condition_bits.push_back(index_bit(pattern_bits, w, n_wires));
  }
  p.target_wires = {target};
  return {g, p};
}

}  // namespace detail

/// Routes a two-level factor on n qubits onto a single-qubit controlled
/// operation. Differing bits between the two level labels are flipped from
/// most significant to least significant by generalized controlled-NOTs;
/// the block lands as a generalized controlled gate on the remaining
/// differing qubit; the NOT chain is then undone in reverse.
inline Circuit gray_route(const TwoLevelFactor& f, int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (f.p >= f.q || f.q >= dim)
    throw std::invalid_argument("gray_route: level out of range");
  Circuit c;
  c.n_wires = n_qubits;

  std::vector<int> diff_wires;
  for (int w = 1; w <= n_qubits; ++w)
    if (detail::index_bit(f.p, w, n_qubits) != detail::index_bit(f.q, w, n_qubits))
      diff_wires.push_back(w);

  GateSpec x = pauli(Pauli::X);
  std::vector<Step> chain;
  std::size_t cur = f.p;
  for (std::size_t i = 0; i + 1 < diff_wires.size(); ++i) {
    const int w = diff_wires[i];
    chain.push_back(detail::conditioned_step(x, w, cur, n_qubits));
    cur ^= std::size_t{1} << (n_qubits - w);
  }
  const int last = diff_wires.back();

  // Orient the block so row 0 tracks the level routed from f.p.
  CMatrix w_block = f.block;
  if (detail::index_bit(cur, last, n_qubits) == 1) {
    const CMatrix xm = x.matrix;
    w_block = xm * w_block * xm;
  }

  for (const auto& s : chain) c.steps.push_back(s);
  if (n_qubits == 1) {
    c.steps.push_back(detail::lit_step(w_block, on_wires({1})));
  } else {
    c.steps.push_back(detail::conditioned_step(GateSpec{"U", w_block, {}},
                                               last, cur, n_qubits));
  }
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) c.steps.push_back(*it);
  return c;
}

/// Rewrites generalized controlled single-qubit steps into the elementary
/// basis: condition-on-0 controls are conjugated with X on the control wire
/// and the remaining all-ones control is lowered by append_lambda.
inline Circuit lower_to_elementary(const Circuit& in, double eps = kEpsUnitary) {
  Circuit out;
  out.n_wires = in.n_wires;
  const CMatrix xm = pauli(Pauli::X).matrix;
  for (const auto& s : in.steps) {
    if (s.gate.arity() != 1)
      throw std::invalid_argument("lower_to_elementary: multi-qubit literal step");
    if (is_elementary_step(s)) {
      out.steps.push_back(s);
      continue;
    }
    std::vector<int> zero_ctl, one_ctl;
    for (std::size_t i = 0; i < s.pattern.control_wires.size(); ++i)
      (s.pattern.condition_bits[i] ? one_ctl : zero_ctl)
          .push_back(s.pattern.control_wires[i]);
    std::vector<int> controls = one_ctl;
    controls.insert(controls.end(), zero_ctl.begin(), zero_ctl.end());
    for (int w : zero_ctl) out.steps.push_back({pauli(Pauli::X), on_wires({w})});
    const int target = s.pattern.target_wires[0];
    if (controls.empty()) {
      out.steps.push_back({s.gate, on_wires({target})});
    } else if (controls.size() == 1 && max_abs_diff(s.gate.matrix, xm) <= eps) {
      out.steps.push_back(detail::cnot_step(controls[0], target));
    } else {
      detail::append_lambda(out, s.gate.matrix, controls, target, eps);
    }
    for (int w : zero_ctl) out.steps.push_back({pauli(Pauli::X), on_wires({w})});
  }
  return out;
}

/// The circuit's unitary assembled column-by-column with the streaming
/// applier; cheaper than the matrix-product path for long circuits.
inline CMatrix circuit_unitary_streamed(const Circuit& c) {
  const std::size_t dim = std::size_t{1} << c.n_wires;
  CMatrix u(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    CVector col(dim, cplx{});
    col[j] = 1.0;
    apply_circuit(c, col);
    for (std::size_t i = 0; i < dim; ++i) u(i, j) = col[i];
  }
  return u;
}

/// Output of the full lowering pipeline, with the measured distance between
/// the target and the rebuilt circuit unitary.
struct SynthesisResult {
  std::vector<TwoLevelFactor> factors;
  Circuit circuit;
  std::size_t gate_count = 0;
  double reconstruction_error = 0.0;
};

/// Compiles an arbitrary 2^n x 2^n unitary down to uncontrolled single-qubit
/// gates and CNOTs: two-level factorization, Gray routing of each factor,
/// then control lowering. Factors multiply left-to-right, so they are routed
/// in reverse order (the last factor acts first on states).
inline SynthesisResult compile_unitary(const CMatrix& u,
                                       double eps = kEpsUnitary) {
  if (!u.square()) throw std::invalid_argument("compile_unitary: need square matrix");
  int n = 0;
  for (std::size_t d = u.rows; d > 1; d >>= 1) ++n;
  if ((std::size_t{1} << n) != u.rows || n < 1)
    throw std::invalid_argument("compile_unitary: dimension must be a power of two");

  SynthesisResult res;
  res.factors = two_level_factorize(u, eps);
  Circuit routed;
  routed.n_wires = n;
  for (auto it = res.factors.rbegin(); it != res.factors.rend(); ++it) {
    const Circuit rc = gray_route(*it, n);
    routed.steps.insert(routed.steps.end(), rc.steps.begin(), rc.steps.end());
  }
  res.circuit = lower_to_elementary(routed, eps);
  res.gate_count = res.circuit.steps.size();
  res.reconstruction_error =
      error_metric(u, circuit_unitary_streamed(res.circuit));
  return res;
}

namespace detail {

// Rearrangement that is rank 1 exactly when M = S (x) T:
// R[2i+j][2k+l] = M[2i+k][2j+l].
inline CMatrix realign4(const CMatrix& m) {
  CMatrix r(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          r(2 * i + j, 2 * k + l) = m(2 * i + k, 2 * j + l);
  return r;
}

// Cross-approximation residual: for a rank-1 matrix, the pivot row and
// column reproduce every entry. Works at entry precision, unlike a Gram
// route, which would square the conditioning.
inline bool realigned_rank1(const CMatrix& m, double eps) {
  const CMatrix r = realign4(m);
  std::size_t pi = 0, pj = 0;
  double pivot = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (std::abs(r(i, j)) > pivot) {
        pivot = std::abs(r(i, j));
        pi = i;
        pj = j;
      }
  if (pivot == 0.0) return true;
  double resid = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      resid = std::max(resid,
                       std::abs(r(i, j) - r(i, pj) * r(pi, j) / r(pi, pj)));
  return resid <= eps * std::max(1.0, pivot);
}

}  // namespace detail

/// True when the two-qubit gate maps every product state to a product state,
/// i.e. when V or V * SWAP splits as a tensor product of one-qubit gates.
inline bool is_primitive(const CMatrix& v, double eps = 1e-8) {
  if (v.rows != 4 || v.cols != 4)
    throw std::invalid_argument("is_primitive: matrix must be 4x4");
  if (!is_unitary(v, std::max(eps, kEpsUnitary)))
    throw std::invalid_argument("is_primitive: matrix not unitary");
  if (detail::realigned_rank1(v, eps)) return true;
  return detail::realigned_rank1(v * swap_gate().matrix, eps);
}

/// For an imprimitive gate, searches random product states for one whose
/// image is entangled. Returns the input factors of the first hit.
inline std::optional<std::pair<CVector, CVector>> find_entangling_witness(
    const CMatrix& v, int trials, Rng& rng, double eps = 1e-7) {
  for (int t = 0; t < trials; ++t) {
    const CVector a = random_qubit(rng);
    const CVector b = random_qubit(rng);
    QuantumRegister q;
    q.n_qubits = 2;
    q.amplitudes = v * tensor_vec(a, b);
    if (!is_decomposable(q, eps).decomposable) return std::make_pair(a, b);
  }
  return std::nullopt;
}

}  // namespace qcs
