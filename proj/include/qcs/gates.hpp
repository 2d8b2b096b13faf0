#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qcs/linalg.hpp"

namespace qcs {

/// A named unitary of dimension 2^k together with any real parameters
/// (angles in radians) it was built from.
struct GateSpec {
  std::string name;
  CMatrix matrix;
  std::vector<double> params;

  int arity() const {
    int k = 0;
    for (std::size_t d = matrix.rows; d > 1; d >>= 1) ++k;
    return k;
  }
};

/// Wire bindings for one gate application. Wires are 1-based and wire 1 is
/// the most significant bit of the basis index. condition_bits[i] is the
/// value (0 or 1) control_wires[i] must hold for the gate to fire.
struct ControlPattern {
  std::vector<int> control_wires;
  std::vector<int> condition_bits;
  std::vector<int> target_wires;
};

inline ControlPattern on_wires(std::vector<int> targets) {
  return ControlPattern{{}, {}, std::move(targets)};
}

inline ControlPattern controlled_on(std::vector<int> controls, int target) {
  ControlPattern p;
  p.control_wires = std::move(controls);
  p.condition_bits.assign(p.control_wires.size(), 1);
  p.target_wires = {target};
  return p;
}

enum class Pauli { X, Y, Z };

inline GateSpec pauli(Pauli which) {
  switch (which) {
    case Pauli::X:
      return {"X", CMatrix::from_rows(2, 2, {0, 1, 1, 0}), {}};
    case Pauli::Y:
      return {"Y", CMatrix::from_rows(2, 2, {0, cplx(0, -1), cplx(0, 1), 0}), {}};
    default:
      return {"Z", CMatrix::from_rows(2, 2, {1, 0, 0, -1}), {}};
  }
}

inline GateSpec hadamard() {
  const double s = 1.0 / std::numbers::sqrt2;
  return {"H", CMatrix::from_rows(2, 2, {s, s, s, -s}), {}};
}

inline GateSpec phase_s() {
  return {"S", CMatrix::from_rows(2, 2, {1, 0, 0, cplx(0, 1)}), {}};
}

inline GateSpec t_gate() {
  return {"T",
          CMatrix::from_rows(2, 2, {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)}),
          {}};
}

enum class Axis { X, Y, Z };

/// R_axis(theta) = exp(-i theta sigma/2) in closed form.
inline GateSpec rotation(Axis axis, double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  switch (axis) {
    case Axis::X:
      return {"RX", CMatrix::from_rows(2, 2, {c, cplx(0, -s), cplx(0, -s), c}), {theta}};
    case Axis::Y:
      return {"RY", CMatrix::from_rows(2, 2, {c, -s, s, c}), {theta}};
    default:
      return {"RZ",
              CMatrix::from_rows(2, 2,
                                 {std::polar(1.0, -theta / 2.0), 0, 0,
                                  std::polar(1.0, theta / 2.0)}),
              {theta}};
  }
}

/// Rotation by alpha about the unit axis (nx, ny, nz):
/// cos(a/2) I - i sin(a/2) (nx X + ny Y + nz Z).
inline GateSpec rotation_general(double nx, double ny, double nz, double alpha,
                                 double eps = kEpsUnitary) {
  const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (std::abs(len - 1.0) > std::max(eps, 1e-9))
    throw std::invalid_argument("rotation_general: axis must be a unit vector");
  const double c = std::cos(alpha / 2.0);
  const cplx is(0.0, std::sin(alpha / 2.0));
  CMatrix m(2, 2);
  m(0, 0) = c - is * nz;
  m(0, 1) = -is * cplx(nx, -ny);
  m(1, 0) = -is * cplx(nx, ny);
  m(1, 1) = c + is * nz;
  return {"RN", m, {nx, ny, nz, alpha}};
}

/// Global phase gate P(alpha) = e^{i alpha} I.
inline GateSpec phase_p(double alpha) {
  const cplx ph = std::polar(1.0, alpha);
  return {"P", CMatrix::from_rows(2, 2, {ph, 0, 0, ph}), {alpha}};
}

/// Relative phase gate E(alpha) = diag(1, e^{i alpha}) = P(alpha/2) Rz(alpha).
inline GateSpec phase_e(double alpha) {
  return {"E", CMatrix::from_rows(2, 2, {1, 0, 0, std::polar(1.0, alpha)}), {alpha}};
}

/// Controlled gate with m all-ones controls: identity except the last 2x2
/// block, which is u.
inline GateSpec controlled(const GateSpec& u, int m) {
  if (u.matrix.rows != 2 || u.matrix.cols != 2)
    throw std::invalid_argument("controlled: base gate must be 2x2");
  const std::size_t dim = std::size_t{1} << (m + 1);
  CMatrix g = CMatrix::identity(dim);
  g(dim - 2, dim - 2) = u.matrix(0, 0);
  g(dim - 2, dim - 1) = u.matrix(0, 1);
  g(dim - 1, dim - 2) = u.matrix(1, 0);
  g(dim - 1, dim - 1) = u.matrix(1, 1);
  return {"C" + std::to_string(m) + "(" + u.name + ")", g, u.params};
}

inline GateSpec cnot_gate() {
  GateSpec g = controlled(pauli(Pauli::X), 1);
  g.name = "CNOT";
  return g;
}

inline GateSpec toffoli_gate() {
  GateSpec g = controlled(pauli(Pauli::X), 2);
  g.name = "TOFFOLI";
  return g;
}

inline GateSpec swap_gate() {
  return {"SWAP",
          CMatrix::from_rows(4, 4,
                             {1, 0, 0, 0,
                              0, 0, 1, 0,
                              0, 1, 0, 0,
                              0, 0, 0, 1}),
          {}};
}

/// The three-qubit gate Lambda_2(i Rx(pi alpha)). Universal when alpha is
/// irrational; irrationality of a double is not checkable, so any real
/// parameter is accepted.
inline GateSpec deutsch_gate(double alpha) {
  GateSpec rx = rotation(Axis::X, std::numbers::pi * alpha);
  GateSpec irx{"iRX", cplx(0, 1) * rx.matrix, {alpha}};
  GateSpec g = controlled(irx, 2);
  g.name = "DEUTSCH";
  g.params = {alpha};
  return g;
}

/// Two-qubit gate with a phased-rotation block on the control-1 subspace.
inline GateSpec barenco_gate(double phi, double alpha, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  CMatrix m = CMatrix::identity(4);
  m(2, 2) = std::polar(1.0, alpha) * c;
  m(2, 3) = cplx(0, -1) * std::polar(1.0, alpha - phi) * s;
  m(3, 2) = cplx(0, -1) * std::polar(1.0, alpha + phi) * s;
  m(3, 3) = std::polar(1.0, alpha) * c;
  return {"BARENCO", m, {phi, alpha, theta}};
}

enum class Ladder { Plus, Minus };

/// Spin-1/2 raising and lowering matrices.
inline CMatrix spin_ladder(Ladder which) {
  return which == Ladder::Plus ? CMatrix::from_rows(2, 2, {0, 1, 0, 0})
                               : CMatrix::from_rows(2, 2, {0, 0, 1, 0});
}

namespace detail {

inline int wire_bit(std::uint64_t index, int wire, int n_wires) {
  return static_cast<int>((index >> (n_wires - wire)) & 1u);
}

inline std::uint64_t with_wire_bit(std::uint64_t index, int wire, int n_wires,
                                   int bit) {
  const std::uint64_t mask = std::uint64_t{1} << (n_wires - wire);
  return bit ? (index | mask) : (index & ~mask);
}

inline void validate_pattern(const ControlPattern& p, int arity, int n_wires) {
  if (p.condition_bits.size() != p.control_wires.size())
    throw std::invalid_argument("control pattern: condition count mismatch");
  if (static_cast<int>(p.target_wires.size()) != arity)
    throw std::invalid_argument("control pattern: gate arity mismatch");
  std::vector<int> seen;
  auto check = [&](int w) {
    if (w < 1 || w > n_wires)
      throw std::invalid_argument("control pattern: wire out of range");
    for (int s : seen)
      if (s == w) throw std::invalid_argument("control pattern: wire collision");
    seen.push_back(w);
  };
  for (int w : p.control_wires) check(w);
  for (int w : p.target_wires) check(w);
  for (int b : p.condition_bits)
    if (b != 0 && b != 1)
      throw std::invalid_argument("control pattern: condition bit must be 0/1");
}

}  // namespace detail

/// Applies `gate` with `pattern` to a raw amplitude vector over n wires,
/// in place. Streams over the amplitudes; never forms the 2^n x 2^n matrix.
inline void apply_gate(const GateSpec& gate, const ControlPattern& pattern,
                       int n_wires, CVector& amps) {
  const int k = gate.arity();
  detail::validate_pattern(pattern, k, n_wires);
  const std::uint64_t dim = std::uint64_t{1} << n_wires;
  if (amps.size() != dim)
    throw std::invalid_argument("apply_gate: state dimension mismatch");
  const std::uint64_t sub = std::uint64_t{1} << k;

  std::uint64_t tmask = 0;
  for (int w : pattern.target_wires)
    tmask |= std::uint64_t{1} << (n_wires - w);

  std::vector<std::uint64_t> offsets(sub);
  for (std::uint64_t t = 0; t < sub; ++t) {
    std::uint64_t off = 0;
    for (int m = 0; m < k; ++m)
      if ((t >> (k - 1 - m)) & 1u)
        off |= std::uint64_t{1} << (n_wires - pattern.target_wires[m]);
    offsets[t] = off;
  }

  std::vector<cplx> in(sub), out(sub);
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & tmask) continue;  // enumerate target-bits-zero representatives
    bool fire = true;
    for (std::size_t c = 0; c < pattern.control_wires.size(); ++c) {
      if (detail::wire_bit(base, pattern.control_wires[c], n_wires) !=
          pattern.condition_bits[c]) {
        fire = false;
        break;
      }
    }
    if (!fire) continue;
    for (std::uint64_t t = 0; t < sub; ++t) in[t] = amps[base | offsets[t]];
    for (std::uint64_t r = 0; r < sub; ++r) {
      cplx s = 0.0;
      for (std::uint64_t t = 0; t < sub; ++t) s += gate.matrix(r, t) * in[t];
      out[r] = s;
    }
    for (std::uint64_t t = 0; t < sub; ++t) amps[base | offsets[t]] = out[t];
  }
}

/// Full 2^n x 2^n matrix of `gate` bound to wires by `pattern`: acts as the
/// gate on the targets when every control matches its condition bit, and as
/// the identity otherwise.
inline CMatrix place(const GateSpec& gate, const ControlPattern& pattern,
                     int n_wires) {
  const int k = gate.arity();
  detail::validate_pattern(pattern, k, n_wires);
  const std::uint64_t dim = std::uint64_t{1} << n_wires;
  CMatrix m(dim, dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    bool fire = true;
    for (std::size_t c = 0; c < pattern.control_wires.size(); ++c) {
      if (detail::wire_bit(col, pattern.control_wires[c], n_wires) !=
          pattern.condition_bits[c]) {
        fire = false;
        break;
      }
    }
    if (!fire) {
      m(col, col) = 1.0;
      continue;
    }
    std::uint64_t t = 0;
    for (int j = 0; j < k; ++j)
      t = (t << 1) |
          static_cast<std::uint64_t>(
              detail::wire_bit(col, pattern.target_wires[j], n_wires));
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << k); ++r) {
      const cplx g = gate.matrix(r, t);
      if (g == cplx{}) continue;
      std::uint64_t row = col;
      for (int j = 0; j < k; ++j)
        row = detail::with_wire_bit(row, pattern.target_wires[j], n_wires,
                                    static_cast<int>((r >> (k - 1 - j)) & 1u));
      m(row, col) = g;
    }
  }
  return m;
}

}  // namespace qcs
