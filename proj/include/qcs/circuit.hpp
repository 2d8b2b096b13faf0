#pragma once

#include <cctype>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "qcs/error.hpp"
#include "qcs/gates.hpp"
#include "qcs/linalg.hpp"
#include "qcs/qstate.hpp"

namespace qcs {

struct Step {
  GateSpec gate;
  ControlPattern pattern;
};

/// Ordered gate sequence over a fixed wire count. Steps are applied in list
/// order: the first step is the rightmost factor of the circuit's unitary.
struct Circuit {
  int n_wires = 0;
  std::vector<Step> steps;
};

inline void validate(const Circuit& c) {
  if (c.n_wires < 1) throw std::invalid_argument("circuit: need at least one wire");
  for (const auto& s : c.steps)
    detail::validate_pattern(s.pattern, s.gate.arity(), c.n_wires);
}

inline Circuit& append(Circuit& c, GateSpec gate, ControlPattern pattern) {
  detail::validate_pattern(pattern, gate.arity(), c.n_wires);
  c.steps.push_back({std::move(gate), std::move(pattern)});
  return c;
}

inline Circuit concat(const Circuit& a, const Circuit& b) {
  if (a.n_wires != b.n_wires)
    throw std::invalid_argument("concat: wire count mismatch");
  Circuit c = a;
  c.steps.insert(c.steps.end(), b.steps.begin(), b.steps.end());
  return c;
}

/// Applies the circuit to a raw amplitude vector by streaming each gate over
/// the amplitudes; the full 2^n x 2^n product is never formed. The vector is
/// not required to be normalized, which keeps worked examples with integer
/// amplitudes exact.
inline void apply_circuit(const Circuit& c, CVector& amps) {
  validate(c);
  if (amps.size() != (std::size_t{1} << c.n_wires))
    throw std::invalid_argument("apply: state dimension mismatch");
  for (const auto& s : c.steps) apply_gate(s.gate, s.pattern, c.n_wires, amps);
}

/// |out> = U_C |in> for a normalized register.
inline QuantumRegister run(const Circuit& c, const QuantumRegister& in) {
  if (in.n_qubits != c.n_wires)
    throw std::invalid_argument("run: register width mismatch");
  if (!is_normalized(in, 1e-9))
    throw std::invalid_argument("run: input register not normalized");
  QuantumRegister out = in;
  apply_circuit(c, out.amplitudes);
  return out;
}

/// The circuit's unitary as an explicit matrix: the product of the placed
/// step matrices with the first step applied first (rightmost factor).
inline CMatrix to_unitary(const Circuit& c) {
  validate(c);
  CMatrix u = CMatrix::identity(std::size_t{1} << c.n_wires);
  for (const auto& s : c.steps)
    u = place(s.gate, s.pattern, c.n_wires) * u;
  return u;
}

inline GateSpec sdg_gate() {
  return {"SDG", CMatrix::from_rows(2, 2, {1, 0, 0, cplx(0, -1)}), {}};
}

inline GateSpec tdg_gate() {
  return {"TDG",
          CMatrix::from_rows(2, 2, {1, 0, 0, std::polar(1.0, -std::numbers::pi / 4)}),
          {}};
}

/// Adjoint of a single gate, renamed canonically where the format has a
/// name for it; anything else becomes a literal-matrix gate.
inline GateSpec adjoint_gate(const GateSpec& g) {
  const std::string& n = g.name;
  if (n == "X" || n == "Y" || n == "Z" || n == "H" || n == "CNOT" ||
      n == "TOFFOLI" || n == "SWAP")
    return g;
  if (n == "S") return sdg_gate();
  if (n == "SDG") return phase_s();
  if (n == "T") return tdg_gate();
  if (n == "TDG") return t_gate();
  if (n == "RX") return rotation(Axis::X, -g.params.at(0));
  if (n == "RY") return rotation(Axis::Y, -g.params.at(0));
  if (n == "RZ") return rotation(Axis::Z, -g.params.at(0));
  if (n == "P") return phase_p(-g.params.at(0));
  if (n == "E") return phase_e(-g.params.at(0));
  if (n == "RN")
    return rotation_general(g.params.at(0), g.params.at(1), g.params.at(2),
                            -g.params.at(3));
  return {"U", adjoint(g.matrix), {}};
}

/// Reversed step order with each gate replaced by its adjoint, so that
/// to_unitary(inverse(c)) * to_unitary(c) = I.
inline Circuit inverse(const Circuit& c) {
  Circuit inv;
  inv.n_wires = c.n_wires;
  for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it)
    inv.steps.push_back({adjoint_gate(it->gate), it->pattern});
  return inv;
}

namespace detail {

inline std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline std::vector<double> parse_args(const std::string& inside, int line) {
  std::vector<double> vals;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw ParseError(line, "empty numeric argument");
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(cur, &pos);
    } catch (const std::exception&) {
      throw ParseError(line, "bad number: " + cur);
    }
    if (pos != cur.size()) throw ParseError(line, "bad number: " + cur);
    vals.push_back(v);
    cur.clear();
  };
  for (char ch : inside) {
    if (ch == ',' || ch == ';')
      flush();
    else
      cur += ch;
  }
  flush();
  return vals;
}

inline GateSpec gate_from_name(const std::string& head, int line) {
  std::string name = head;
  std::vector<double> args;
  const auto paren = head.find('(');
  if (paren != std::string::npos) {
    if (head.back() != ')') throw ParseError(line, "unterminated argument list");
    name = head.substr(0, paren);
    args = parse_args(head.substr(paren + 1, head.size() - paren - 2), line);
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw ParseError(line, name + ": expected " + std::to_string(n) +
                                 " argument(s)");
  };
  if (name == "X") { need(0); return pauli(Pauli::X); }
  if (name == "Y") { need(0); return pauli(Pauli::Y); }
  if (name == "Z") { need(0); return pauli(Pauli::Z); }
  if (name == "H") { need(0); return hadamard(); }
  if (name == "S") { need(0); return phase_s(); }
  if (name == "T") { need(0); return t_gate(); }
  if (name == "SDG") { need(0); return sdg_gate(); }
  if (name == "TDG") { need(0); return tdg_gate(); }
  if (name == "RX") { need(1); return rotation(Axis::X, args[0]); }
  if (name == "RY") { need(1); return rotation(Axis::Y, args[0]); }
  if (name == "RZ") { need(1); return rotation(Axis::Z, args[0]); }
  if (name == "P") { need(1); return phase_p(args[0]); }
  if (name == "E") { need(1); return phase_e(args[0]); }
  if (name == "CNOT" || name == "TOFFOLI") {
    need(0);
    GateSpec g = pauli(Pauli::X);
    g.name = name;
    return g;
  }
  if (name == "SWAP") { need(0); return swap_gate(); }
  if (name == "U") {
    // Row-major complex entries as re,im pairs separated by ';'.
    if (args.size() % 2 != 0)
      throw ParseError(line, "U: need re,im pairs");
    const std::size_t n_entries = args.size() / 2;
    std::size_t dim = 1;
    while (dim * dim < n_entries) dim <<= 1;
    if (dim * dim != n_entries || dim < 2)
      throw ParseError(line, "U: entry count must be a square of a power of 2");
    CMatrix m(dim, dim);
    for (std::size_t i = 0; i < n_entries; ++i)
      m.a[i] = cplx(args[2 * i], args[2 * i + 1]);
    return {"U", m, {}};
  }
  throw ParseError(line, "unknown gate: " + name);
}

}  // namespace detail

/// Parses the line-oriented circuit format: a `wires N` header, then one
/// step per line as `NAME[(args)] [c+W|c-W ...] T1 [T2 ...]`, with `#`
/// starting a comment.
inline Circuit parse_circuit(const std::string& text) {
  Circuit c;
  bool have_header = false;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = (hash == std::string::npos) ? raw : raw.substr(0, hash);
    const auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (!have_header) {
      if (toks.size() != 2 || toks[0] != "wires")
        throw ParseError(line_no, "expected header: wires N");
      try {
        c.n_wires = std::stoi(toks[1]);
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad wire count: " + toks[1]);
      }
      // format-level cap; simulation additionally bounds the register width
      if (c.n_wires < 1 || c.n_wires > 4096)
        throw ParseError(line_no, "wire count out of range");
      have_header = true;
      continue;
    }
    GateSpec gate = detail::gate_from_name(toks[0], line_no);
    ControlPattern pat;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      const std::string& t = toks[i];
      if (t.size() > 2 && t[0] == 'c' && (t[1] == '+' || t[1] == '-')) {
        int w;
        try {
          w = std::stoi(t.substr(2));
        } catch (const std::exception&) {
          throw ParseError(line_no, "bad control: " + t);
        }
        pat.control_wires.push_back(w);
        pat.condition_bits.push_back(t[1] == '+' ? 1 : 0);
      } else {
        int w;
        try {
          w = std::stoi(t);
        } catch (const std::exception&) {
          throw ParseError(line_no, "bad wire: " + t);
        }
        pat.target_wires.push_back(w);
      }
    }
    if (gate.name == "CNOT" && pat.control_wires.size() != 1)
      throw ParseError(line_no, "CNOT: exactly one control required");
    if (gate.name == "TOFFOLI" && pat.control_wires.size() != 2)
      throw ParseError(line_no, "TOFFOLI: exactly two controls required");
    try {
      detail::validate_pattern(pat, gate.arity(), c.n_wires);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    c.steps.push_back({std::move(gate), std::move(pat)});
  }
  if (!have_header) throw ParseError(line_no, "missing wires header");
  return c;
}

/// Canonical text for a circuit; emit(parse(t)) is a fixed point.
inline std::string emit_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "wires " << c.n_wires << "\n";
  for (const auto& s : c.steps) {
    os << s.gate.name;
    if (s.gate.name == "U") {
      os << '(';
      for (std::size_t i = 0; i < s.gate.matrix.a.size(); ++i) {
        if (i) os << ';';
        os << detail::fmt12(s.gate.matrix.a[i].real()) << ','
           << detail::fmt12(s.gate.matrix.a[i].imag());
      }
      os << ')';
    } else if (!s.gate.params.empty() &&
               (s.gate.name == "RX" || s.gate.name == "RY" ||
                s.gate.name == "RZ" || s.gate.name == "P" ||
                s.gate.name == "E")) {
      os << '(' << detail::fmt12(s.gate.params[0]) << ')';
    }
    // Controls sorted by wire for a stable canonical form.
    std::vector<std::pair<int, int>> ctl;
    for (std::size_t i = 0; i < s.pattern.control_wires.size(); ++i)
      ctl.emplace_back(s.pattern.control_wires[i], s.pattern.condition_bits[i]);
    std::sort(ctl.begin(), ctl.end());
    for (const auto& [w, b] : ctl) os << " c" << (b ? '+' : '-') << w;
    for (int t : s.pattern.target_wires) os << ' ' << t;
    os << "\n";
  }
  return os.str();
}

/// True when the step is in the elementary basis: an uncontrolled
/// single-qubit gate, or an X conditioned on exactly one wire being 1.
inline bool is_elementary_step(const Step& s) {
  if (s.gate.arity() != 1) return false;
  if (s.pattern.control_wires.empty()) return true;
  if (s.pattern.control_wires.size() != 1) return false;
  if (s.pattern.condition_bits[0] != 1) return false;
  static const CMatrix x = pauli(Pauli::X).matrix;
  return max_abs_diff(s.gate.matrix, x) == 0.0;
}

}  // namespace qcs
