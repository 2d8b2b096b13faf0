#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qcs/error.hpp"
#include "qcs/linalg.hpp"

namespace qcs {

enum class BoolOp {
  Input,
  And,
  Or,
  Xor,
  Nand,
  Not,
  Fanout,
  Const0,
  Const1
};

/// One node of a feed-forward logic network; operand indices point at
/// earlier nodes, which keeps the wiring acyclic by construction.
struct BoolNode {
  BoolOp op = BoolOp::Input;
  int a = -1;
  int b = -1;
};

struct BoolCircuit {
  int n_in = 0;
  int n_out = 0;
  std::vector<BoolNode> nodes;  // nodes[0..n_in) are the inputs
  std::vector<int> outputs;     // node index per output bit
};

inline void validate(const BoolCircuit& c) {
  if (c.n_in < 0 || c.n_out < 1)
    throw std::invalid_argument("bool circuit: bad arity");
  if (static_cast<int>(c.nodes.size()) < c.n_in)
    throw std::invalid_argument("bool circuit: missing input nodes");
  for (int i = 0; i < c.n_in; ++i)
    if (c.nodes[i].op != BoolOp::Input)
      throw std::invalid_argument("bool circuit: first nodes must be inputs");
  for (std::size_t i = c.n_in; i < c.nodes.size(); ++i) {
    const BoolNode& nd = c.nodes[i];
    const bool binary = nd.op == BoolOp::And || nd.op == BoolOp::Or ||
                        nd.op == BoolOp::Xor || nd.op == BoolOp::Nand;
    const bool unary = nd.op == BoolOp::Not || nd.op == BoolOp::Fanout;
    if (nd.op == BoolOp::Input)
      throw std::invalid_argument("bool circuit: stray input node");
    if (binary || unary) {
      if (nd.a < 0 || nd.a >= static_cast<int>(i))
        throw std::invalid_argument("bool circuit: forward reference");
      if (binary && (nd.b < 0 || nd.b >= static_cast<int>(i)))
        throw std::invalid_argument("bool circuit: forward reference");
    }
  }
  if (static_cast<int>(c.outputs.size()) != c.n_out)
    throw std::invalid_argument("bool circuit: output count mismatch");
  for (int o : c.outputs)
    if (o < 0 || o >= static_cast<int>(c.nodes.size()))
      throw std::invalid_argument("bool circuit: output out of range");
}

/// Gate-by-gate evaluation on a bit string of length n_in.
inline std::vector<int> eval_bool(const BoolCircuit& c,
                                  const std::vector<int>& input) {
  validate(c);
  if (static_cast<int>(input.size()) != c.n_in)
    throw std::invalid_argument("eval_bool: input length mismatch");
  std::vector<int> val(c.nodes.size(), 0);
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const BoolNode& nd = c.nodes[i];
    switch (nd.op) {
      case BoolOp::Input: val[i] = input[i] ? 1 : 0; break;
      case BoolOp::And: val[i] = val[nd.a] & val[nd.b]; break;
      case BoolOp::Or: val[i] = val[nd.a] | val[nd.b]; break;
      case BoolOp::Xor: val[i] = val[nd.a] ^ val[nd.b]; break;
      case BoolOp::Nand: val[i] = 1 - (val[nd.a] & val[nd.b]); break;
      case BoolOp::Not: val[i] = 1 - val[nd.a]; break;
      case BoolOp::Fanout: val[i] = val[nd.a]; break;
      case BoolOp::Const0: val[i] = 0; break;
      case BoolOp::Const1: val[i] = 1; break;
    }
  }
  std::vector<int> out(c.n_out);
  for (int j = 0; j < c.n_out; ++j) out[j] = val[c.outputs[j]];
  return out;
}

/// Truth table of f:{0,1}^k -> {0,1}^l; rows[x] packs the output bits with
/// output 0 as the most significant bit, row index x likewise input 0 first.
struct TruthTable {
  int n_in = 0;
  int n_out = 0;
  std::vector<std::uint32_t> rows;
};

inline int table_bit(const TruthTable& t, std::size_t x, int out_j) {
  return static_cast<int>((t.rows[x] >> (t.n_out - 1 - out_j)) & 1u);
}

namespace detail {

// Induction over inputs: a 1-bit table is a wire, a NOT, or a constant via
// an ancilla gate; otherwise split on the leading input and recombine as
// (x and f_on) xor (not x and f_off).
inline int build_single_output(BoolCircuit& c, const std::vector<int>& bits,
                               const std::vector<int>& inputs) {
  auto add = [&](BoolOp op, int a = -1, int b = -1) {
    c.nodes.push_back({op, a, b});
    return static_cast<int>(c.nodes.size()) - 1;
  };
  if (inputs.empty()) return add(bits[0] ? BoolOp::Const1 : BoolOp::Const0);
  if (inputs.size() == 1) {
    const int w = inputs[0];
    if (bits[0] == 0 && bits[1] == 1) return w;
    if (bits[0] == 1 && bits[1] == 0) return add(BoolOp::Not, w);
    if (bits[0] == 0 && bits[1] == 0)
      return add(BoolOp::And, w, add(BoolOp::Const0));
    return add(BoolOp::Or, w, add(BoolOp::Const1));
  }
  const std::size_t half = bits.size() / 2;
  const std::vector<int> rest(inputs.begin() + 1, inputs.end());
  const std::vector<int> off(bits.begin(), bits.begin() + half);
  const std::vector<int> on(bits.begin() + half, bits.end());
  const int n_off = build_single_output(c, off, rest);
  const int n_on = build_single_output(c, on, rest);
  const int x = inputs[0];
  const int lhs = add(BoolOp::And, x, n_on);
  const int rhs = add(BoolOp::And, add(BoolOp::Not, x), n_off);
  return add(BoolOp::Xor, lhs, rhs);
}

}  // namespace detail

/// Circuit computing an arbitrary truth table, one induction per output bit.
inline BoolCircuit synthesize_bool(const TruthTable& t) {
  if (t.n_in < 0 || t.n_in > 12)
    throw std::invalid_argument("synthesize_bool: supported input arity is 0..12");
  if (t.n_out < 1 || t.n_out > 30)
    throw std::invalid_argument("synthesize_bool: bad output arity");
  if (t.rows.size() != (std::size_t{1} << t.n_in))
    throw std::invalid_argument("synthesize_bool: table size mismatch");
  BoolCircuit c;
  c.n_in = t.n_in;
  c.n_out = t.n_out;
  for (int i = 0; i < t.n_in; ++i) c.nodes.push_back({BoolOp::Input, -1, -1});
  std::vector<int> inputs(t.n_in);
  for (int i = 0; i < t.n_in; ++i) inputs[i] = i;
  for (int j = 0; j < t.n_out; ++j) {
    std::vector<int> bits(t.rows.size());
    for (std::size_t x = 0; x < t.rows.size(); ++x) bits[x] = table_bit(t, x, j);
    c.outputs.push_back(detail::build_single_output(c, bits, inputs));
  }
  validate(c);
  return c;
}

/// Rewrites OR through its NAND/NOT equivalent so the reversible lowering
/// only ever meets NAND, AND, XOR, NOT, FANOUT and constants.
inline BoolCircuit rewrite_or_free(const BoolCircuit& in) {
  validate(in);
  BoolCircuit out;
  out.n_in = in.n_in;
  out.n_out = in.n_out;
  std::vector<int> remap(in.nodes.size());
  for (std::size_t i = 0; i < in.nodes.size(); ++i) {
    const BoolNode& nd = in.nodes[i];
    if (nd.op != BoolOp::Or) {
      BoolNode copy = nd;
      if (copy.a >= 0) copy.a = remap[copy.a];
      if (copy.b >= 0) copy.b = remap[copy.b];
      out.nodes.push_back(copy);
      remap[i] = static_cast<int>(out.nodes.size()) - 1;
      continue;
    }
    const int na = static_cast<int>(out.nodes.size());
    out.nodes.push_back({BoolOp::Not, remap[nd.a], -1});
    const int nb = na + 1;
    out.nodes.push_back({BoolOp::Not, remap[nd.b], -1});
    out.nodes.push_back({BoolOp::Nand, na, nb});
    remap[i] = nb + 1;
  }
  for (int o : in.outputs) out.outputs.push_back(remap[o]);
  return out;
}

enum class RevOp { Not, Cnot, Toffoli };

/// One reversible step; a, b are control wires (unused fields stay -1) and
/// t is the target wire. Every step is a self-inverse bijection on bits.
struct RevStep {
  RevOp op;
  int a = -1;
  int b = -1;
  int t = -1;
};

/// Wire map of a lowered circuit: data register x, work ancillas, the input
/// copy register, and the output register y.
struct RevLayout {
  int x_begin = 0, x_count = 0;
  int anc_begin = 0, anc_count = 0;
  int copy_begin = 0, copy_count = 0;
  int y_begin = 0, y_count = 0;
};

struct RevCircuit {
  int width = 0;
  std::vector<RevStep> steps;
  RevLayout layout;
};

inline std::vector<int> eval_reversible(const RevCircuit& c,
                                        std::vector<int> bits) {
  if (static_cast<int>(bits.size()) != c.width)
    throw std::invalid_argument("eval_reversible: width mismatch");
  for (const auto& s : c.steps) {
    switch (s.op) {
      case RevOp::Not: bits[s.t] ^= 1; break;
      case RevOp::Cnot: bits[s.t] ^= bits[s.a]; break;
      case RevOp::Toffoli: bits[s.t] ^= bits[s.a] & bits[s.b]; break;
    }
  }
  return bits;
}

inline RevCircuit mirror(const RevCircuit& c) {
  RevCircuit m = c;
  std::reverse(m.steps.begin(), m.steps.end());
  return m;
}

/// Controlled swap of wires x and y on control c, written with the
/// CNOT/Toffoli basis: CNOT(y->x), Toffoli(c,x -> y), CNOT(y->x).
inline std::vector<RevStep> fredkin_steps(int control, int x, int y) {
  return {{RevOp::Cnot, y, -1, x},
          {RevOp::Toffoli, control, x, y},
          {RevOp::Cnot, y, -1, x}};
}

/// Lowers a logic network to NOT/CNOT/TOFFOLI over the register layout
/// (x, ancilla, copy, y). The forward segment copies x, computes every node
/// into a fresh ancilla, CNOTs the results onto y, and is then replayed in
/// reverse so ancilla and copy end at zero:
///   (x, 0.., 0.., y) -> (x, 0.., 0.., y xor f(x)).
/// Step count is linear in the node count: at most 4 per node after OR
/// expansion, plus 2 n_in copy pairs and n_out output taps.
inline RevCircuit to_reversible(const BoolCircuit& in) {
  const BoolCircuit c = rewrite_or_free(in);

  // One ancilla per non-input node, in node order.
  std::vector<int> anc_index(c.nodes.size(), -1);
  int n_anc = 0;
  for (std::size_t i = c.n_in; i < c.nodes.size(); ++i)
    anc_index[i] = n_anc++;

  RevCircuit rc;
  RevLayout& lay = rc.layout;
  lay.x_begin = 0;
  lay.x_count = c.n_in;
  lay.anc_begin = c.n_in;
  lay.anc_count = n_anc;
  lay.copy_begin = c.n_in + n_anc;
  lay.copy_count = c.n_in;
  lay.y_begin = lay.copy_begin + c.n_in;
  lay.y_count = c.n_out;
  rc.width = lay.y_begin + c.n_out;

  auto wire_of = [&](int node) {
    return node < c.n_in ? lay.copy_begin + node : lay.anc_begin + anc_index[node];
  };

  std::vector<RevStep> forward;
  for (int i = 0; i < c.n_in; ++i)
    forward.push_back({RevOp::Cnot, lay.x_begin + i, -1, lay.copy_begin + i});
  for (std::size_t i = c.n_in; i < c.nodes.size(); ++i) {
    const BoolNode& nd = c.nodes[i];
    const int t = lay.anc_begin + anc_index[i];
    switch (nd.op) {
      case BoolOp::And:
        forward.push_back({RevOp::Toffoli, wire_of(nd.a), wire_of(nd.b), t});
        break;
      case BoolOp::Nand:
        forward.push_back({RevOp::Not, -1, -1, t});
        forward.push_back({RevOp::Toffoli, wire_of(nd.a), wire_of(nd.b), t});
        break;
      case BoolOp::Xor:
        forward.push_back({RevOp::Cnot, wire_of(nd.a), -1, t});
        forward.push_back({RevOp::Cnot, wire_of(nd.b), -1, t});
        break;
      case BoolOp::Not:
        forward.push_back({RevOp::Cnot, wire_of(nd.a), -1, t});
        forward.push_back({RevOp::Not, -1, -1, t});
        break;
      case BoolOp::Fanout:
        forward.push_back({RevOp::Cnot, wire_of(nd.a), -1, t});
        break;
      case BoolOp::Const0:
        break;
      case BoolOp::Const1:
        forward.push_back({RevOp::Not, -1, -1, t});
        break;
      default:
        throw std::logic_error("to_reversible: unexpected node kind");
    }
  }

  rc.steps = forward;
  for (int j = 0; j < c.n_out; ++j)
    rc.steps.push_back(
        {RevOp::Cnot, wire_of(c.outputs[j]), -1, lay.y_begin + j});
  rc.steps.insert(rc.steps.end(), forward.rbegin(), forward.rend());
  return rc;
}

/// Permutation matrix of a bijective truth table: applying it to a basis
/// vector permutes basis states as the table does.
inline CMatrix classical_matrix(const TruthTable& t) {
  if (t.n_in != t.n_out)
    throw std::invalid_argument("classical_matrix: table must be square");
  const std::size_t dim = std::size_t{1} << t.n_in;
  std::vector<int> hit(dim, 0);
  for (std::size_t x = 0; x < dim; ++x) {
    if (t.rows[x] >= dim || hit[t.rows[x]]++)
      throw std::invalid_argument("classical_matrix: table not a bijection");
  }
  CMatrix m(dim, dim);
  for (std::size_t x = 0; x < dim; ++x) m(t.rows[x], x) = 1.0;
  return m;
}

/// Truth-table file: 2^k lines, each the output bit string for the input
/// whose binary code is the line number.
inline TruthTable parse_truth_table(const std::string& text) {
  std::istringstream is(text);
  std::string raw;
  TruthTable t;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = (hash == std::string::npos) ? raw : raw.substr(0, hash);
    std::string bits;
    for (char ch : line) {
      if (ch == '0' || ch == '1')
        bits += ch;
      else if (!std::isspace(static_cast<unsigned char>(ch)))
        throw ParseError(line_no, "unexpected character in truth table");
    }
    if (bits.empty()) continue;
    if (t.n_out == 0)
      t.n_out = static_cast<int>(bits.size());
    else if (static_cast<int>(bits.size()) != t.n_out)
      throw ParseError(line_no, "inconsistent output width");
    std::uint32_t row = 0;
    for (char ch : bits) row = (row << 1) | (ch == '1' ? 1u : 0u);
    t.rows.push_back(row);
  }
  if (t.rows.empty()) throw ParseError(line_no, "empty truth table");
  std::size_t n = t.rows.size();
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  if ((std::size_t{1} << k) != n)
    throw ParseError(line_no, "row count must be a power of two");
  t.n_in = k;
  return t;
}

inline std::string emit_truth_table(const TruthTable& t) {
  std::ostringstream os;
  for (std::size_t x = 0; x < t.rows.size(); ++x) {
    for (int j = 0; j < t.n_out; ++j) os << table_bit(t, x, j);
    os << "\n";
  }
  return os.str();
}

/// The reversible circuit in the shared gate text format (X, CNOT, TOFFOLI
/// on 1-based wires), loadable by the quantum-circuit parser.
inline std::string emit_reversible(const RevCircuit& c) {
  std::ostringstream os;
  os << "wires " << c.width << "\n";
  for (const auto& s : c.steps) {
    switch (s.op) {
      case RevOp::Not:
        os << "X " << s.t + 1 << "\n";
        break;
      case RevOp::Cnot:
        os << "CNOT c+" << s.a + 1 << " " << s.t + 1 << "\n";
        break;
      case RevOp::Toffoli:
        os << "TOFFOLI c+" << s.a + 1 << " c+" << s.b + 1 << " " << s.t + 1
           << "\n";
        break;
    }
  }
  return os.str();
}

}  // namespace qcs
