#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qcs/error.hpp"
#include "qcs/rng.hpp"

namespace qcs {

/// Tape-end blank. Never a legal input symbol; '#' is the interior
/// separator for tuple inputs and is an ordinary tape symbol.
constexpr char kBlank = '_';
constexpr char kSeparator = '#';

/// One instruction q S S' q' M: in state q scanning S, write S', enter q',
/// move left or right.
struct Quintuple {
  std::string state;
  char read = kBlank;
  char write = kBlank;
  std::string next;
  char move = 'R';  // 'L' or 'R'
};

struct TuringMachine {
  std::set<char> input_alphabet;   // Sigma; excludes the blank
  std::set<char> tape_alphabet;    // Gamma; includes blank and any markers
  std::set<std::string> states;    // Q
  std::set<std::string> halting;   // Q_h, disjoint from Q
  std::string start;
  std::vector<Quintuple> program;

  /// No two instructions share (state, scanned symbol).
  bool deterministic() const {
    std::set<std::pair<std::string, char>> seen;
    for (const auto& q : program)
      if (!seen.emplace(q.state, q.read).second) return false;
    return true;
  }
};

inline void validate(const TuringMachine& m) {
  if (m.input_alphabet.count(kBlank))
    throw std::invalid_argument("turing machine: blank cannot be an input symbol");
  for (char s : m.input_alphabet)
    if (!m.tape_alphabet.count(s))
      throw std::invalid_argument("turing machine: input alphabet not within tape alphabet");
  if (!m.tape_alphabet.count(kBlank))
    throw std::invalid_argument("turing machine: tape alphabet must contain the blank");
  for (const auto& q : m.states)
    if (m.halting.count(q))
      throw std::invalid_argument("turing machine: halting states must be disjoint from machine states");
  if (!m.states.count(m.start))
    throw std::invalid_argument("turing machine: start state not a machine state");
  for (const auto& q : m.program) {
    if (!m.states.count(q.state))
      throw std::invalid_argument("turing machine: instruction from unknown or halting state " + q.state);
    if (!m.states.count(q.next) && !m.halting.count(q.next))
      throw std::invalid_argument("turing machine: instruction into unknown state " + q.next);
    if (!m.tape_alphabet.count(q.read) || !m.tape_alphabet.count(q.write))
      throw std::invalid_argument("turing machine: instruction uses symbol outside tape alphabet");
    if (q.move != 'L' && q.move != 'R')
      throw std::invalid_argument("turing machine: move must be L or R");
  }
}

/// Instantaneous description: tape split at the head, machine state, and
/// the step/cell counters. The head scans right.front(), so the right part
/// is always non-empty.
struct Configuration {
  std::deque<char> left;
  std::deque<char> right;
  std::string state;
  long steps = 0;
  long head_pos = 0;
  long min_pos = 0;
  long max_pos = 0;

  char scanned() const { return right.front(); }
  long max_cells() const { return max_pos - min_pos + 1; }

  std::string tape() const {
    std::string s(left.begin(), left.end());
    s.append(right.begin(), right.end());
    return s;
  }

  /// Tape expression with the state token inserted left of the scanned
  /// symbol, e.g. "11 q1 11".
  std::string describe() const {
    std::string s(left.begin(), left.end());
    s += ' ';
    s += state;
    s += ' ';
    s.append(right.begin(), right.end());
    return s;
  }
};

inline Configuration initial_configuration(const TuringMachine& m,
                                           const std::string& input) {
  Configuration c;
  c.state = m.start;
  for (char ch : input) c.right.push_back(ch);
  if (c.right.empty()) c.right.push_back(kBlank);
  return c;
}

enum class TerminalKind { None, Halted, Stuck };

inline std::vector<const Quintuple*> matching_rules(const TuringMachine& m,
                                                    const Configuration& c) {
  std::vector<const Quintuple*> rules;
  for (const auto& q : m.program)
    if (q.state == c.state && q.read == c.scanned()) rules.push_back(&q);
  return rules;
}

inline TerminalKind classify(const TuringMachine& m, const Configuration& c) {
  if (m.halting.count(c.state)) return TerminalKind::Halted;
  if (matching_rules(m, c).empty()) return TerminalKind::Stuck;
  return TerminalKind::None;
}

namespace detail {

// The four rewrite rules: print, move, and insert a blank when the head
// walks off either end of the written tape.
inline void apply_rule(Configuration& c, const Quintuple& r) {
  c.right.front() = r.write;
  if (r.move == 'R') {
    c.left.push_back(c.right.front());
    c.right.pop_front();
    if (c.right.empty()) c.right.push_back(kBlank);
    ++c.head_pos;
  } else {
    if (c.left.empty()) {
      c.right.push_front(kBlank);
    } else {
      c.right.push_front(c.left.back());
      c.left.pop_back();
    }
    --c.head_pos;
  }
  c.min_pos = std::min(c.min_pos, c.head_pos);
  c.max_pos = std::max(c.max_pos, c.head_pos);
  c.state = r.next;
  ++c.steps;
}

}  // namespace detail

/// Applies one computation step of a deterministic machine; returns the
/// terminal kind instead when no rewrite applies.
inline TerminalKind step(const TuringMachine& m, Configuration& c) {
  if (!m.deterministic())
    throw std::invalid_argument("step: machine is nondeterministic");
  const TerminalKind t = classify(m, c);
  if (t != TerminalKind::None) return t;
  detail::apply_rule(c, *matching_rules(m, c).front());
  return TerminalKind::None;
}

enum class RunStatus { Halted, Stuck, FuelExhausted };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Halted: return "halted";
    case RunStatus::Stuck: return "stuck";
    default: return "fuel_exhausted";
  }
}

struct RunResult {
  RunStatus status = RunStatus::FuelExhausted;
  Configuration config;
};

/// Runs a deterministic machine until it terminates or `fuel` steps have
/// been spent. Fuel exhaustion is an ordinary outcome, not an error.
inline RunResult run(const TuringMachine& m, const std::string& input,
                     long fuel) {
  validate(m);
  if (!m.deterministic())
    throw std::invalid_argument("run: machine is nondeterministic");
  RunResult res;
  res.config = initial_configuration(m, input);
  while (res.config.steps < fuel) {
    const TerminalKind t = classify(m, res.config);
    if (t == TerminalKind::Halted) {
      res.status = RunStatus::Halted;
      return res;
    }
    if (t == TerminalKind::Stuck) {
      res.status = RunStatus::Stuck;
      return res;
    }
    detail::apply_rule(res.config, *matching_rules(m, res.config).front());
  }
  const TerminalKind t = classify(m, res.config);
  res.status = t == TerminalKind::Halted  ? RunStatus::Halted
               : t == TerminalKind::Stuck ? RunStatus::Stuck
                                          : RunStatus::FuelExhausted;
  return res;
}

/// Unary numeral: n is written as n+1 ones, tuples joined with '#'.
inline std::string encode_unary(const std::vector<std::uint64_t>& tuple) {
  std::string s;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) s += kSeparator;
    s.append(tuple[i] + 1, '1');
  }
  return s;
}

/// Lenient readout: count the ones, ignoring separators and blanks.
inline std::uint64_t decode_unary(const std::string& tape) {
  std::uint64_t ones = 0;
  for (char ch : tape) {
    if (ch == '1')
      ++ones;
    else if (ch != kSeparator && ch != kBlank)
      throw std::invalid_argument("decode_unary: unexpected symbol on tape");
  }
  if (ones == 0) throw std::invalid_argument("decode_unary: no numeral on tape");
  return ones - 1;
}

/// Strict readout: exactly one consecutive block of ones on an otherwise
/// blank tape.
inline std::uint64_t decode_unary_strict(const std::string& tape) {
  std::size_t i = 0;
  while (i < tape.size() && tape[i] == kBlank) ++i;
  std::size_t j = i;
  while (j < tape.size() && tape[j] == '1') ++j;
  std::size_t k = j;
  while (k < tape.size() && tape[k] == kBlank) ++k;
  if (i == j || k != tape.size())
    throw std::invalid_argument(
        "decode_unary_strict: tape is not a single block of ones");
  return (j - i) - 1;
}

inline std::vector<std::uint64_t> decode_unary_tuple(const std::string& tape) {
  std::vector<std::uint64_t> out;
  std::string block;
  auto flush = [&] {
    out.push_back(decode_unary_strict(block));
    block.clear();
  };
  for (char ch : tape) {
    if (ch == kSeparator)
      flush();
    else
      block += ch;
  }
  flush();
  return out;
}

/// Halting while scanning the leftmost 1 of one block of ones on an
/// otherwise blank tape.
inline bool is_standard_terminal(const TuringMachine& m,
                                 const Configuration& c) {
  if (!m.halting.count(c.state)) return false;
  for (char ch : c.left)
    if (ch != kBlank) return false;
  std::size_t i = 0;
  while (i < c.right.size() && c.right[i] == '1') ++i;
  if (i == 0) return false;
  for (std::size_t j = i; j < c.right.size(); ++j)
    if (c.right[j] != kBlank) return false;
  return true;
}

enum class DecideResult { Yes, No, FuelExhausted };

/// Decider semantics: the machine must carry exactly the two named halting
/// states; the word must be over the input alphabet.
inline DecideResult decide(const TuringMachine& m, const std::string& word,
                           long fuel, const std::string& yes_state = "qy",
                           const std::string& no_state = "qn") {
  if (m.halting != std::set<std::string>{yes_state, no_state})
    throw std::invalid_argument("decide: machine must halt in exactly {" +
                                yes_state + ", " + no_state + "}");
  for (char ch : word)
    if (!m.input_alphabet.count(ch))
      throw std::invalid_argument("decide: word contains non-input symbol");
  const RunResult r = run(m, word, fuel);
  if (r.status == RunStatus::FuelExhausted) return DecideResult::FuelExhausted;
  if (r.status == RunStatus::Stuck)
    throw std::runtime_error("decide: machine got stuck in a working state");
  return r.config.state == yes_state ? DecideResult::Yes : DecideResult::No;
}

/// Breadth-first exploration of a nondeterministic computation tree.
struct NondetReport {
  bool accepted = false;
  long accept_depth = -1;
  long accepting_paths = 0;
  std::vector<std::size_t> frontier_sizes;  // tree nodes per depth, depth 0 first
  std::optional<Configuration> first_halted;
  std::size_t nodes_explored = 0;
};

/// Explores the configuration tree level by level up to `fuel` steps deep.
/// Accepts when any branch reaches `accept_state`. Deduplication of repeated
/// configurations is optional and off by default since it changes the
/// reported frontier sizes.
inline NondetReport run_nondet(const TuringMachine& m, const std::string& input,
                               long fuel,
                               const std::string& accept_state = "qy",
                               bool dedup = false,
                               std::size_t max_nodes = 1000000) {
  validate(m);
  NondetReport rep;
  std::vector<Configuration> frontier{initial_configuration(m, input)};
  std::set<std::string> visited;
  auto key = [](const Configuration& c) { return c.describe(); };
  if (dedup) visited.insert(key(frontier.front()));

  for (long depth = 0; depth <= fuel && !frontier.empty(); ++depth) {
    rep.frontier_sizes.push_back(frontier.size());
    rep.nodes_explored += frontier.size();
    if (rep.nodes_explored > max_nodes)
      throw std::runtime_error("run_nondet: exploration budget exceeded");
    std::vector<Configuration> next;
    for (const auto& c : frontier) {
      const TerminalKind t = classify(m, c);
      if (t == TerminalKind::Halted) {
        if (!rep.first_halted) rep.first_halted = c;
        if (c.state == accept_state) {
          ++rep.accepting_paths;
          if (!rep.accepted) {
            rep.accepted = true;
            rep.accept_depth = depth;
          }
        }
        continue;
      }
      if (t == TerminalKind::Stuck || depth == fuel) continue;
      for (const Quintuple* r : matching_rules(m, c)) {
        Configuration child = c;
        detail::apply_rule(child, *r);
        if (dedup && !visited.insert(key(child)).second) continue;
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  return rep;
}

/// Instruction set with branch weights; for each (state, symbol) pair that
/// has any outgoing weight the weights must sum to 1.
struct ProbabilisticMachine {
  TuringMachine base;
  std::vector<double> weights;  // parallel to base.program
};

inline void validate(const ProbabilisticMachine& pm) {
  validate(pm.base);
  if (pm.weights.size() != pm.base.program.size())
    throw std::invalid_argument("probabilistic machine: weight count mismatch");
  std::map<std::pair<std::string, char>, double> sums;
  for (std::size_t i = 0; i < pm.weights.size(); ++i) {
    if (pm.weights[i] < 0.0 || pm.weights[i] > 1.0)
      throw std::invalid_argument("probabilistic machine: weight outside [0,1]");
    sums[{pm.base.program[i].state, pm.base.program[i].read}] += pm.weights[i];
  }
  for (const auto& [k, s] : sums)
    if (std::abs(s - 1.0) > 1e-9)
      throw std::invalid_argument(
          "probabilistic machine: outgoing weights for (" + k.first + ", " +
          std::string(1, k.second) + ") sum to " + std::to_string(s));
}

struct ProbTraceStep {
  Quintuple rule;
  double weight = 1.0;
};

struct ProbRunResult {
  RunStatus status = RunStatus::FuelExhausted;
  Configuration config;
  double path_probability = 1.0;
  std::vector<ProbTraceStep> trace;
};

/// Samples one execution path: at each step the applicable instructions are
/// drawn by weight, and the path probability is the product of the chosen
/// weights. Deterministic for a fixed seed.
inline ProbRunResult run_prob(const ProbabilisticMachine& pm,
                              const std::string& input, long fuel,
                              std::uint64_t seed) {
  validate(pm);
  Rng rng(seed);
  ProbRunResult res;
  res.config = initial_configuration(pm.base, input);
  while (res.config.steps < fuel) {
    if (pm.base.halting.count(res.config.state)) {
      res.status = RunStatus::Halted;
      return res;
    }
    std::vector<std::size_t> choices;
    for (std::size_t i = 0; i < pm.base.program.size(); ++i)
      if (pm.base.program[i].state == res.config.state &&
          pm.base.program[i].read == res.config.scanned() &&
          pm.weights[i] > 0.0)
        choices.push_back(i);
    if (choices.empty()) {
      res.status = RunStatus::Stuck;
      return res;
    }
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = choices.back();
    for (std::size_t i : choices) {
      acc += pm.weights[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    res.path_probability *= pm.weights[pick];
    res.trace.push_back({pm.base.program[pick], pm.weights[pick]});
    detail::apply_rule(res.config, pm.base.program[pick]);
  }
  res.status = pm.base.halting.count(res.config.state)
                   ? RunStatus::Halted
                   : RunStatus::FuelExhausted;
  return res;
}

/// Program text: header lines `states`, `halting`, `start`, `alphabet`,
/// then one quintuple per line `q S S' q' M` with an optional trailing
/// weight. Symbols are single characters; `_` is the blank. Lines whose
/// first token starts with `#` are comments ('#' is also a tape symbol, so
/// only whole-line comments exist).
inline ProbabilisticMachine parse_tm_text(const std::string& text) {
  ProbabilisticMachine pm;
  TuringMachine& m = pm.base;
  m.tape_alphabet.insert(kBlank);
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  bool any_weight = false;
  while (std::getline(is, raw)) {
    ++line_no;
    std::istringstream ls(raw);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty() || toks[0][0] == '#') continue;
    const std::string& head = toks[0];
    auto rest_states = [&](std::set<std::string>& into) {
      if (toks.size() < 2) throw ParseError(line_no, head + ": expected names");
      for (std::size_t i = 1; i < toks.size(); ++i) into.insert(toks[i]);
    };
    if (head == "states") {
      rest_states(m.states);
    } else if (head == "halting") {
      rest_states(m.halting);
    } else if (head == "start") {
      if (toks.size() != 2) throw ParseError(line_no, "start: expected one name");
      m.start = toks[1];
    } else if (head == "alphabet") {
      if (toks.size() < 2) throw ParseError(line_no, "alphabet: expected symbols");
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (toks[i].size() != 1)
          throw ParseError(line_no, "alphabet: symbols are single characters");
        m.input_alphabet.insert(toks[i][0]);
        m.tape_alphabet.insert(toks[i][0]);
      }
    } else {
      if (toks.size() != 5 && toks.size() != 6)
        throw ParseError(line_no, "expected quintuple: q S S' q' M [weight]");
      if (toks[1].size() != 1 || toks[2].size() != 1)
        throw ParseError(line_no, "tape symbols are single characters");
      if (toks[4] != "L" && toks[4] != "R")
        throw ParseError(line_no, "move must be L or R");
      Quintuple q;
      q.state = toks[0];
      q.read = toks[1][0];
      q.write = toks[2][0];
      q.next = toks[3];
      q.move = toks[4][0];
      m.tape_alphabet.insert(q.read);
      m.tape_alphabet.insert(q.write);
      double w = 1.0;
      if (toks.size() == 6) {
        any_weight = true;
        try {
          w = std::stod(toks[5]);
        } catch (const std::exception&) {
          throw ParseError(line_no, "bad weight: " + toks[5]);
        }
      }
      m.program.push_back(q);
      pm.weights.push_back(w);
    }
  }
  if (m.start.empty()) throw ParseError(line_no, "missing start header");
  try {
    validate(m);
    if (any_weight) validate(pm);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
  return pm;
}

inline TuringMachine parse_tm(const std::string& text) {
  return parse_tm_text(text).base;
}

/// Universal-machine contract: run the described machine on the input.
inline RunResult interpret(const std::string& description,
                           const std::string& input, long fuel) {
  return run(parse_tm(description), input, fuel);
}

}  // namespace qcs
