#include <fstream>
#include <set>

#include "helpers.hpp"

using namespace qcs;

namespace {

std::string sample_path(const std::string& name) {
  return std::string(QCS_SAMPLES_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

TuringMachine load(const std::string& name) {
  return parse_tm(slurp(sample_path(name)));
}

std::string trimmed(const Configuration& c) {
  std::string t = c.tape();
  const auto first = t.find_first_not_of('_');
  if (first == std::string::npos) return "";
  const auto last = t.find_last_not_of('_');
  return t.substr(first, last - first + 1);
}

}  // namespace

TEST_CASE("rewrite rules") {
  TuringMachine m;
  m.input_alphabet = {'a'};
  m.tape_alphabet = {'a', 'b', '_'};
  m.states = {"q1", "q2"};
  m.halting = {"qh"};
  m.start = "q1";

  SECTION("print and move right inside the tape") {
    m.program = {{"q1", 'a', 'b', "q2", 'R'}};
    Configuration c = initial_configuration(m, "aa");
    CHECK(step(m, c) == TerminalKind::None);
    CHECK(c.state == "q2");
    CHECK(c.tape() == "ba");
    CHECK(c.scanned() == 'a');
    CHECK(c.steps == 1);
  }
  SECTION("left move at the left end inserts a blank") {
    m.program = {{"q1", '_', 'b', "q2", 'L'}};
    Configuration c = initial_configuration(m, "");
    CHECK(step(m, c) == TerminalKind::None);
    CHECK(c.state == "q2");
    CHECK(c.scanned() == '_');
    CHECK(c.tape() == "_b");
  }
  SECTION("right move at the right end inserts a blank") {
    m.program = {{"q1", 'a', 'b', "q2", 'R'}};
    Configuration c = initial_configuration(m, "a");
    CHECK(step(m, c) == TerminalKind::None);
    CHECK(c.scanned() == '_');
    CHECK(c.tape() == "b_");
  }
  SECTION("halting states are terminal") {
    m.program = {{"q1", 'a', 'a', "qh", 'R'}};
    Configuration c = initial_configuration(m, "a");
    CHECK(step(m, c) == TerminalKind::None);
    CHECK(step(m, c) == TerminalKind::Halted);
    CHECK(c.steps == 1);
  }
  SECTION("nondeterministic machines are rejected by step") {
    m.program = {{"q1", 'a', 'a', "q2", 'R'}, {"q1", 'a', 'b', "q2", 'R'}};
    Configuration c = initial_configuration(m, "a");
    CHECK_THROWS_AS(step(m, c), std::invalid_argument);
  }
}

TEST_CASE("machine validation") {
  TuringMachine m;
  m.input_alphabet = {'_'};
  m.tape_alphabet = {'_'};
  m.states = {"q1"};
  m.start = "q1";
  CHECK_THROWS_AS(validate(m), std::invalid_argument);  // blank in Sigma

  TuringMachine out_of_halting;
  out_of_halting.input_alphabet = {'1'};
  out_of_halting.tape_alphabet = {'1', '_'};
  out_of_halting.states = {"q1"};
  out_of_halting.halting = {"qh"};
  out_of_halting.start = "q1";
  out_of_halting.program = {{"qh", '1', '1', "q1", 'R'}};
  CHECK_THROWS_AS(validate(out_of_halting), std::invalid_argument);
}

TEST_CASE("the successor machine") {
  const TuringMachine m = load("successor.tm");
  const RunResult r = run(m, "111", 100);
  CHECK(r.status == RunStatus::Halted);
  CHECK(trimmed(r.config) == "1111");
  // hand-traced counters: three rewrites over three distinct cells
  CHECK(r.config.steps == 3);
  CHECK(r.config.max_cells() == 3);
  CHECK(is_standard_terminal(m, r.config));
  CHECK(decode_unary_strict(r.config.tape()) == 3);

  for (std::uint64_t n = 0; n <= 8; ++n) {
    const RunResult s = run(m, encode_unary({n}), 100);
    REQUIRE(s.status == RunStatus::Halted);
    CHECK(decode_unary_strict(s.config.tape()) == n + 1);
    CHECK(is_standard_terminal(m, s.config));
  }
}

TEST_CASE("empty program terminates immediately") {
  TuringMachine m;
  m.input_alphabet = {'1'};
  m.tape_alphabet = {'1', '_'};
  m.states = {"q1"};
  m.halting = {"qh"};
  m.start = "q1";
  const RunResult r = run(m, "11", 10);
  CHECK(r.status == RunStatus::Stuck);  // q1 is not a halting state
  CHECK(r.config.steps == 0);
}

TEST_CASE("fuel exhaustion on the right-mover") {
  const RunResult r = run(load("mover.tm"), "1", 100);
  CHECK(r.status == RunStatus::FuelExhausted);
  CHECK(r.config.steps == 100);
}

TEST_CASE("unary numerals") {
  CHECK(encode_unary({3, 5}) == "1111#111111");
  CHECK(encode_unary({0}) == "1");
  CHECK(decode_unary("1111") == 3);
  CHECK(decode_unary("11#1") == 2);  // lenient: counts ones across blocks
  CHECK_THROWS_AS(decode_unary_strict("11#1"), std::invalid_argument);
  CHECK(decode_unary_strict("__111__") == 2);
  CHECK_THROWS_AS(decode_unary(""), std::invalid_argument);

  Rng rng(111);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::uint64_t> tuple(1 + rng.raw() % 4);
    for (auto& v : tuple) v = rng.raw() % 51;
    CHECK(decode_unary_tuple(encode_unary(tuple)) == tuple);
  }
}

TEST_CASE("unary addition machine") {
  const TuringMachine m = load("add.tm");
  for (std::uint64_t a = 0; a <= 8; ++a) {
    for (std::uint64_t b = 0; b <= 8; ++b) {
      const RunResult r = run(m, encode_unary({a, b}), 10000);
      REQUIRE(r.status == RunStatus::Halted);
      CHECK(is_standard_terminal(m, r.config));
      CHECK(decode_unary_strict(r.config.tape()) == a + b);
    }
  }
}

TEST_CASE("parity decider") {
  const TuringMachine m = load("parity.tm");
  CHECK(decide(m, "11", 1000) == DecideResult::Yes);
  CHECK(decide(m, "111", 1000) == DecideResult::No);
  CHECK(decide(m, "", 1000) == DecideResult::Yes);
  for (int len = 0; len <= 10; ++len) {
    const std::string w(len, '1');
    const DecideResult expect =
        len % 2 == 0 ? DecideResult::Yes : DecideResult::No;
    CHECK(decide(m, w, 1000) == expect);
  }
  CHECK_THROWS_AS(decide(m, "1x1", 1000), std::invalid_argument);
  CHECK_THROWS_AS(decide(load("successor.tm"), "11", 1000),
                  std::invalid_argument);
}

TEST_CASE("deterministic machines explore as a single path") {
  const TuringMachine m = load("parity.tm");
  const NondetReport rep = run_nondet(m, "1111", 100);
  for (std::size_t f : rep.frontier_sizes) CHECK(f == 1);
  CHECK(rep.accepted);
  const RunResult det = run(m, "1111", 100);
  REQUIRE(rep.first_halted.has_value());
  CHECK(rep.first_halted->steps == det.config.steps);
  CHECK(rep.first_halted->tape() == det.config.tape());
  CHECK(rep.first_halted->state == det.config.state);
}

TEST_CASE("a two-way branch doubles the frontier") {
  TuringMachine m;
  m.input_alphabet = {'a', 'b'};
  m.tape_alphabet = {'a', 'b', '_'};
  m.states = {"q1"};
  m.halting = {"qh"};
  m.start = "q1";
  m.program = {{"q1", '_', 'a', "qh", 'R'}, {"q1", '_', 'b', "qh", 'R'}};
  CHECK_FALSE(m.deterministic());
  const NondetReport rep = run_nondet(m, "", 5, "qh");
  REQUIRE(rep.frontier_sizes.size() >= 2);
  CHECK(rep.frontier_sizes[0] == 1);
  CHECK(rep.frontier_sizes[1] == 2);
  CHECK(rep.accepting_paths == 2);
}

TEST_CASE("branching accepter agrees with the decider") {
  const TuringMachine nd = load("parity_nd.tm");
  const TuringMachine det = load("parity.tm");
  CHECK_FALSE(nd.deterministic());
  for (int len = 0; len <= 6; ++len) {
    const std::string w(len, '1');
    const bool accepted = run_nondet(nd, w, 100).accepted;
    CHECK(accepted == (decide(det, w, 1000) == DecideResult::Yes));
  }
  // dedup only merges identical configurations; acceptance is unchanged
  CHECK(run_nondet(nd, "1111", 100, "qy", true).accepted);
}

TEST_CASE("probabilistic runs") {
  SECTION("all weights one behave deterministically") {
    ProbabilisticMachine pm;
    pm.base = load("successor.tm");
    pm.weights.assign(pm.base.program.size(), 1.0);
    const ProbRunResult r = run_prob(pm, "111", 100, 42);
    CHECK(r.status == RunStatus::Halted);
    CHECK(r.path_probability == 1.0);
    const RunResult det = run(pm.base, "111", 100);
    CHECK(r.config.tape() == det.config.tape());
    CHECK(r.config.steps == det.config.steps);
  }
  SECTION("fair coin frequencies") {
    const ProbabilisticMachine pm = parse_tm_text(slurp(sample_path("coin.tm")));
    long heads = 0;
    const int trials = 10000;
    for (int s = 0; s < trials; ++s) {
      const ProbRunResult r = run_prob(pm, "", 10, static_cast<std::uint64_t>(s));
      REQUIRE(r.status == RunStatus::Halted);
      REQUIRE(r.trace.size() == 1);
      if (r.trace[0].rule.write == 'a') ++heads;
    }
    CHECK(std::abs(heads / double(trials) - 0.5) < 0.02);
  }
  SECTION("a three-flip path multiplies its weights") {
    const ProbabilisticMachine pm = parse_tm_text(slurp(sample_path("coin3.tm")));
    const ProbRunResult r = run_prob(pm, "", 10, 7);
    CHECK(r.status == RunStatus::Halted);
    CHECK(r.trace.size() == 3);
    CHECK(std::abs(r.path_probability - 0.125) < 1e-15);
  }
  SECTION("weights must sum to one per branch point") {
    ProbabilisticMachine pm;
    pm.base = load("successor.tm");
    pm.weights.assign(pm.base.program.size(), 0.5);
    CHECK_THROWS_AS(validate(pm), std::invalid_argument);
  }
  SECTION("seeded runs are reproducible") {
    const ProbabilisticMachine pm = parse_tm_text(slurp(sample_path("coin3.tm")));
    const ProbRunResult a = run_prob(pm, "", 10, 123);
    const ProbRunResult b = run_prob(pm, "", 10, 123);
    CHECK(a.config.tape() == b.config.tape());
  }
}

TEST_CASE("interpreting program text") {
  const std::string text = slurp(sample_path("successor.tm"));
  const RunResult direct = run(parse_tm(text), "111", 100);
  const RunResult via = interpret(text, "111", 100);
  CHECK(via.status == direct.status);
  CHECK(via.config.tape() == direct.config.tape());
  CHECK(via.config.steps == direct.config.steps);

  try {
    parse_tm("states q1\nhalting qh\nstart q1\nalphabet 1\nq1 1 1 q1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
  CHECK_THROWS_AS(parse_tm("states q1\nalphabet 1\n"), ParseError);
}

TEST_CASE("interpreter sweep over the corpus") {
  for (const std::string name :
       {"successor.tm", "add.tm", "parity.tm", "mover.tm"}) {
    const std::string text = slurp(sample_path(name));
    const std::string input = name == "add.tm" ? encode_unary({2, 3}) : "11";
    const RunResult a = interpret(text, input, 500);
    const RunResult b = run(parse_tm(text), input, 500);
    CHECK(a.status == b.status);
    CHECK(a.config.tape() == b.config.tape());
    CHECK(a.config.steps == b.config.steps);
  }
}

TEST_CASE("halting runs never repeat a configuration") {
  for (const std::string name : {"successor.tm", "add.tm", "parity.tm"}) {
    const TuringMachine m = load(name);
    const std::string input =
        name == "add.tm" ? encode_unary({3, 4}) : "1111";
    Configuration c = initial_configuration(m, input);
    std::set<std::string> seen;
    CHECK(seen.insert(c.describe()).second);
    long cells = c.max_cells();
    while (classify(m, c) == TerminalKind::None) {
      REQUIRE(step(m, c) == TerminalKind::None);
      CHECK(seen.insert(c.describe()).second);
      CHECK(c.max_cells() >= cells);  // scanned-cell count is monotone
      cells = c.max_cells();
      REQUIRE(c.steps < 10000);
    }
    CHECK(c.steps == static_cast<long>(seen.size()) - 1);
  }
}

TEST_CASE("fuel exhaustion surfaces in nondeterministic exploration") {
  const NondetReport rep = run_nondet(load("mover.tm"), "111", 20);
  CHECK_FALSE(rep.accepted);
  CHECK(rep.frontier_sizes.size() == 21);
}
