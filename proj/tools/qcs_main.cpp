// Command-line front end: simulate circuits, synthesize and approximate
// unitaries, compile truth tables to reversible circuits, and run Turing
// machine programs, with deterministic JSON reports.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcs/qcs.hpp"
#include "report.hpp"

namespace {

using namespace qcs;
using qcs_cli::input_entry;
using qcs_cli::json;
using qcs_cli::read_file;
using qcs_cli::round12;
using qcs_cli::write_file;

// Exit codes: 0 success/verified, 1 verification failed, 2 parse or
// validation error, 3 I/O error, 10 fuel exhausted, 11 stuck machine,
// 12 nondeterministic search found no accepting branch.
constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitIo = 3;
constexpr int kExitFuel = 10;
constexpr int kExitStuck = 11;
constexpr int kExitNoAccept = 12;

struct Common {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string report_path;
  RunConfig config;
};

void emit_report(const Common& common, const json& report) {
  const std::string text = report.dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!common.report_path.empty()) write_file(common.report_path, text);
}

int fail(const Common& common, const std::string& command,
         const std::string& kind, const std::string& message, int code) {
  json err{{"schema", 1},
           {"command", command},
           {"error", {{"kind", kind}, {"message", message}}}};
  emit_report(common, err);
  std::fprintf(stderr, "error: %s\n", message.c_str());
  return code;
}

CMatrix parse_matrix_file(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  std::size_t dim = 0;
  std::vector<cplx> entries;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    if (dim == 0) {
      std::string kw;
      if (!(ls >> kw)) continue;
      if (kw != "dim") throw ParseError(line_no, "expected header: dim N");
      if (!(ls >> dim) || dim < 1 || dim > 4096)
        throw ParseError(line_no, "bad dimension");
      continue;
    }
    double re, im;
    while (ls >> re >> im) entries.emplace_back(re, im);
  }
  if (dim == 0) throw ParseError(line_no, "missing dim header");
  if (entries.size() != dim * dim)
    throw ParseError(line_no, "expected " + std::to_string(dim * dim) +
                                  " complex entries");
  CMatrix m(dim, dim);
  m.a = std::move(entries);
  return m;
}

std::string emit_matrix_file(const CMatrix& m) {
  std::ostringstream os;
  os << "dim " << m.rows << "\n";
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j) os << "  ";
      os << qcs::detail::fmt12(m(i, j).real()) << ' '
         << qcs::detail::fmt12(m(i, j).imag());
    }
    os << "\n";
  }
  return os.str();
}

json state_json(const QuantumRegister& q) {
  json amps = json::array();
  json probs = json::array();
  for (std::size_t i = 0; i < q.dim(); ++i) {
    const cplx a = q.amplitudes[i];
    if (std::abs(a) <= 1e-12) continue;
    amps.push_back(json{{"index", i},
                        {"bitstring", bitstring(i, q.n_qubits)},
                        {"re", round12(a.real())},
                        {"im", round12(a.imag())}});
    probs.push_back(json{{"index", i},
                         {"bitstring", bitstring(i, q.n_qubits)},
                         {"p", round12(std::norm(a))}});
  }
  return json{{"amplitudes", amps}, {"probabilities", probs}};
}

int cmd_simulate(const Common& common, const std::string& circuit_path,
                 std::int64_t input_index, const std::string& state_path,
                 long shots, const std::string& dump_path) {
  json report{{"schema", 1}, {"command", "simulate"}};
  try {
    const std::string circuit_text = read_file(circuit_path);
    report["inputs"]["circuit"] = input_entry(circuit_path, circuit_text);
    const Circuit c = parse_circuit(circuit_text);

    QuantumRegister in;
    if (!state_path.empty()) {
      const std::string state_text = read_file(state_path);
      report["inputs"]["state"] = input_entry(state_path, state_text);
      in = parse_state(state_text);
    } else {
      in = basis_state(c.n_wires, static_cast<std::uint64_t>(input_index));
    }
    const QuantumRegister out = run(c, in);

    report["metrics"] = {{"wires", c.n_wires},
                         {"gate_count", c.steps.size()},
                         {"seed", common.seed}};
    report.update(state_json(out));

    if (shots > 0) {
      std::vector<double> probs(out.dim());
      for (std::size_t i = 0; i < out.dim(); ++i)
        probs[i] = std::norm(out.amplitudes[i]);
      Rng rng = common.config.make_rng(common.seed);
      std::map<std::string, long> counts;
      for (long s = 0; s < shots; ++s)
        ++counts[bitstring(sample(probs, rng), out.n_qubits)];
      json jc = json::object();
      for (const auto& [k, v] : counts) jc[k] = v;
      report["metrics"]["shots"] = shots;
      report["counts"] = jc;
    }

    json artifacts = json::array();
    if (!dump_path.empty()) {
      write_file(dump_path, dump_state(out));
      artifacts.push_back(dump_path);
    }
    report["artifacts"] = artifacts;
    emit_report(common, report);
    return kExitOk;
  } catch (const ParseError& e) {
    return fail(common, "simulate", "parse", e.what(), kExitParse);
  } catch (const std::invalid_argument& e) {
    return fail(common, "simulate", "validation", e.what(), kExitParse);
  } catch (const std::runtime_error& e) {
    return fail(common, "simulate", "io", e.what(), kExitIo);
  }
}

int cmd_synthesize(const Common& common, const std::string& matrix_path,
                   double tol, const std::string& out_path) {
  json report{{"schema", 1}, {"command", "synthesize"}};
  try {
    const std::string matrix_text = read_file(matrix_path);
    report["inputs"]["matrix"] = input_entry(matrix_path, matrix_text);
    const CMatrix u = parse_matrix_file(matrix_text);
    const SynthesisResult res = compile_unitary(u, common.config.eps_unitary);

    report["metrics"] = {{"dimension", u.rows},
                         {"factor_count", res.factors.size()},
                         {"gate_count", res.gate_count},
                         {"error", round12(res.reconstruction_error)},
                         {"tolerance", round12(tol)}};
    json artifacts = json::array();
    const std::string circuit_text = emit_circuit(res.circuit);
    if (!out_path.empty()) {
      write_file(out_path, circuit_text);
      artifacts.push_back(out_path);
    } else {
      std::fputs(circuit_text.c_str(), stdout);
    }
    report["artifacts"] = artifacts;
    emit_report(common, report);
    return res.reconstruction_error <= tol ? kExitOk : kExitVerifyFailed;
  } catch (const ParseError& e) {
    return fail(common, "synthesize", "parse", e.what(), kExitParse);
  } catch (const std::invalid_argument& e) {
    return fail(common, "synthesize", "validation", e.what(), kExitParse);
  } catch (const std::runtime_error& e) {
    return fail(common, "synthesize", "io", e.what(), kExitIo);
  }
}

int cmd_approx(const Common& common, const std::string& matrix_path,
               const std::string& set_names, int max_len) {
  json report{{"schema", 1}, {"command", "approx"}};
  try {
    const std::string matrix_text = read_file(matrix_path);
    report["inputs"]["matrix"] = input_entry(matrix_path, matrix_text);
    const CMatrix u = parse_matrix_file(matrix_text);

    std::vector<GateSpec> set;
    std::string cur;
    std::istringstream ss(set_names);
    while (std::getline(ss, cur, ',')) {
      if (cur.empty()) continue;
      set.push_back(qcs::detail::gate_from_name(cur, 0));
    }
    const ApproxDictionary dict(set, max_len);
    const ApproxResult res = dict.search(u);

    report["metrics"] = {{"word", res.word},
                         {"error", round12(res.error)},
                         {"max_len", max_len},
                         {"dictionary_size", dict.size()},
                         {"set", set_names}};
    report["artifacts"] = json::array();
    emit_report(common, report);
    return kExitOk;
  } catch (const ParseError& e) {
    return fail(common, "approx", "parse", e.what(), kExitParse);
  } catch (const std::invalid_argument& e) {
    return fail(common, "approx", "validation", e.what(), kExitParse);
  } catch (const std::runtime_error& e) {
    return fail(common, "approx", "io", e.what(), kExitIo);
  }
}

int cmd_revcomp(const Common& common, const std::string& table_path,
                const std::string& out_path) {
  json report{{"schema", 1}, {"command", "revcomp"}};
  try {
    const std::string table_text = read_file(table_path);
    report["inputs"]["table"] = input_entry(table_path, table_text);
    const TruthTable t = parse_truth_table(table_text);
    const BoolCircuit bc = synthesize_bool(t);
    const RevCircuit rc = to_reversible(bc);

    // Exhaustive check of the register contract over every input, for the
    // all-zero and all-one output registers.
    bool ok = true;
    const std::size_t n_inputs = std::size_t{1} << t.n_in;
    for (std::size_t x = 0; x < n_inputs && ok; ++x) {
      for (int ybits = 0; ybits < 2 && ok; ++ybits) {
        std::vector<int> bits(rc.width, 0);
        for (int i = 0; i < t.n_in; ++i)
          bits[rc.layout.x_begin + i] =
              static_cast<int>((x >> (t.n_in - 1 - i)) & 1u);
        for (int j = 0; j < t.n_out; ++j)
          bits[rc.layout.y_begin + j] = ybits;
        const std::vector<int> out = eval_reversible(rc, bits);
        for (int i = 0; i < t.n_in; ++i)
          ok &= out[rc.layout.x_begin + i] == bits[rc.layout.x_begin + i];
        for (int i = 0; i < rc.layout.anc_count; ++i)
          ok &= out[rc.layout.anc_begin + i] == 0;
        for (int i = 0; i < rc.layout.copy_count; ++i)
          ok &= out[rc.layout.copy_begin + i] == 0;
        for (int j = 0; j < t.n_out; ++j)
          ok &= out[rc.layout.y_begin + j] == (ybits ^ table_bit(t, x, j));
      }
    }

    report["metrics"] = {{"inputs", t.n_in},
                         {"outputs", t.n_out},
                         {"nodes", bc.nodes.size()},
                         {"width", rc.width},
                         {"step_count", rc.steps.size()},
                         {"verified", ok}};
    json artifacts = json::array();
    const std::string circuit_text = emit_reversible(rc);
    if (!out_path.empty()) {
      write_file(out_path, circuit_text);
      artifacts.push_back(out_path);
    } else {
      std::fputs(circuit_text.c_str(), stdout);
    }
    report["artifacts"] = artifacts;
    emit_report(common, report);
    return ok ? kExitOk : kExitVerifyFailed;
  } catch (const ParseError& e) {
    return fail(common, "revcomp", "parse", e.what(), kExitParse);
  } catch (const std::invalid_argument& e) {
    return fail(common, "revcomp", "validation", e.what(), kExitParse);
  } catch (const std::runtime_error& e) {
    return fail(common, "revcomp", "io", e.what(), kExitIo);
  }
}

int cmd_tm(const Common& common, const std::string& program_path,
           const std::string& input, long fuel, const std::string& mode,
           const std::string& accept_state) {
  json report{{"schema", 1}, {"command", "tm"}};
  try {
    const std::string program_text = read_file(program_path);
    report["inputs"]["program"] = input_entry(program_path, program_text);
    const ProbabilisticMachine pm = parse_tm_text(program_text);

    if (mode == "det") {
      const RunResult r = run(pm.base, input, fuel);
      report["metrics"] = {{"status", to_string(r.status)},
                           {"steps", r.config.steps},
                           {"max_cells", r.config.max_cells()},
                           {"state", r.config.state},
                           {"standard_terminal",
                            is_standard_terminal(pm.base, r.config)},
                           {"fuel", fuel}};
      report["tape"] = r.config.tape();
      report["artifacts"] = json::array();
      emit_report(common, report);
      if (r.status == RunStatus::Halted) return kExitOk;
      return r.status == RunStatus::FuelExhausted ? kExitFuel : kExitStuck;
    }
    if (mode == "nd") {
      const NondetReport r = run_nondet(pm.base, input, fuel, accept_state);
      report["metrics"] = {{"accepted", r.accepted},
                           {"accept_depth", r.accept_depth},
                           {"accepting_paths", r.accepting_paths},
                           {"nodes_explored", r.nodes_explored},
                           {"fuel", fuel}};
      report["frontier_sizes"] = r.frontier_sizes;
      report["artifacts"] = json::array();
      emit_report(common, report);
      return r.accepted ? kExitOk : kExitNoAccept;
    }
    if (mode == "prob") {
      const ProbRunResult r = run_prob(pm, input, fuel, common.seed);
      json trace = json::array();
      for (const auto& s : r.trace)
        trace.push_back(json{{"state", s.rule.state},
                             {"read", std::string(1, s.rule.read)},
                             {"write", std::string(1, s.rule.write)},
                             {"next", s.rule.next},
                             {"move", std::string(1, s.rule.move)},
                             {"weight", round12(s.weight)}});
      report["metrics"] = {{"status", to_string(r.status)},
                           {"steps", r.config.steps},
                           {"max_cells", r.config.max_cells()},
                           {"state", r.config.state},
                           {"path_probability", round12(r.path_probability)},
                           {"seed", common.seed},
                           {"fuel", fuel}};
      report["tape"] = r.config.tape();
      report["trace"] = trace;
      report["artifacts"] = json::array();
      emit_report(common, report);
      if (r.status == RunStatus::Halted) return kExitOk;
      return r.status == RunStatus::FuelExhausted ? kExitFuel : kExitStuck;
    }
    return fail(common, "tm", "validation", "unknown mode: " + mode, kExitParse);
  } catch (const ParseError& e) {
    return fail(common, "tm", "parse", e.what(), kExitParse);
  } catch (const std::invalid_argument& e) {
    return fail(common, "tm", "validation", e.what(), kExitParse);
  } catch (const std::runtime_error& e) {
    return fail(common, "tm", "io", e.what(), kExitIo);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum circuit, synthesis and Turing machine toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Common common;
  app.add_option("--seed", common.seed, "seed for all stochastic behavior");
  app.add_option("--config", common.config_path,
                 "key=value file naming the rng algorithm and tolerances");
  app.add_option("--report", common.report_path, "write the JSON report here");

  auto* sim = app.add_subcommand("simulate", "run a circuit on a register");
  std::string circuit_path, state_path, dump_path;
  std::int64_t input_index = 0;
  long shots = 0;
  sim->add_option("circuit", circuit_path, "circuit file")->required();
  sim->add_option("--input-index", input_index, "basis state index (default 0)");
  sim->add_option("--input-state", state_path, "state dump file to start from");
  sim->add_option("--shots", shots, "sample the output this many times");
  sim->add_option("--dump", dump_path, "write the output state dump here");

  auto* syn = app.add_subcommand("synthesize",
                                 "lower a unitary to single-qubit + CNOT gates");
  std::string matrix_path, out_path;
  double tol = 1e-9;
  syn->add_option("matrix", matrix_path, "matrix file (dim header + re im rows)")
      ->required();
  syn->add_option("--tol", tol, "acceptance tolerance on the reconstruction");
  syn->add_option("--out", out_path, "write the circuit file here");

  auto* apx = app.add_subcommand("approx",
                                 "search gate words approximating a 2x2 unitary");
  std::string apx_matrix, set_names = "H,S,T";
  int max_len = 12;
  apx->add_option("matrix", apx_matrix, "matrix file")->required();
  apx->add_option("--set", set_names, "comma-separated gate names");
  apx->add_option("--max-len", max_len, "maximum word length (<= 14)");

  auto* rev = app.add_subcommand("revcomp",
                                 "compile a truth table to a reversible circuit");
  std::string table_path, rev_out;
  rev->add_option("table", table_path, "truth table file")->required();
  rev->add_option("--out", rev_out, "write the circuit file here");

  auto* tm = app.add_subcommand("tm", "run a Turing machine program");
  std::string program_path, tm_input, tm_mode = "det", accept_state = "qy";
  long fuel = 10000;
  tm->add_option("program", program_path, "machine program file")->required();
  tm->add_option("--input", tm_input, "input tape expression");
  tm->add_option("--fuel", fuel, "maximum number of steps");
  tm->add_option("--mode", tm_mode, "det | nd | prob");
  tm->add_option("--accept", accept_state,
                 "accepting state for nondeterministic search");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!common.config_path.empty())
      common.config = qcs::parse_config(qcs_cli::read_file(common.config_path));
  } catch (const qcs::ParseError& e) {
    return fail(common, "config", "parse", e.what(), kExitParse);
  } catch (const std::runtime_error& e) {
    return fail(common, "config", "io", e.what(), kExitIo);
  }

  if (sim->parsed())
    return cmd_simulate(common, circuit_path, input_index, state_path, shots,
                        dump_path);
  if (syn->parsed()) return cmd_synthesize(common, matrix_path, tol, out_path);
  if (apx->parsed()) return cmd_approx(common, apx_matrix, set_names, max_len);
  if (rev->parsed()) return cmd_revcomp(common, table_path, rev_out);
  if (tm->parsed())
    return cmd_tm(common, program_path, tm_input, fuel, tm_mode, accept_state);
  return kExitParse;
}
