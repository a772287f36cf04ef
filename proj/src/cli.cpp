#include "weq/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "weq/solver.hpp"

namespace weq {

namespace {

const char* const kCommands[] = {"sat", "solve", "classify", "enumerate", "oracle", "trace", "export"};

std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "free-group") return Mode::FreeGroup;
  if (s == "free-monoid") return Mode::FreeMonoid;
  if (s == "free-product") return Mode::FreeProduct;
  return std::nullopt;
}

}  // namespace

std::string validate(const RunConfig& cfg) {
  if (std::find(std::begin(kCommands), std::end(kCommands), cfg.command) == std::end(kCommands))
    return "unknown command '" + cfg.command + "'";
  if (cfg.kappa == 0) return "--kappa must be positive";
  if (cfg.max_len < 0) return "--max-len must be non-negative";
  if (cfg.budget_steps == 0 || cfg.budget_enum == 0) return "budgets must be positive";
  if (cfg.format != "text" && cfg.format != "dot") return "--format must be text or dot";
  if (cfg.mode && !parse_mode(*cfg.mode)) return "unknown mode '" + *cfg.mode + "'";
  return {};
}

int run_text(const RunConfig& cfg, const std::string& text, std::ostream& out, std::ostream& err) {
  if (auto why = validate(cfg); !why.empty()) {
    err << "error: " << why << "\n";
    return 2;
  }
  std::ostringstream buf;
  int code = 0;
  try {
    ProblemText pt = parse_problem(text);
    if (cfg.mode) pt.mode = *parse_mode(*cfg.mode);
    Problem p = compile_problem(pt);
    if (cfg.command == "oracle") {
      auto res = solve_bruteforce(p, normalize_formula(p), cfg.max_len);
      if (!res.complete) throw Error("oracle budget exhausted");
      for (const auto& t : res.tuples) buf << t << "\n";
      out << buf.str();
      return 0;
    }
    SolveOptions so;
    so.max_len = cfg.max_len;
    so.kappa = cfg.kappa;
    so.seed = cfg.seed;
    so.budget_steps = cfg.budget_steps;
    so.budget_enum = cfg.budget_enum;
    so.trace = cfg.command == "trace";
    SolveResult res = solve_all(p, so);
    if (!res.oracle.complete) throw Error("oracle budget exhausted");
    if (cfg.command == "sat") {
      const bool sat = !is_empty(res.nfa);
      buf << (sat ? "SAT" : "UNSAT") << "\n";
      code = sat ? 0 : 1;
    } else if (cfg.command == "solve") {
      buf << (cfg.format == "dot" ? to_dot(res.nfa) : serialize(res.nfa));
    } else if (cfg.command == "export") {
      buf << to_dot(res.nfa);
    } else if (cfg.command == "classify") {
      buf << finiteness_name(classify(res.nfa).outputs) << "\n";
    } else if (cfg.command == "enumerate") {
      for (const auto& t : enumerate_solutions(p, res.nfa, cfg.max_len, cfg.budget_enum)) buf << t << "\n";
    } else if (cfg.command == "trace") {
      for (const auto& l : res.report) buf << "# " << l << "\n";
      for (const auto& l : res.trace) buf << l << "\n";
      const auto& s = res.stats;
      buf << "witnesses " << res.witnesses << ", arcs " << s.arcs << ", graph " << res.graph.size() << " vertices "
          << res.graph.arcs().size() << " arcs\n";
      buf << "forward failures " << s.forward_failures << ", structural violations " << s.structural_violations
          << ", measure failures " << s.measure_failures << ", postcondition failures " << s.postcondition_failures
          << "\n";
      buf << "max |W|/n " << s.max_ratio << ", after block compression " << s.max_ratio_block
          << ", after pair compression " << s.max_ratio_pair << "\n";
      for (const auto& f : s.failures) buf << "failure: " << f << "\n";
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  out << buf.str();
  return code;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string text;
  if (cfg.input == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    text = s.str();
  } else {
    std::ifstream in(cfg.input);
    if (!in) {
      err << "error: cannot read " << cfg.input << "\n";
      return 2;
    }
    std::ostringstream s;
    s << in.rdbuf();
    text = s.str();
  }
  return run_text(cfg, text, out, err);
}

}  // namespace weq
