#include "weq/solver.hpp"

#include <algorithm>
#include <set>

namespace weq {

SolveResult solve_all(Problem& p, const SolveOptions& opt) {
  SolveResult res;
  const auto branches = normalize_formula(p);
  res.oracle = solve_bruteforce(p, branches, opt.max_len, opt.budget_oracle);
  const SolverContext ctx = make_context(p);
  res.report.push_back("mode " + mode_name(p.mode) + ", " + std::to_string(branches.size()) + " branch(es)");
  std::string comps = "constraint monoid:";
  for (const auto& c : ctx.components) comps += " " + c;
  res.report.push_back(comps);
  RunOptions ro{opt.kappa, opt.seed, opt.budget_steps, opt.trace};
  bool first = true;
  for (const auto& sol : res.oracle.solutions) {
    WitnessInstance wi = build_witness_instance(ctx, branches.at(sol.branch), sol.values);
    if (first) {
      res.report.push_back("n = " + std::to_string(wi.n));
      res.report.insert(res.report.end(), wi.report.begin(), wi.report.end());
      first = false;
    }
    WitnessRun run(res.graph, ctx, wi, ro);
    try {
      run.run();
    } catch (const Error&) {
      res.stats.merge(run.stats());
      throw;
    }
    res.stats.merge(run.stats());
    if (opt.trace) {
      res.trace.push_back("witness " + format_tuple(*p.alph, sol.values));
      res.trace.insert(res.trace.end(), run.trace().begin(), run.trace().end());
    }
    ++res.witnesses;
  }
  res.nfa = assemble_nfa(res.graph, *p.alph, p.targets.size(), p.letters(), ctx.encoded ? &p.spec : nullptr);
  return res;
}

std::vector<std::string> enumerate_solutions(const Problem& p, const EndoNfa& nfa, int max_len, std::size_t budget) {
  const std::size_t k = std::max<std::size_t>(1, p.targets.size());
  const std::size_t L = static_cast<std::size_t>(max_len);
  std::set<std::string> rows;
  for (const Word& w : enumerate(nfa, k * (L + 1) - 1, budget)) {
    std::vector<Word> parts(1);
    for (Sym s : w) {
      if (s == Alphabet::kMarker)
        parts.emplace_back();
      else
        parts.back().push_back(s);
    }
    if (parts.size() != p.targets.size()) continue;
    if (std::any_of(parts.begin(), parts.end(), [&](const Word& u) { return u.size() > L; })) continue;
    rows.insert(format_tuple(*p.alph, parts));
  }
  std::vector<std::string> out(rows.begin(), rows.end());
  sort_tuples(out);
  return out;
}

}  // namespace weq
