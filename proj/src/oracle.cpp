#include "weq/oracle.hpp"

#include <algorithm>
#include <functional>

namespace weq {

Word free_reduce(const Alphabet& alph, const Word& w) {
  Word st;
  for (Sym x : w) {
    if (!st.empty() && alph.partner(st.back()) == x && x != st.back())
      st.pop_back();
    else
      st.push_back(x);
  }
  return st;
}

std::vector<Word> enumerate_reduced(const Problem& p, int max_len) { return p.spec.geodesics(max_len); }

OracleResult solve_bruteforce(const Problem& p, const std::vector<Branch>& branches, int max_len,
                              std::size_t budget) {
  OracleResult res;
  const std::size_t nv = p.vars.size();
  const auto words = enumerate_reduced(p, max_len);

  auto var_index = [&](Sym s) -> int {
    for (std::size_t i = 0; i < nv; ++i)
      if (p.vars[i] == s || p.alph->partner(p.vars[i]) == s) return static_cast<int>(i);
    return -1;
  };
  // Depth at which each atom becomes decidable.
  std::vector<std::vector<std::vector<std::size_t>>> due(branches.size(), std::vector<std::vector<std::size_t>>(nv + 1));
  for (std::size_t b = 0; b < branches.size(); ++b)
    for (std::size_t k = 0; k < branches[b].size(); ++k) {
      const Atom& a = branches[b][k];
      int depth = 0;
      auto scan = [&](const Word& w) {
        for (Sym s : w)
          if (p.alph->is_variable(s)) depth = std::max(depth, var_index(s) + 1);
      };
      scan(a.lhs);
      scan(a.rhs);
      if (a.kind == AtomKind::Member) depth = std::max(depth, var_index(a.var) + 1);
      due[b][depth].push_back(k);
    }

  std::vector<Word> values(nv);
  std::size_t visited = 0;
  std::vector<std::string> rows;
  std::function<void(std::size_t, const std::vector<std::size_t>&)> rec = [&](std::size_t d,
                                                                             const std::vector<std::size_t>& alive) {
    if (!res.complete) return;
    std::vector<std::size_t> still;
    for (std::size_t b : alive) {
      bool ok = true;
      for (std::size_t k : due[b][d])
        if (!holds(p, branches[b][k], values)) {
          ok = false;
          break;
        }
      if (ok) still.push_back(b);
    }
    if (still.empty()) return;
    if (d == nv) {
      res.solutions.push_back({values, still.front()});
      std::vector<Word> tuple;
      for (Sym t : p.targets) tuple.push_back(values[static_cast<std::size_t>(var_index(t))]);
      rows.push_back(format_tuple(*p.alph, tuple));
      return;
    }
    for (const Word& w : words) {
      if (++visited > budget) {
        res.complete = false;
        return;
      }
      values[d] = w;
      rec(d + 1, still);
    }
    values[d].clear();
  };
  std::vector<std::size_t> all(branches.size());
  for (std::size_t b = 0; b < branches.size(); ++b) all[b] = b;
  rec(0, all);
  sort_tuples(rows);
  res.tuples = std::move(rows);
  return res;
}

}  // namespace weq
