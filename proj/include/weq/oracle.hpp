#pragma once

#include <string>
#include <vector>

#include "weq/problem.hpp"

namespace weq {

// Free reduction over the partner table of `alph` (cancels x x̄).
Word free_reduce(const Alphabet& alph, const Word& w);

// All mode-reduced words of length ≤ L in length-lex order (by symbol id).
std::vector<Word> enumerate_reduced(const Problem& p, int max_len);

struct OracleSolution {
  std::vector<Word> values;  // one per p.vars
  std::size_t branch = 0;    // first satisfied branch
};

struct OracleResult {
  std::vector<OracleSolution> solutions;  // all variables bounded by L
  std::vector<std::string> tuples;        // projection to the targets, formatted and sorted
  bool complete = true;
};

// Exhaustive search; `budget` caps the number of candidate assignments.
OracleResult solve_bruteforce(const Problem& p, const std::vector<Branch>& branches, int max_len,
                              std::size_t budget = 200000000);
inline OracleResult solve_bruteforce(const Problem& p, int max_len) {
  return solve_bruteforce(p, normalize_formula(p), max_len);
}

}  // namespace weq
