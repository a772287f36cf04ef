#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weq/edt0l.hpp"
#include "weq/graph.hpp"
#include "weq/oracle.hpp"
#include "weq/recompression.hpp"
#include "weq/reduction.hpp"

namespace weq {

struct SolveOptions {
  int max_len = 6;
  std::size_t kappa = 100;
  std::uint64_t seed = 1;
  std::size_t budget_steps = 200000;    // arcs per witness run
  std::size_t budget_enum = 5000000;    // enumeration configurations
  std::size_t budget_oracle = 200000000;
  bool trace = false;
};

struct SolveResult {
  OracleResult oracle;
  Graph graph;
  EndoNfa nfa;
  RunStats stats;
  std::vector<std::string> trace;   // per-arc log when requested
  std::vector<std::string> report;  // reduction summary
  std::size_t witnesses = 0;
};

// Builds the graph by replaying the compression schedule on every solution of
// length ≤ max_len, then assembles the endomorphism-labelled NFA.
SolveResult solve_all(Problem& p, const SolveOptions& opt);

// Tuples of target values produced by `nfa` with every component of length ≤ max_len,
// formatted and sorted like the oracle.
std::vector<std::string> enumerate_solutions(const Problem& p, const EndoNfa& nfa, int max_len, std::size_t budget);

}  // namespace weq
