#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "weq/graph.hpp"
#include "weq/reduction.hpp"

namespace weq {

struct RunOptions {
  std::size_t kappa = 100;
  std::uint64_t seed = 1;
  std::size_t max_arcs = 200000;  // per run
  bool trace = false;
};

struct RunStats {
  std::size_t runs = 0;
  std::size_t arcs = 0;
  std::size_t new_vertices = 0;
  std::size_t new_arcs = 0;
  std::size_t rounds = 0;
  std::map<std::string, std::size_t> by_kind;
  // Largest |W|/n seen anywhere, after block compression and after pair compression.
  double max_ratio = 0, max_ratio_block = 0, max_ratio_pair = 0;
  std::size_t forward_failures = 0;
  std::size_t solution_failures = 0;
  std::size_t structural_violations = 0;
  std::size_t measure_failures = 0;
  std::size_t postcondition_failures = 0;
  std::vector<std::string> failures;  // first few messages

  void merge(const RunStats& o);
  void fail(std::size_t& counter, const std::string& msg);
  bool clean() const {
    return forward_failures == 0 && solution_failures == 0 && structural_violations == 0 && measure_failures == 0 &&
           postcondition_failures == 0;
  }
};

// Drives one witness solution from W_init to a final vertex, recording every
// step as a validated arc of the shared graph.
class WitnessRun {
 public:
  WitnessRun(Graph& graph, const SolverContext& ctx, const WitnessInstance& wi, const RunOptions& opt);

  void run();
  void block_compression();
  void nonstandard_block_compression();
  void pair_compression();
  bool at_final() const;

  const Vertex& vertex() const { return cur_; }
  int vertex_id() const { return vid_; }
  int initial_id() const { return initial_; }
  const std::unordered_map<Sym, Word>& sigma() const { return sigma_; }
  const std::unordered_map<Sym, Word>& alpha() const { return alpha_; }
  const RunStats& stats() const { return stats_; }
  const std::vector<std::string>& trace() const { return trace_; }
  std::size_t n() const { return n_; }
  // α(σ(W)) for the current vertex.
  Word forward_value() const;

 private:
  struct Next {
    Word W;
    std::vector<Sym> B, X;
    TypeRelation theta;
    std::map<Sym, Elem> mu;
    std::unordered_map<Sym, Word> alpha, sigma;
  };
  Next start() const;
  // Canonical renaming is applied only when `canon` is set, so letters held by
  // a phase stay valid until its closing restrict.
  void commit(ArcKind kind, const Endomorphism& h, const SubstData& d, Next nx, bool canon = false);

  Word alpha_of(Sym s) const;
  Elem eval(const Word& w) const;
  bool is_base(Sym s) const;
  std::size_t measure(const std::unordered_map<Sym, Word>& alpha, const std::unordered_map<Sym, Word>& sigma,
                      const std::vector<Sym>& X) const;
  std::pair<Sym, Sym> fresh_pair();

  void pop(Sym y);
  void erase(Sym y);
  void erase_empty();
  void type_var(Sym y, Sym letter);
  void reduce_alphabet();  // closing restrict of a phase, canonicalizing
  void block_letter(Sym b);
  void nonstandard_letter(Sym a);

  Graph& graph_;
  Alphabet& alph_;
  const SolverContext& ctx_;
  RunOptions opt_;
  std::size_t n_ = 0, markers_ = 0;
  std::vector<bool> base_;
  Vertex cur_;
  int vid_ = -1, initial_ = -1;
  std::unordered_map<Sym, Word> alpha_, sigma_;
  Word target_;  // α σ (W_init)
  RunStats stats_;
  std::vector<std::string> trace_;
  std::size_t arcs_ = 0;
  std::mt19937_64 rng_;
};

// Expected length after one pair compression of `w` under a uniformly random
// orientation of every letter pair occurring in it.
boost::rational<long long> expected_pair_compressed_length(const Alphabet& alph, const Word& w);

// LR pairs compressed in `w` by the partition `in_left`.
std::size_t compressed_length(const Alphabet& alph, const Word& w, const std::unordered_map<Sym, bool>& in_left);

}  // namespace weq
