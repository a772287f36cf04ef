#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "weq/monoid.hpp"
#include "weq/problem.hpp"

namespace weq {

// Everything the recompression stage needs about a compiled problem.
struct SolverContext {
  const Problem* problem = nullptr;
  bool encoded = false;        // letters are ι-encoded (free monoid and free product modes)
  std::vector<Sym> letters;    // A±: the constants of the monoid equations
  ConstraintMorphism mu0;      // on A± ∪ {#}
  std::vector<std::string> components;  // names of the product factors, for reports
};
SolverContext make_context(const Problem& p);

// x = y z with x a variable; y, z variables or letters.
struct Triangle {
  Sym x, y, z;
  bool operator==(const Triangle&) const = default;
};

// Returns or creates the variable pair `name`, `name'`.
Sym ensure_variable(Alphabet& alph, const std::string& name);

// Triangles defining `x := w` (|w| ≥ 2) with fresh chain variables `<tag>_<i>`.
std::vector<Triangle> define_by_triangles(Alphabet& alph, Sym x, const Word& w, const std::string& tag);

// U = V as triangles over fresh variables `_X<tag>`, `_Y<tag>` (the latter fixed to 1).
struct Triangulation {
  std::vector<Triangle> triangles;
  Sym lhs = -1;       // the variable equal to U (and V)
  Sym unit = -1;      // the padding variable
};
Triangulation triangulate(Alphabet& alph, const Word& U, const Word& V, const std::string& tag);

// Monoid split of a free-group triangle: x = P R, y = P Q, z = Q̄ R.
struct GroupSplit {
  Sym P, Q, R;
  std::vector<std::pair<Word, Word>> equations;
};
GroupSplit group_to_monoid(Alphabet& alph, const Triangle& t, const std::string& tag);
// Values of P, Q, R for reduced values of y and z.
struct SplitValues {
  Word P, Q, R;
};
SplitValues split_reduced(const Alphabet& alph, const Word& y, const Word& z);

// A branch together with one of its solutions, turned into a system of monoid
// equations over A± with a witness assignment.
struct WitnessInstance {
  std::vector<std::pair<Word, Word>> equations;  // over A± and variables
  std::vector<Sym> vars;                          // Ω′, closed under involution, sorted
  std::vector<Sym> xlist;                         // order of the prefix of W_init
  std::unordered_map<Sym, Word> sigma;            // on vars, over A±
  Word W;
  std::size_t n = 0;
  std::size_t markers = 0;
  std::map<Sym, Elem> mu;                         // on A± ∪ {#} ∪ vars
  std::vector<std::string> report;
};

// W_init = #x1#…#xℓ#U′#V′#Ū′#V̄′#x̄ℓ#…#x̄1#.
Word build_initial_word(const Alphabet& alph, const std::vector<Sym>& xlist,
                        const std::vector<std::pair<Word, Word>>& equations);

// `values` are raw values of p.vars solving `branch`.
WitnessInstance build_witness_instance(const SolverContext& ctx, const Branch& branch,
                                       const std::vector<Word>& values);

// All μ on the variables of `equations` that are nonzero on variables and agree on
// both sides of every equation. Variables are assigned in pairs (X, X̄).
std::vector<std::map<Sym, Elem>> guess_mu_init(const SolverContext& ctx,
                                               const std::vector<std::pair<Word, Word>>& equations,
                                               const std::vector<Sym>& vars, std::size_t cap = 100000);

}  // namespace weq
