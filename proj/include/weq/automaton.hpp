#pragma once

#include <memory>
#include <set>
#include <vector>

#include "weq/alphabet.hpp"
#include "weq/monoid.hpp"

namespace weq {

// Nondeterministic automaton over symbol ids. Label kEps marks an empty-word move.
struct Nfa {
  static constexpr Sym kEps = -1;
  struct Edge {
    int from;
    Sym label;
    int to;
    auto operator<=>(const Edge&) const = default;
  };

  int states = 0;
  std::vector<int> initial;
  std::vector<bool> final;
  std::vector<Edge> edges;

  int add_state(bool is_final = false);
  void add_edge(int from, Sym label, int to);
  bool has_edge(int from, Sym label, int to) const;

  // Reflexive-transitive closure of empty moves.
  std::vector<std::vector<bool>> eps_closure() const;
  std::set<int> step(const std::set<int>& from, Sym a) const;
  bool accepts(const Word& w) const;
  bool has_eps() const;
};

Nfa remove_eps(const Nfa& a);
// Product construction on ε-free automata.
Nfa intersect(const Nfa& a, const Nfa& b);
// Complete deterministic complement over `letters`.
Nfa complement(const Nfa& a, const std::vector<Sym>& letters);

// ρ(a)_{ij} = 1 iff a ∈ L(i,j). The automaton must be ε-free.
struct MatrixRecognizer {
  std::shared_ptr<BoolMatrixMonoid> monoid;
  std::unordered_map<Sym, Elem> images;
  std::vector<int> initial;
  std::vector<int> final;

  Elem eval(const Word& w) const;
  bool accepting(Elem m) const;
};
MatrixRecognizer boolean_matrix_morphism(const Nfa& a, const std::vector<Sym>& letters);

}  // namespace weq
