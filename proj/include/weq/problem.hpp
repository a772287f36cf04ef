#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "weq/alphabet.hpp"
#include "weq/automaton.hpp"
#include "weq/free_product.hpp"
#include "weq/monoid.hpp"

namespace weq {

enum class Mode { FreeGroup, FreeMonoid, FreeProduct };
std::string mode_name(Mode m);

class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& msg);
  int line, col;
};

// ---- surface syntax -------------------------------------------------------

struct FactorDecl {
  FactorKind kind = FactorKind::FreeGroup;
  std::string name;                                         // finite groups only
  std::vector<std::string> letters;                         // free factors
  std::vector<std::pair<std::string, std::string>> inv;     // free monoid involution pairs
  std::vector<std::string> elements;                        // finite groups
  std::vector<std::vector<int>> table;
  bool operator==(const FactorDecl&) const = default;
};

struct AutomatonDecl {
  std::string name;
  int states = 0;
  std::vector<int> initial, final;
  struct Edge {
    int from;
    std::string label;  // "1" is the empty word
    int to;
    bool operator==(const Edge&) const = default;
  };
  std::vector<Edge> edges;
  bool operator==(const AutomatonDecl&) const = default;
};

struct AtomDecl {
  enum class Kind { Eq, Neq, In, NotIn };
  Kind kind = Kind::Eq;
  std::vector<std::string> lhs, rhs;  // equations
  std::string var, automaton;         // constraints
  std::optional<std::vector<std::string>> element;  // representative word of an element
  bool operator==(const AtomDecl&) const = default;
};

struct ProblemText {
  Mode mode = Mode::FreeGroup;
  std::vector<FactorDecl> factors;
  std::vector<std::string> vars;
  std::vector<AutomatonDecl> automata;
  std::vector<std::vector<AtomDecl>> clauses;  // conjunction of disjunctions
  std::vector<std::string> targets;
  bool operator==(const ProblemText&) const = default;
};

ProblemText parse_problem(const std::string& text);
std::string print_problem(const ProblemText& p);

// ---- compiled form --------------------------------------------------------

struct UserAutomaton {
  std::string name;
  Nfa nfa;                  // ε-free; saturated in group and free-product modes
  MatrixRecognizer rec;     // over raw letters
  std::vector<Elem> elements;  // ρ(A_F*)
};

enum class AtomKind { Eq, Neq, Member };
struct Atom {
  AtomKind kind = AtomKind::Eq;
  Word lhs, rhs;     // raw words over letters and variables
  Sym var = -1;      // Member: ρ(σ(var)) = element
  int automaton = -1;
  Elem element = 0;
  bool operator==(const Atom&) const = default;
};
using Branch = std::vector<Atom>;

struct Problem {
  Mode mode = Mode::FreeGroup;
  std::shared_ptr<Alphabet> alph;
  FreeProductSpec spec;
  std::vector<Sym> vars;     // user variables (not their partners), declaration order
  std::vector<Sym> targets;
  std::vector<UserAutomaton> automata;
  std::vector<std::vector<Atom>> clauses;  // each clause: alternatives
  ProblemText source;

  const std::vector<Sym>& letters() const { return spec.letters(); }
  bool is_var(Sym s) const { return alph->is_variable(s); }
  // σ(X̄) for the raw involution.
  Word raw_involute(const Word& w) const { return spec.raw_involute(w); }
};

Problem compile_problem(const ProblemText& text);
inline Problem load_problem(const std::string& text) { return compile_problem(parse_problem(text)); }

// Conjunctive branches whose union is the formula. Contradictory branches are dropped.
std::vector<Branch> normalize_formula(const Problem& p);

// Raw word of a solution assignment: `values` indexed like p.vars.
Word substitute(const Problem& p, const Word& w, const std::vector<Word>& values);
bool holds(const Problem& p, const Atom& a, const std::vector<Word>& values);
bool holds(const Problem& p, const Branch& b, const std::vector<Word>& values);

// Solution tuples as text: components joined by '#', empty word printed as 1.
std::string format_word(const Alphabet& alph, const Word& w);
std::string format_tuple(const Alphabet& alph, const std::vector<Word>& tuple);
// Length-lex (total length, then text).
void sort_tuples(std::vector<std::string>& rows);

}  // namespace weq
