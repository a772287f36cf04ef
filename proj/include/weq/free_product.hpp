#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "weq/alphabet.hpp"
#include "weq/automaton.hpp"
#include "weq/monoid.hpp"

namespace weq {

enum class FactorKind { FreeGroup, FreeMonoid, FiniteGroup };

struct Factor {
  FactorKind kind;
  std::string name;
  std::vector<Sym> letters;
  // Finite groups only: element names, Cayley table, letter per element (-1 for the identity).
  std::vector<std::string> elements;
  std::vector<std::vector<int>> table;
  std::vector<Sym> element_letter;
};

// Free product of free groups, free monoids with involution and finite groups.
// Letters live in an Alphabet whose partner table is the encoded (hat) involution;
// the factor involution is kept here as `raw_partner`.
class FreeProductSpec {
 public:
  struct LetterInfo {
    int factor = -1;
    int element = -1;
    Sym raw_partner = -1;
    Sym hat = -1;  // partner letter added for a self-involuting letter
    std::string name;
  };

  void add_free_group(Alphabet& alph, const std::vector<std::string>& names);
  // `inv` lists involution pairs; a pair (a,a) makes a self-involuting. Letters not
  // mentioned get a fresh partner named x'.
  void add_free_monoid(Alphabet& alph, const std::vector<std::string>& names,
                       const std::vector<std::pair<std::string, std::string>>& inv);
  // The first element is the identity. Validates the group axioms.
  void add_finite_group(Alphabet& alph, const std::string& name, const std::vector<std::string>& elements,
                        const std::vector<std::vector<int>>& table);

  const std::vector<Factor>& factors() const { return factors_; }
  const std::vector<Sym>& letters() const { return letters_; }  // A_F, by id
  bool is_letter(Sym s) const { return info_.count(s) > 0; }
  bool is_hat(Sym s) const { return hats_.count(s) > 0; }
  const LetterInfo& info(Sym s) const;
  Sym raw_partner(Sym s) const { return info(s).raw_partner; }
  bool is_unit(Sym s) const;
  FactorKind kind_of(Sym s) const { return factors_.at(info(s).factor).kind; }
  bool is_infinite() const;
  bool has_hats() const { return !hats_.empty(); }

  // Adjacent pair (a,b) allowed in a geodesic.
  bool adjacent_ok(Sym a, Sym b) const;
  bool is_geodesic(const Word& w) const;
  Word normal_form(const Word& w) const;
  Word raw_involute(const Word& w) const;
  // Product of two letters as a word of length ≤ 2.
  Word multiply_letters(Sym a, Sym b) const;
  // All geodesics of length ≤ L in length-lex order (by symbol id).
  std::vector<Word> geodesics(int max_len) const;

  Word iota(const Word& w) const;
  Word eta(const Word& w) const;
  // Encoded letters A± (letters and their hats), by id.
  std::vector<Sym> encoded_letters() const;

 private:
  void register_letter(const Alphabet& alph, Sym s, int factor, int element, Sym raw_partner, Sym hat);
  std::vector<Factor> factors_;
  std::vector<Sym> letters_;
  std::unordered_map<Sym, LetterInfo> info_;
  std::unordered_set<Sym> hats_;
};

// N_F × {1,0}: geodesic recognizer paired with the units recognizer.
struct ProductConstraint {
  std::shared_ptr<AdjacencyMonoid> geodesic;
  std::shared_ptr<TableMonoid> units;
  std::shared_ptr<ProductMonoid> monoid;
  ConstraintMorphism psi;    // into monoid, on A_F ∪ {#}
  ConstraintMorphism psi_f;  // geodesic component only
  std::unordered_map<Sym, int> index;

  bool unit_component_one(Elem m) const;
};
ProductConstraint build_product_constraint_monoid(const FreeProductSpec& spec);

// Two-state recognizer of ι(A_F*) inside A±*; transposition is the involution.
ConstraintMorphism build_iota_recognizer(const FreeProductSpec& spec);
bool iota_accepting(const ConstraintMorphism& rec, Elem m);

// Saturation: add (p, π(ab), q) whenever ab ∈ L(p,q) is not geodesic.
Nfa benois_saturate(const Nfa& a, const FreeProductSpec& spec, std::size_t* firings = nullptr);
Nfa geodesic_automaton(const FreeProductSpec& spec);
Nfa rat_complement(const Nfa& saturated, const FreeProductSpec& spec);
Nfa rat_intersect(const Nfa& sat1, const Nfa& sat2, const FreeProductSpec& spec);

// Branches (a,b,c) with a = π(bc), letters or -1 for the empty word.
struct EquationBranch {
  Sym a = -1, b = -1, c = -1;
  auto operator<=>(const EquationBranch&) const = default;
};
std::vector<EquationBranch> reduce_equation_over_F(const FreeProductSpec& spec);

// Decomposition y = P b R, z = R̄ c Q, π(yz) = P a Q with R a maximal unit cancellation.
struct ProductSplit {
  Word P, Q, R;
  EquationBranch branch;
};
ProductSplit split_product(const FreeProductSpec& spec, const Word& y, const Word& z);

// x ≠ y as one of: x = P b Q, y = P c R with b ≠ c; y = x b R; x = y b R.
enum class NeqShape { Differ, LeftPrefix, RightPrefix };
struct InequalityBranch {
  NeqShape shape;
  Sym b = -1, c = -1;
  auto operator<=>(const InequalityBranch&) const = default;
};
std::vector<InequalityBranch> reduce_inequality(const FreeProductSpec& spec);
struct InequalitySplit {
  InequalityBranch branch;
  Word P, Q, R;
};
std::optional<InequalitySplit> split_inequality(const Word& x, const Word& y);

}  // namespace weq
