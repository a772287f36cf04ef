#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "weq/alphabet.hpp"

namespace weq {

using Elem = std::uint32_t;

// Finite monoid with involution. Elements are dense ids, interned lazily.
class Monoid {
 public:
  virtual ~Monoid() = default;
  virtual Elem one() const = 0;
  virtual std::optional<Elem> zero() const = 0;
  virtual Elem mul(Elem x, Elem y) const = 0;
  virtual Elem inv(Elem x) const = 0;
  virtual std::string show(Elem x) const = 0;
  // Members of the absorbing ideal used for "zero-collapsing" products.
  virtual bool degenerate(Elem x) const { return is_zero(x); }
  // Full element list when it is known a priori (structural monoids).
  virtual std::optional<std::vector<Elem>> all_elements() const { return std::nullopt; }

  bool is_zero(Elem x) const {
    auto z = zero();
    return z && *z == x;
  }
  Elem mul(const std::vector<Elem>& xs) const;
};

using MonoidPtr = std::shared_ptr<const Monoid>;

// {1,0} ∪ L×L with (a,b)(c,d) = (a,d) when the adjacency bc is allowed, else 0.
// Covers both the reduced-word monoid of a free group and the geodesic monoid
// of a free product.
class AdjacencyMonoid : public Monoid {
 public:
  AdjacencyMonoid(std::vector<std::string> letter_names, std::vector<int> partner,
                  std::vector<std::vector<bool>> allowed);
  Elem one() const override { return 0; }
  std::optional<Elem> zero() const override { return 1; }
  Elem mul(Elem x, Elem y) const override;
  Elem inv(Elem x) const override;
  std::string show(Elem x) const override;
  std::optional<std::vector<Elem>> all_elements() const override;

  std::size_t letter_count() const { return names_.size(); }
  Elem pair(int first, int last) const { return 2 + static_cast<Elem>(first * names_.size() + last); }
  int first(Elem x) const { return static_cast<int>((x - 2) / names_.size()); }
  int last(Elem x) const { return static_cast<int>((x - 2) % names_.size()); }
  std::size_t size() const { return 2 + names_.size() * names_.size(); }

 private:
  std::vector<std::string> names_;
  std::vector<int> partner_;
  std::vector<std::vector<bool>> allowed_;
};

// n×n Boolean matrices (n ≤ 64) under product; involution is transposition.
class BoolMatrixMonoid : public Monoid {
 public:
  using Matrix = std::vector<std::uint64_t>;
  explicit BoolMatrixMonoid(int n);
  Elem one() const override { return one_; }
  std::optional<Elem> zero() const override { return zero_; }
  Elem mul(Elem x, Elem y) const override;
  Elem inv(Elem x) const override;
  std::string show(Elem x) const override;

  int dim() const { return n_; }
  Elem intern(const Matrix& m) const;
  const Matrix& matrix(Elem x) const { return mats_.at(x); }
  bool entry(Elem x, int i, int j) const { return (mats_.at(x)[i] >> j) & 1u; }
  std::size_t interned() const { return mats_.size(); }

 private:
  int n_;
  mutable std::vector<Matrix> mats_;
  mutable std::map<Matrix, Elem> index_;
  mutable std::unordered_map<std::uint64_t, Elem> memo_;
  Elem one_ = 0, zero_ = 0;
};

// Finite group (or monoid) given by a multiplication table; element 0 is the identity.
class TableMonoid : public Monoid {
 public:
  TableMonoid(std::vector<std::string> names, std::vector<std::vector<int>> table, std::vector<int> involution);
  Elem one() const override { return 0; }
  std::optional<Elem> zero() const override { return zero_; }
  Elem mul(Elem x, Elem y) const override { return static_cast<Elem>(table_.at(x).at(y)); }
  Elem inv(Elem x) const override { return static_cast<Elem>(inv_.at(x)); }
  std::string show(Elem x) const override { return names_.at(x); }
  std::optional<std::vector<Elem>> all_elements() const override;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
  std::optional<Elem> zero_;
};

// Direct product. Components flagged as structural collapse the whole tuple to a
// single zero element whenever they are degenerate.
class ProductMonoid : public Monoid {
 public:
  ProductMonoid(std::vector<MonoidPtr> parts, std::vector<bool> structural);
  Elem one() const override { return one_; }
  std::optional<Elem> zero() const override { return zero_; }
  Elem mul(Elem x, Elem y) const override;
  Elem inv(Elem x) const override;
  std::string show(Elem x) const override;
  std::optional<std::vector<Elem>> all_elements() const override;

  Elem make(const std::vector<Elem>& comps) const;
  const std::vector<Elem>& components(Elem x) const { return tuples_.at(x); }
  bool collapsed_zero(Elem x) const { return collapsing_ && x == *zero_; }
  std::size_t arity() const { return parts_.size(); }
  const MonoidPtr& part(std::size_t i) const { return parts_.at(i); }

 private:
  std::vector<MonoidPtr> parts_;
  std::vector<bool> structural_;
  bool collapsing_ = false;
  mutable std::vector<std::vector<Elem>> tuples_;
  mutable std::map<std::vector<Elem>, Elem> index_;
  mutable std::unordered_map<std::uint64_t, Elem> memo_;
  Elem one_ = 0;
  std::optional<Elem> zero_;
};

// M × Mᵀ with (x1,y1)(x2,y2) = (x1x2, y2y1) and involution (x,y) ↦ (y,x).
class DualMonoid : public Monoid {
 public:
  explicit DualMonoid(MonoidPtr base);
  Elem one() const override { return one_; }
  std::optional<Elem> zero() const override { return zero_; }
  Elem mul(Elem x, Elem y) const override;
  Elem inv(Elem x) const override;
  std::string show(Elem x) const override;
  bool degenerate(Elem x) const override;

  Elem make(Elem left, Elem right) const;
  Elem left(Elem x) const { return pairs_.at(x).first; }
  Elem right(Elem x) const { return pairs_.at(x).second; }
  const MonoidPtr& base() const { return base_; }

 private:
  MonoidPtr base_;
  mutable std::vector<std::pair<Elem, Elem>> pairs_;
  mutable std::map<std::pair<Elem, Elem>, Elem> index_;
  mutable std::unordered_map<std::uint64_t, Elem> memo_;
  Elem one_ = 0;
  std::optional<Elem> zero_;
};

// Letter-to-element assignment extended to words.
struct ConstraintMorphism {
  MonoidPtr monoid;
  std::unordered_map<Sym, Elem> images;

  Elem eval(const Word& w) const;
  Elem at(Sym s) const;
  bool maps(Sym s) const { return images.count(s) > 0; }
  bool respects_involution(const Alphabet& alph) const;
};

// The free-group reduced-word monoid over `letters` (closed under partner, no
// self-involuting letter). μ₀(#) = 0 and μ₀(a) = (a,a).
struct ReducedWordMonoid {
  std::shared_ptr<AdjacencyMonoid> monoid;
  ConstraintMorphism mu0;
  std::unordered_map<Sym, int> index;
};
ReducedWordMonoid build_reduced_word_monoid(const Alphabet& alph, const std::vector<Sym>& letters);

// Product of two morphisms on the same alphabet.
ConstraintMorphism product_morphism(const std::vector<const ConstraintMorphism*>& parts,
                                    const std::vector<bool>& structural);

// Involutive lift x ↦ (ρ(x), ρ(x̄)) of an arbitrary homomorphism given on letters.
ConstraintMorphism dual_lift(const Alphabet& alph, MonoidPtr base,
                             const std::unordered_map<Sym, Elem>& rho);

// Breadth-first closure of a generating set (identity included).
std::vector<Elem> generated_submonoid(const Monoid& m, const std::vector<Elem>& gens,
                                      std::size_t cap = 100000);

// Exhaustive associativity / involution checks on a finite element set.
struct AxiomReport {
  bool associative = true;
  bool involution = true;
  bool identity = true;
  bool zero_absorbing = true;
};
AxiomReport check_axioms(const Monoid& m, const std::vector<Elem>& elems);

}  // namespace weq
