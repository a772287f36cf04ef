#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "weq/automaton.hpp"
#include "weq/monoid.hpp"

using namespace weq;
using weq::testing::all_words;

namespace {

struct RwSetup {
  Alphabet alph;
  Sym a, ab, b, bb;
  ReducedWordMonoid rw;
  RwSetup() {
    a = alph.add_pair("a", "a'", SymKind::Constant);
    ab = a + 1;
    b = alph.add_pair("b", "b'", SymKind::Constant);
    bb = b + 1;
    rw = build_reduced_word_monoid(alph, {a, ab, b, bb});
  }
  bool zero(const Word& w) const { return rw.monoid->is_zero(rw.mu0.eval(w)); }
};

}  // namespace

TEST(ReducedWordMonoid, CancellingPairIsZero) {
  RwSetup s;
  EXPECT_TRUE(s.zero({s.a, s.ab}));
}

TEST(ReducedWordMonoid, EmptyWordIsIdentity) {
  RwSetup s;
  EXPECT_EQ(s.rw.mu0.eval({}), s.rw.monoid->one());
}

TEST(ReducedWordMonoid, ProductKeepsEndLetters) {
  RwSetup s;
  const Elem e = s.rw.mu0.eval({s.a, s.b});
  EXPECT_EQ(e, s.rw.monoid->pair(s.rw.index.at(s.a), s.rw.index.at(s.b)));
}

TEST(ReducedWordMonoid, MarkerIsZero) {
  RwSetup s;
  EXPECT_TRUE(s.zero({Alphabet::kMarker}));
}

TEST(ReducedWordMonoid, NonzeroExactlyOnReducedWordsUpToThree) {
  RwSetup s;
  std::vector<Sym> letters{Alphabet::kMarker, s.a, s.ab, s.b, s.bb};
  for (const Word& w : all_words(letters, 3)) {
    const bool has_marker = std::count(w.begin(), w.end(), Alphabet::kMarker) > 0;
    const bool reduced = weq::testing::stack_reduce(s.alph, w).size() == w.size();
    EXPECT_EQ(!s.zero(w), reduced && !has_marker) << s.alph.show(w);
  }
}

TEST(ReducedWordMonoid, InvolutionIsAntiAutomorphism) {
  RwSetup s;
  const auto& m = *s.rw.monoid;
  auto elems = *m.all_elements();
  for (Elem x : elems)
    for (Elem y : elems) EXPECT_EQ(m.inv(m.mul(x, y)), m.mul(m.inv(y), m.inv(x)));
  auto rep = check_axioms(m, elems);
  EXPECT_TRUE(rep.associative && rep.involution && rep.identity && rep.zero_absorbing);
}

TEST(ProductMonoid, IdentityIsPairOfIdentities) {
  RwSetup s;
  auto two = std::make_shared<TableMonoid>(std::vector<std::string>{"1", "0"},
                                           std::vector<std::vector<int>>{{0, 1}, {1, 1}}, std::vector<int>{0, 1});
  ProductMonoid p({two, two}, {false, false});
  EXPECT_EQ(p.components(p.one()), (std::vector<Elem>{0, 0}));
  const Elem zx = p.make({1, 0}), yz = p.make({0, 1});
  EXPECT_EQ(p.components(p.mul(zx, yz)), (std::vector<Elem>{1, 1}));
}

TEST(ProductMonoid, RecognisesIntersection) {
  RwSetup s;
  const std::vector<Sym> letters{s.a, s.b};
  Nfa even;  // even number of a
  even.add_state(true);
  even.add_state(false);
  even.initial = {0};
  even.add_edge(0, s.a, 1);
  even.add_edge(1, s.a, 0);
  even.add_edge(0, s.b, 0);
  even.add_edge(1, s.b, 1);
  Nfa ends_b;  // ends with b
  ends_b.add_state(false);
  ends_b.add_state(true);
  ends_b.initial = {0};
  for (Sym x : letters) ends_b.add_edge(0, x, 0);
  ends_b.add_edge(0, s.b, 1);
  auto r1 = boolean_matrix_morphism(even, letters);
  auto r2 = boolean_matrix_morphism(ends_b, letters);
  ConstraintMorphism m1{r1.monoid, r1.images}, m2{r2.monoid, r2.images};
  auto prod = product_morphism({&m1, &m2}, {false, false});
  auto* pm = dynamic_cast<const ProductMonoid*>(prod.monoid.get());
  ASSERT_NE(pm, nullptr);
  for (const Word& w : all_words(letters, 4)) {
    const auto& c = pm->components(prod.eval(w));
    EXPECT_EQ(r1.accepting(c[0]) && r2.accepting(c[1]), even.accepts(w) && ends_b.accepts(w));
  }
}

TEST(DualMonoid, InvolutionSwapsComponents) {
  auto two = std::make_shared<TableMonoid>(std::vector<std::string>{"1", "0"},
                                           std::vector<std::vector<int>>{{0, 1}, {1, 1}}, std::vector<int>{0, 1});
  DualMonoid d(two);
  const Elem x = d.make(1, 0);
  const Elem y = d.inv(x);
  EXPECT_EQ(d.left(y), 0u);
  EXPECT_EQ(d.right(y), 1u);
}

TEST(DualMonoid, AntiAutomorphismOnSmallBase) {
  // base: 2×2 Boolean matrices generated by two matrix units
  auto base = std::make_shared<BoolMatrixMonoid>(2);
  const Elem e01 = base->intern({0b10, 0b00});
  const Elem e10 = base->intern({0b00, 0b01});
  auto gens_base = generated_submonoid(*base, {e01, e10});
  ASSERT_LE(gens_base.size(), 6u);
  DualMonoid d(base);
  std::vector<Elem> gens;
  for (Elem x : gens_base)
    for (Elem y : gens_base) gens.push_back(d.make(x, y));
  auto elems = generated_submonoid(d, gens);
  for (Elem x : elems)
    for (Elem y : elems) {
      EXPECT_EQ(d.inv(d.mul(x, y)), d.mul(d.inv(y), d.inv(x)));
      EXPECT_EQ(d.inv(d.inv(x)), x);
    }
}

TEST(MatrixRecognizer, SelfLoopIsOne) {
  RwSetup s;
  Nfa n;
  n.add_state(true);
  n.initial = {0};
  n.add_edge(0, s.a, 0);
  auto r = boolean_matrix_morphism(n, {s.a});
  EXPECT_TRUE(r.monoid->entry(r.images.at(s.a), 0, 0));
  EXPECT_EQ(r.images.at(s.a), r.monoid->one());
}

TEST(MatrixRecognizer, ChainIsStrictlyUpperTriangular) {
  RwSetup s;
  Nfa n;
  n.add_state(false);
  n.add_state(true);
  n.initial = {0};
  n.add_edge(0, s.a, 1);
  auto r = boolean_matrix_morphism(n, {s.a});
  const Elem x = r.images.at(s.a);
  EXPECT_TRUE(r.monoid->entry(x, 0, 1));
  EXPECT_FALSE(r.monoid->entry(x, 1, 0));
  EXPECT_FALSE(r.monoid->entry(x, 0, 0));
  EXPECT_FALSE(r.monoid->entry(x, 1, 1));
}

TEST(MatrixRecognizer, AgreesWithSimulationOnRandomWords) {
  RwSetup s;
  std::mt19937 rng(11);
  const std::vector<Sym> letters{s.a, s.b};
  for (int trial = 0; trial < 5; ++trial) {
    Nfa n;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) n.add_state(rng() % 2);
    n.initial = {0};
    for (int i = 0; i < k; ++i)
      for (Sym x : letters)
        for (int j = 0; j < k; ++j)
          if (rng() % 3 == 0) n.add_edge(i, x, j);
    auto r = boolean_matrix_morphism(n, letters);
    for (int i = 0; i < 50; ++i) {
      Word w(rng() % 7);
      for (Sym& x : w) x = letters[rng() % 2];
      EXPECT_EQ(r.accepting(r.eval(w)), n.accepts(w));
    }
  }
}
