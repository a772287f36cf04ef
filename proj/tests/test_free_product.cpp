#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "weq/free_product.hpp"

using namespace weq;
using weq::oracles::all_words;

namespace {

const std::vector<std::vector<int>> kZ2{{0, 1}, {1, 0}};
const std::vector<std::vector<int>> kZ3{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};

struct Z2Z3 {
  Alphabet alph;
  FreeProductSpec spec;
  Sym s, t, u;
  Z2Z3() {
    spec.add_finite_group(alph, "Z2", {"e", "s"}, kZ2);
    spec.add_finite_group(alph, "Z3", {"f", "t", "u"}, kZ3);
    s = alph.lookup("s");
    t = alph.lookup("t");
    u = alph.lookup("u");
  }
};

struct FreeGroup2 {
  Alphabet alph;
  FreeProductSpec spec;
  Sym a, ab, b, bb;
  FreeGroup2() {
    spec.add_free_group(alph, {"a", "b"});
    a = alph.lookup("a");
    ab = alph.lookup("a'");
    b = alph.lookup("b");
    bb = alph.lookup("b'");
  }
};

Word opt(Sym x) { return x >= 0 ? Word{x} : Word{}; }

}  // namespace

TEST(FreeProduct, FreeGroupCancellingPairNotAdjacent) {
  FreeGroup2 g;
  EXPECT_FALSE(g.spec.adjacent_ok(g.a, g.ab));
  EXPECT_TRUE(g.spec.adjacent_ok(g.a, g.b));
}

TEST(FreeProduct, SameFiniteFactorNotAdjacent) {
  Z2Z3 g;
  EXPECT_FALSE(g.spec.adjacent_ok(g.t, g.u));
  EXPECT_FALSE(g.spec.adjacent_ok(g.t, g.t));
  EXPECT_TRUE(g.spec.adjacent_ok(g.s, g.t));
}

TEST(FreeProduct, FreeMonoidPairMayBeAdjacent) {
  Alphabet alph;
  FreeProductSpec spec;
  spec.add_free_monoid(alph, {"c"}, {});
  const Sym c = alph.lookup("c"), cb = alph.lookup("c'");
  EXPECT_TRUE(spec.adjacent_ok(c, cb));
}

TEST(FreeProduct, FiniteFactorMultiplication) {
  Z2Z3 g;
  EXPECT_EQ(g.spec.multiply_letters(g.t, g.t), Word{g.u});
  EXPECT_TRUE(g.spec.multiply_letters(g.t, g.u).empty());
}

TEST(FreeProduct, FreeGroupPairCancels) {
  FreeGroup2 g;
  EXPECT_TRUE(g.spec.normal_form({g.a, g.ab}).empty());
}

TEST(FreeProduct, NormalFormMatchesMatrixModel) {
  Z2Z3 g;
  oracles::Psl2Model model(g.s, g.t, g.u);
  const std::vector<Sym> letters{g.s, g.t, g.u};
  std::map<oracles::Mat, std::size_t> shortest;
  for (const Word& w : all_words(letters, 6)) shortest.emplace(model.eval(w), w.size());
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    Word w(rng() % 7);
    for (Sym& x : w) x = letters[rng() % 3];
    const Word nf = g.spec.normal_form(w);
    EXPECT_EQ(model.eval(nf), model.eval(w));
    EXPECT_TRUE(g.spec.is_geodesic(nf));
    EXPECT_EQ(nf.size(), shortest.at(model.eval(w)));
  }
}

TEST(FreeProduct, ConstraintMonoidDetectsGeodesics) {
  Alphabet alph;
  FreeProductSpec spec;
  spec.add_finite_group(alph, "Z2", {"e", "s"}, kZ2);
  spec.add_free_monoid(alph, {"c"}, {});
  const Sym s = alph.lookup("s");
  auto pc = build_product_constraint_monoid(spec);
  for (const Word& w : all_words(spec.letters(), 4)) {
    bool geodesic = true;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) geodesic = geodesic && !(w[i] == s && w[i + 1] == s);
    EXPECT_EQ(!pc.geodesic->is_zero(pc.psi_f.eval(w)), geodesic) << alph.show(w);
  }
}

TEST(FreeProduct, UnitComponentOnSingleLetters) {
  Alphabet alph;
  FreeProductSpec spec;
  spec.add_finite_group(alph, "Z2", {"e", "s"}, kZ2);
  spec.add_free_monoid(alph, {"c"}, {});
  spec.add_free_group(alph, {"a"});
  auto pc = build_product_constraint_monoid(spec);
  for (Sym x : spec.letters()) EXPECT_EQ(pc.unit_component_one(pc.psi.eval({x})), spec.is_unit(x)) << alph.name(x);
  EXPECT_EQ(pc.psi.eval({}), pc.monoid->one());
}

TEST(Benois, ChainThroughInversePairAddsEmptyMove) {
  FreeGroup2 g;
  Nfa a;
  a.add_state();
  a.add_state();
  a.add_state(true);
  a.initial = {0};
  a.add_edge(0, g.a, 1);
  a.add_edge(1, g.ab, 2);
  Nfa sat = benois_saturate(a, g.spec);
  EXPECT_TRUE(sat.has_edge(0, Nfa::kEps, 2));
  EXPECT_TRUE(sat.accepts({}));
}

TEST(Benois, SaturatedAutomatonUnchanged) {
  FreeGroup2 g;
  Nfa a;
  a.add_state();
  a.add_state(true);
  a.initial = {0};
  a.add_edge(0, g.a, 1);
  a.add_edge(1, g.b, 1);
  std::size_t fired = 1;
  Nfa sat = benois_saturate(a, g.spec, &fired);
  EXPECT_EQ(fired, 0u);
  EXPECT_EQ(sat.edges, a.edges);
}

TEST(Benois, MembershipOfReducedImages) {
  Z2Z3 g;
  std::mt19937 rng(17);
  const auto& letters = g.spec.letters();
  for (int trial = 0; trial < 10; ++trial) {
    Nfa a = oracles::random_nfa(rng, letters, 4);
    Nfa sat = benois_saturate(a, g.spec);
    auto image = oracles::bounded_image(a, g.spec, 12);
    for (int i = 0; i < 100; ++i) {
      Word w(rng() % 6);
      for (Sym& x : w) x = letters[rng() % letters.size()];
      const Word nf = g.spec.normal_form(w);
      EXPECT_EQ(sat.accepts(nf), image.count(nf) > 0);
    }
  }
}

TEST(Benois, ComplementOfEmptyIsEverything) {
  FreeGroup2 g;
  Nfa empty;
  empty.add_state();
  empty.initial = {0};
  Nfa comp = rat_complement(benois_saturate(empty, g.spec), g.spec);
  for (const Word& w : g.spec.geodesics(4)) EXPECT_TRUE(comp.accepts(w));
}

TEST(Benois, BooleanOperationsOnGeodesics) {
  Z2Z3 g;
  std::mt19937 rng(23);
  const auto geos = g.spec.geodesics(5);
  for (int trial = 0; trial < 6; ++trial) {
    Nfa a = benois_saturate(oracles::random_nfa(rng, g.spec.letters(), 4), g.spec);
    Nfa b = benois_saturate(oracles::random_nfa(rng, g.spec.letters(), 4), g.spec);
    Nfa ca = rat_complement(a, g.spec), cb = rat_complement(b, g.spec);
    Nfa both = rat_intersect(a, b, g.spec);
    Nfa c_both = rat_complement(both, g.spec);
    Nfa self = rat_intersect(a, ca, g.spec);
    for (const Word& w : geos) {
      EXPECT_FALSE(self.accepts(w));
      EXPECT_EQ(c_both.accepts(w), ca.accepts(w) || cb.accepts(w));
      EXPECT_EQ(both.accepts(w), a.accepts(w) && b.accepts(w));
    }
  }
}

TEST(Encoding, SelfInvolutingLetterGetsHat) {
  Z2Z3 g;
  const Sym hat = g.spec.info(g.s).hat;
  ASSERT_GE(hat, 0);
  EXPECT_EQ(g.spec.iota({g.s}), (Word{g.s, hat}));
  EXPECT_EQ(g.alph.partner(g.s), hat);
  EXPECT_EQ(g.spec.eta({g.s, hat}), Word{g.s});
}

TEST(Encoding, OtherLettersUnchanged) {
  Z2Z3 g;
  EXPECT_EQ(g.spec.iota({g.t}), Word{g.t});
  EXPECT_EQ(g.spec.iota({g.u}), Word{g.u});
}

TEST(Encoding, RoundTripOnMixedAlphabet) {
  Alphabet alph;
  FreeProductSpec spec;
  spec.add_finite_group(alph, "Z2", {"e", "s"}, kZ2);
  spec.add_free_monoid(alph, {"c", "d"}, {{"d", "d"}});
  spec.add_free_group(alph, {"a"});
  for (const Word& w : all_words(spec.letters(), 5)) {
    const Word e = spec.iota(w);
    EXPECT_EQ(spec.eta(e), w);
    EXPECT_EQ(alph.involute(e), spec.iota(spec.raw_involute(w)));
  }
}

TEST(ProductSplit, FiniteFactorBranch) {
  Z2Z3 g;
  auto sp = split_product(g.spec, {g.t}, {g.t});
  EXPECT_EQ(sp.branch, (EquationBranch{g.u, g.t, g.t}));
  EXPECT_TRUE(sp.P.empty() && sp.Q.empty() && sp.R.empty());
}

TEST(ProductSplit, ExhaustiveOverShortGeodesics) {
  Z2Z3 g;
  const auto geos = g.spec.geodesics(2);
  const auto branches = reduce_equation_over_F(g.spec);
  for (const Word& y : geos)
    for (const Word& z : geos) {
      auto sp = split_product(g.spec, y, z);
      EXPECT_EQ(concat(sp.P, opt(sp.branch.b), sp.R), y);
      EXPECT_EQ(concat(g.spec.raw_involute(sp.R), opt(sp.branch.c), sp.Q), z);
      EXPECT_EQ(concat(sp.P, opt(sp.branch.a), sp.Q), g.spec.normal_form(concat(y, z)));
      EXPECT_TRUE(g.spec.is_geodesic(concat(sp.P, opt(sp.branch.a), sp.Q)));
      EXPECT_NE(std::find(branches.begin(), branches.end(), sp.branch), branches.end());
    }
}

TEST(ProductSplit, FreeGroupHasNoMiddleLetters) {
  FreeGroup2 g;
  for (const Word& y : g.spec.geodesics(2))
    for (const Word& z : g.spec.geodesics(2)) {
      auto sp = split_product(g.spec, y, z);
      EXPECT_EQ(sp.branch, (EquationBranch{-1, -1, -1}));
      EXPECT_EQ(concat(sp.P, sp.Q), oracles::stack_reduce(g.alph, concat(y, z)));
    }
}

TEST(InequalitySplit, EqualWordsHaveNoBranch) {
  Z2Z3 g;
  EXPECT_FALSE(split_inequality({g.s, g.t}, {g.s, g.t}).has_value());
}

TEST(InequalitySplit, EmptyVersusLetter) {
  Alphabet alph;
  FreeProductSpec spec;
  spec.add_finite_group(alph, "Z3", {"f", "t", "u"}, kZ3);
  spec.add_free_group(alph, {"a"});
  auto sp = split_inequality({}, {alph.lookup("t")});
  ASSERT_TRUE(sp.has_value());
  EXPECT_EQ(sp->branch.shape, NeqShape::LeftPrefix);
}

TEST(InequalitySplit, ExhaustiveShapes) {
  Z2Z3 g;
  const auto geos = g.spec.geodesics(2);
  for (const Word& x : geos)
    for (const Word& y : geos) {
      auto sp = split_inequality(x, y);
      ASSERT_EQ(sp.has_value(), x != y);
      if (!sp) continue;
      switch (sp->branch.shape) {
        case NeqShape::Differ:
          EXPECT_NE(sp->branch.b, sp->branch.c);
          EXPECT_EQ(concat(sp->P, {sp->branch.b}, sp->Q), x);
          EXPECT_EQ(concat(sp->P, {sp->branch.c}, sp->R), y);
          break;
        case NeqShape::LeftPrefix:
          EXPECT_EQ(concat(x, {sp->branch.b}, sp->R), y);
          break;
        case NeqShape::RightPrefix:
          EXPECT_EQ(concat(y, {sp->branch.b}, sp->R), x);
          break;
      }
    }
}
