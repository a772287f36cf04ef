#include <gtest/gtest.h>

#include "common.hpp"
#include "weq/oracle.hpp"
#include "weq/reduction.hpp"
#include "weq/trace.hpp"

using namespace weq;

namespace {

std::size_t variable_pairs(const Alphabet& alph) {
  std::size_t n = 0;
  for (Sym s = 0; static_cast<std::size_t>(s) < alph.size(); ++s) n += alph.is_variable(s);
  return n / 2;
}

}  // namespace

TEST(Triangulation, ProjectionMatchesOriginalSolutions) {
  Problem p = load_problem("mode free-group\nfactor free-group a\nvars X\neq a X = X a\n");
  Alphabet& alph = *p.alph;
  const Sym X = p.vars[0], a = alph.lookup("a");
  auto tr = triangulate(alph, {a, X}, {X, a}, "0");
  const auto words = oracles::all_words(p.letters(), 3);
  std::set<Word> original, projected;
  for (const Word& x : words) {
    if (oracles::stack_reduce(alph, x) != x) continue;
    if (oracles::stack_reduce(alph, concat({a}, x)) == oracles::stack_reduce(alph, concat(x, {a})))
      original.insert(x);
    for (const Word& y : words) {
      if (oracles::stack_reduce(alph, y) != y || y.size() > 2) continue;
      std::map<Sym, Word> val{{X, x}, {tr.unit, y}};
      auto value = [&](Sym s) -> Word {
        if (!alph.is_variable(s)) return {s};
        auto it = val.find(s);
        if (it != val.end()) return it->second;
        auto jt = val.find(alph.partner(s));
        if (jt == val.end()) throw Error("undefined");
        return oracles::stack_reduce(alph, alph.involute(jt->second));
      };
      bool ok = true;
      for (const auto& t : tr.triangles) {
        Word v = oracles::stack_reduce(alph, concat(value(t.y), value(t.z)));
        auto it = val.find(t.x);
        if (it == val.end())
          val[t.x] = v;
        else
          ok = ok && it->second == v;
      }
      if (ok) projected.insert(x);
    }
  }
  EXPECT_EQ(projected, original);
}

TEST(Triangulation, SingleVariableBothSides) {
  Problem p = load_problem("mode free-group\nfactor free-group a\nvars X\neq X = X\n");
  auto res = solve_bruteforce(p, 2);
  std::vector<std::string> all;
  for (const Word& w : enumerate_reduced(p, 2)) all.push_back(format_word(*p.alph, w));
  sort_tuples(all);
  EXPECT_EQ(res.tuples, all);
}

TEST(Triangulation, FreshVariableCount) {
  Problem p = load_problem("mode free-group\nfactor free-group a b\nvars X Y\neq X a Y = Y b X\n");
  Alphabet& alph = *p.alph;
  const std::size_t before = variable_pairs(alph);
  auto tr = triangulate(alph, p.clauses[0][0].lhs, p.clauses[0][0].rhs, "0");
  EXPECT_LE(variable_pairs(alph) - before, 6u + 2u);
  for (const auto& t : tr.triangles) EXPECT_TRUE(alph.is_variable(t.x));
}

TEST(GroupSplit, NoCancellation) {
  Problem p = load_problem("mode free-group\nfactor free-group a b\nvars X\neq X = X\n");
  const Sym a = p.alph->lookup("a"), b = p.alph->lookup("b");
  auto s = split_reduced(*p.alph, {a}, {b});
  EXPECT_EQ(s.P, Word{a});
  EXPECT_TRUE(s.Q.empty());
  EXPECT_EQ(s.R, Word{b});
}

TEST(GroupSplit, FullCancellation) {
  Problem p = load_problem("mode free-group\nfactor free-group a b\nvars X\neq X = X\n");
  const Sym a = p.alph->lookup("a"), ab = p.alph->lookup("a'");
  auto s = split_reduced(*p.alph, {a}, {ab});
  EXPECT_TRUE(s.P.empty());
  EXPECT_EQ(s.Q, Word{a});
  EXPECT_TRUE(s.R.empty());
}

TEST(GroupSplit, ExhaustiveShortTriples) {
  Problem p = load_problem("mode free-group\nfactor free-group a b\nvars X\neq X = X\n");
  const Alphabet& alph = *p.alph;
  const auto reduced = enumerate_reduced(p, 2);
  for (const Word& y : reduced)
    for (const Word& z : reduced) {
      const Word x = oracles::stack_reduce(alph, concat(y, z));
      auto s = split_reduced(alph, y, z);
      EXPECT_EQ(concat(s.P, s.R), x);
      EXPECT_EQ(concat(s.P, s.Q), y);
      EXPECT_EQ(concat(alph.involute(s.Q), s.R), z);
    }
}

TEST(InitialWord, MarkerCount) {
  Problem p = load_problem("mode free-monoid\nfactor free-monoid a\nvars X Y\neq X = Y\n");
  const Sym X = p.vars[0], Y = p.vars[1];
  Word W = build_initial_word(*p.alph, {X, Y}, {{{X}, {Y}}});
  const auto markers = std::count(W.begin(), W.end(), Alphabet::kMarker);
  EXPECT_EQ(markers, 9);
}

TEST(InitialWord, WitnessInstanceIsWellFormedAndPalindromic) {
  for (const char* name : {"fm_x_ab.weq", "fg_x_ab.weq", "fp_z2z3_x.weq"}) {
    Problem p = load_problem(weq::testing::read_file(weq::testing::corpus_path(name)));
    auto branches = normalize_formula(p);
    auto res = solve_bruteforce(p, branches, 3);
    ASSERT_EQ(res.solutions.size(), 1u) << name;
    SolverContext ctx = make_context(p);
    auto wi = build_witness_instance(ctx, branches[0], res.solutions[0].values);
    std::vector<Sym> B(ctx.letters);
    B.push_back(Alphabet::kMarker);
    std::unordered_map<Sym, Elem> mu(wi.mu.begin(), wi.mu.end());
    WellFormedLimits lim{wi.n, 100, wi.markers, ctx.letters};
    auto rep = check_well_formed(*p.alph, wi.W, B, wi.vars, {}, *ctx.mu0.monoid, mu, lim);
    EXPECT_TRUE(rep.ok()) << name << ": " << (rep.ok() ? "" : rep.issues[0]);
    for (Sym a : ctx.letters) {
      const Word f{Alphabet::kMarker, a, Alphabet::kMarker};
      EXPECT_NE(std::search(wi.W.begin(), wi.W.end(), f.begin(), f.end()), wi.W.end());
    }
    Word sw;
    for (Sym s : wi.W) {
      if (p.alph->is_variable(s))
        sw.insert(sw.end(), wi.sigma.at(s).begin(), wi.sigma.at(s).end());
      else
        sw.push_back(s);
    }
    EXPECT_EQ(sw, p.alph->involute(sw)) << name;
  }
}

TEST(MuGuess, NoVariablesGivesOneAssignment) {
  Problem p = load_problem("mode free-group\nfactor free-group a\nvars X\neq X = X\n");
  SolverContext ctx = make_context(p);
  const Sym a = p.alph->lookup("a");
  EXPECT_EQ(guess_mu_init(ctx, {{{a}, {a}}}, {}).size(), 1u);
}

TEST(MuGuess, OneVariableRankOne) {
  Problem p = load_problem("mode free-group\nfactor free-group a\nvars X\neq X = X\n");
  SolverContext ctx = make_context(p);
  const Sym X = p.vars[0];
  std::vector<Elem> gens;
  for (Sym x : ctx.letters) gens.push_back(ctx.mu0.at(x));
  const auto generated = generated_submonoid(*ctx.mu0.monoid, gens);
  auto got = guess_mu_init(ctx, {{{X}, {X}}}, {X, p.alph->partner(X)});
  EXPECT_EQ(got.size(), generated.size() - 1);
}

TEST(MuGuess, PruningKeepsOracleSolutions) {
  for (const char* name : {"fm_commute_a.weq", "fm_neq.weq", "fm_even.weq"}) {
    Problem p = load_problem(weq::testing::read_file(weq::testing::corpus_path(name)));
    auto branches = normalize_formula(p);
    auto res = solve_bruteforce(p, branches, 4);
    SolverContext ctx = make_context(p);
    for (const auto& sol : res.solutions) {
      auto wi = build_witness_instance(ctx, branches[sol.branch], sol.values);
      auto guesses = guess_mu_init(ctx, wi.equations, wi.vars);
      bool found = false;
      for (const auto& g : guesses) {
        bool same = true;
        for (Sym v : wi.vars) same = same && g.at(v) == wi.mu.at(v);
        found = found || same;
      }
      EXPECT_TRUE(found) << name << " " << format_tuple(*p.alph, sol.values);
    }
  }
}
