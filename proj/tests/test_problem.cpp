#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "weq/oracle.hpp"
#include "weq/problem.hpp"

using namespace weq;

TEST(Parse, MinimalFreeMonoidProblem) {
  auto p = parse_problem("mode free-monoid\nfactor free-monoid a b\nvars X\neq a X = X a\n");
  EXPECT_EQ(p.mode, Mode::FreeMonoid);
  ASSERT_EQ(p.clauses.size(), 1u);
  EXPECT_EQ(p.clauses[0][0].lhs, (std::vector<std::string>{"a", "X"}));
}

TEST(Parse, DuplicateVariableRejected) {
  try {
    parse_problem("mode free-monoid\nfactor free-monoid a\nvars X X\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 3);
    EXPECT_GT(e.col, 1);
  }
}

TEST(Parse, MissingModeRejected) { EXPECT_THROW(parse_problem("vars X\n"), ParseError); }

TEST(Parse, UnknownDirectiveReportsPosition) {
  try {
    parse_problem("mode free-group\nfactor free-group a\nfrob X\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 3);
    EXPECT_EQ(e.col, 1);
  }
}

TEST(Parse, RoundTripOnCorpus) {
  for (const auto& f : weq::testing::corpus_files()) {
    auto p = parse_problem(weq::testing::read_file(weq::testing::corpus_path(f)));
    EXPECT_EQ(parse_problem(print_problem(p)), p) << f;
  }
}

TEST(Parse, RoundTripOnRandomProblems) {
  std::mt19937 rng(21);
  const std::vector<std::string> letters{"a", "b"};
  const std::vector<std::string> vars{"X", "Y", "Z"};
  for (int i = 0; i < 200; ++i) {
    ProblemText p;
    p.mode = static_cast<Mode>(rng() % 2);
    FactorDecl f;
    f.kind = p.mode == Mode::FreeGroup ? FactorKind::FreeGroup : FactorKind::FreeMonoid;
    f.letters = letters;
    p.factors.push_back(f);
    p.vars = vars;
    AutomatonDecl a;
    a.name = "A";
    a.states = 2;
    a.initial = {0};
    a.final = {1};
    a.edges = {{0, "a", 1}, {1, "b", 1}};
    p.automata.push_back(a);
    auto word = [&] {
      std::vector<std::string> w(rng() % 4);
      for (auto& t : w) t = rng() % 2 ? letters[rng() % 2] : vars[rng() % 3];
      return w;
    };
    const int clauses = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < clauses; ++c) {
      std::vector<AtomDecl> clause;
      const int opts = 1 + static_cast<int>(rng() % 2);
      for (int o = 0; o < opts; ++o) {
        AtomDecl at;
        switch (rng() % 3) {
          case 0:
            at.kind = AtomDecl::Kind::Eq;
            at.lhs = word();
            at.rhs = word();
            break;
          case 1:
            at.kind = AtomDecl::Kind::Neq;
            at.lhs = word();
            at.rhs = word();
            break;
          default:
            at.kind = rng() % 2 ? AtomDecl::Kind::In : AtomDecl::Kind::NotIn;
            at.var = vars[rng() % 3];
            at.automaton = "A";
            if (rng() % 2) at.element = std::vector<std::string>{"a", "b"};
        }
        clause.push_back(at);
      }
      p.clauses.push_back(clause);
    }
    if (rng() % 2) p.targets = {"Y", "X"};
    EXPECT_EQ(parse_problem(print_problem(p)), p) << print_problem(p);
  }
}

TEST(Formula, SingleEquationIsOneBranch) {
  Problem p = load_problem("mode free-monoid\nfactor free-monoid a b\nvars X\neq a X = X a\n");
  auto branches = normalize_formula(p);
  ASSERT_EQ(branches.size(), 1u);
  ASSERT_EQ(branches[0].size(), 1u);
  EXPECT_EQ(branches[0][0], p.clauses[0][0]);
}

TEST(Formula, NegatedMembershipSplitsOverOtherElements) {
  // ρ(a*) = {1, ρ(a), 0}: three elements
  Problem p = load_problem(
      "mode free-monoid\nfactor free-monoid a\nvars X\n"
      "automaton A states 2 init 0 final 1 edges 0:a:1\n"
      "constraint X notin A:a\n");
  ASSERT_EQ(p.automata.at(0).elements.size(), 3u);
  auto branches = normalize_formula(p);
  EXPECT_EQ(branches.size(), 2u);
}

TEST(Formula, DisjunctionDistributesOverConjunction) {
  Problem p = load_problem(
      "mode free-monoid\nfactor free-monoid a b\nvars X Y\n"
      "either eq X = a | eq X = Y\n"
      "eq Y b = b Y\n");
  auto branches = normalize_formula(p);
  ASSERT_EQ(branches.size(), 2u);
  auto res = solve_bruteforce(p, branches, 3);
  // direct evaluation of the formula on every pair of words
  std::set<std::string> direct;
  const Sym a = p.alph->lookup("a"), b = p.alph->lookup("b");
  for (const Word& x : weq::testing::all_words(p.letters(), 3))
    for (const Word& y : weq::testing::all_words(p.letters(), 3)) {
      const bool first = x == Word{a} || x == y;
      const bool second = concat(y, {b}) == concat({b}, y);
      if (first && second) direct.insert(format_tuple(*p.alph, {x, y}));
    }
  EXPECT_EQ(std::set<std::string>(res.tuples.begin(), res.tuples.end()), direct);
}

TEST(Formula, ContradictoryMembershipsDropped) {
  Problem p = load_problem(
      "mode free-monoid\nfactor free-monoid a\nvars X\n"
      "automaton A states 2 init 0 final 1 edges 0:a:1\n"
      "constraint X in A:a\nconstraint X in A:1\n");
  EXPECT_TRUE(normalize_formula(p).empty());
}

TEST(Format, EmptyWordPrintsAsOne) {
  Problem p = load_problem("mode free-monoid\nfactor free-monoid a\nvars X Y\neq X = a\n");
  const Sym a = p.alph->lookup("a");
  EXPECT_EQ(format_tuple(*p.alph, {{a, a}, {}}), "aa#1");
}
