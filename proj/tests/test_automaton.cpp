#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "weq/automaton.hpp"

using namespace weq;
using weq::testing::all_words;

namespace {

// Direct subset simulation, independent of Nfa::accepts.
bool simulate(const Nfa& a, const Word& w) {
  auto cl = a.eps_closure();
  std::vector<bool> cur(a.states, false);
  for (int i : a.initial)
    for (int q = 0; q < a.states; ++q)
      if (cl[i][q]) cur[q] = true;
  for (Sym x : w) {
    std::vector<bool> next(a.states, false);
    for (const auto& e : a.edges)
      if (e.label == x && cur[e.from])
        for (int q = 0; q < a.states; ++q)
          if (cl[e.to][q]) next[q] = true;
    cur = next;
  }
  for (int q = 0; q < a.states; ++q)
    if (cur[q] && a.final[q]) return true;
  return false;
}

}  // namespace

TEST(Nfa, EmptyMovesAreFollowed) {
  Nfa a;
  a.add_state();
  a.add_state();
  a.add_state(true);
  a.initial = {0};
  a.add_edge(0, Nfa::kEps, 1);
  a.add_edge(1, 5, 2);
  EXPECT_TRUE(a.accepts({5}));
  EXPECT_FALSE(a.accepts({}));
  Nfa b = remove_eps(a);
  EXPECT_FALSE(b.has_eps());
  EXPECT_TRUE(b.accepts({5}));
  EXPECT_FALSE(b.accepts({}));
}

TEST(Nfa, RandomBooleanOperationsAgreeWithSimulation) {
  std::mt19937 rng(3);
  const std::vector<Sym> letters{1, 2};
  for (int trial = 0; trial < 20; ++trial) {
    Nfa a = oracles::random_nfa(rng, letters, 4), b = oracles::random_nfa(rng, letters, 4);
    if (trial % 2) a.add_edge(0, Nfa::kEps, a.states - 1);
    const Nfa ea = remove_eps(a), eb = remove_eps(b);
    const Nfa inter = intersect(ea, eb), comp = complement(ea, letters);
    for (const Word& w : all_words(letters, 5)) {
      const bool in_a = simulate(a, w), in_b = simulate(b, w);
      EXPECT_EQ(ea.accepts(w), in_a);
      EXPECT_EQ(inter.accepts(w), in_a && in_b);
      EXPECT_EQ(comp.accepts(w), !in_a);
    }
  }
}
