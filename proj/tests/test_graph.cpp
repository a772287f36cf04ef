#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "weq/graph.hpp"

using namespace weq;

namespace {

constexpr Sym H = Alphabet::kMarker;

// Letters a, b with the free-group reduced-word monoid, a spare pair c and a
// variable pair X.
struct Fixture {
  Alphabet alph;
  Sym a, ab, b, bb, c, cb, x, xb;
  ReducedWordMonoid rw;
  WellFormedLimits lim;
  Fixture() {
    a = alph.add_pair("a", "a'", SymKind::Constant);
    ab = a + 1;
    b = alph.add_pair("b", "b'", SymKind::Constant);
    bb = b + 1;
    c = alph.add_pair("c", "c'", SymKind::Constant);
    cb = c + 1;
    x = alph.add_pair("X", "X'", SymKind::Variable);
    xb = x + 1;
    rw = build_reduced_word_monoid(alph, {a, ab, b, bb});
    lim.kappa = 100;
  }
  const Monoid& m() const { return *rw.monoid; }
  Elem mu(Sym s) const { return rw.mu0.at(s); }
  Elem pr(Sym first, Sym last) const { return rw.monoid->pair(rw.index.at(first), rw.index.at(last)); }
  std::map<Sym, Elem> base_mu(std::initializer_list<Sym> letters) const {
    std::map<Sym, Elem> out{{H, mu(H)}};
    for (Sym s : letters) out[s] = mu(s);
    return out;
  }
  void limits_for(const Word& w) {
    lim.n = w.size();
    lim.markers = static_cast<std::size_t>(std::count(w.begin(), w.end(), H));
  }
};

Endomorphism map_pair(const Alphabet& alph, Sym c, const Word& w) {
  Endomorphism h;
  h.images[c] = w;
  h.images[alph.partner(c)] = alph.involute(w);
  return h;
}

Arc edge(int src, int dst) {
  Arc a;
  a.src = src;
  a.dst = dst;
  return a;
}

}  // namespace

TEST(Graph, FinalNeedsNoVariablesNoTypesAndSymmetry) {
  Fixture f;
  EXPECT_TRUE(is_final(f.alph, make_vertex({H, f.a, H, f.ab, H}, {H, f.a, f.ab}, {}, {}, f.base_mu({f.a, f.ab}))));
  EXPECT_FALSE(is_final(f.alph, make_vertex({H, f.a, H}, {H, f.a, f.ab}, {}, {}, f.base_mu({f.a, f.ab}))));
  EXPECT_FALSE(is_final(f.alph, make_vertex({H, f.x, H, f.xb, H}, {H}, {f.x, f.xb}, {}, {})));
  TypeRelation t;
  t.add(f.alph, {f.a}, {f.b});
  EXPECT_FALSE(
      is_final(f.alph, make_vertex({H, f.a, H, f.ab, H}, {H, f.a, f.ab, f.b, f.bb}, {}, t, f.base_mu({f.a, f.ab, f.b, f.bb}))));
}

TEST(Graph, PairCompressionArc) {
  Fixture f;
  const Word sw{H, f.a, f.b, H, f.bb, f.ab, H};
  f.limits_for(sw);
  Vertex S = make_vertex(sw, {H, f.a, f.ab, f.b, f.bb}, {}, {}, f.base_mu({f.a, f.ab, f.b, f.bb}));
  auto tmu = S.mu;
  tmu[f.c] = f.pr(f.a, f.b);
  tmu[f.cb] = f.pr(f.bb, f.ab);
  Vertex T = make_vertex({H, f.c, H, f.cb, H}, {H, f.a, f.ab, f.b, f.bb, f.c, f.cb}, {}, {}, tmu);
  EXPECT_EQ(check_arc(f.alph, f.m(), ArcKind::Compress, S, map_pair(f.alph, f.c, {f.a, f.b}), {}, T, f.lim), "");
  EXPECT_NE(check_arc(f.alph, f.m(), ArcKind::Compress, S, map_pair(f.alph, f.c, {f.b, f.a}), {}, T, f.lim), "");
  // Right images, wrong constraint on the new letter.
  auto bad = tmu;
  bad[f.c] = f.pr(f.b, f.a);
  bad[f.cb] = f.pr(f.ab, f.bb);
  Vertex T2 = make_vertex(T.W, T.B, {}, {}, bad);
  EXPECT_NE(check_arc(f.alph, f.m(), ArcKind::Compress, S, map_pair(f.alph, f.c, {f.a, f.b}), {}, T2, f.lim), "");
  // rename images must be single letters.
  EXPECT_NE(check_arc(f.alph, f.m(), ArcKind::Rename, S, map_pair(f.alph, f.c, {f.a, f.b}), {}, T, f.lim), "");
}

TEST(Graph, ArcRejectsNonInvolutiveLabel) {
  Fixture f;
  const Word sw{H, f.a, f.b, H, f.bb, f.ab, H};
  f.limits_for(sw);
  Vertex S = make_vertex(sw, {H, f.a, f.ab, f.b, f.bb}, {}, {}, f.base_mu({f.a, f.ab, f.b, f.bb}));
  auto tmu = S.mu;
  tmu[f.c] = f.pr(f.a, f.b);
  tmu[f.cb] = f.pr(f.bb, f.ab);
  Vertex T = make_vertex({H, f.c, H, f.cb, H}, {H, f.a, f.ab, f.b, f.bb, f.c, f.cb}, {}, {}, tmu);
  Endomorphism h;
  h.images[f.c] = {f.a, f.b};
  h.images[f.cb] = {f.ab, f.bb};
  EXPECT_NE(check_arc(f.alph, f.m(), ArcKind::Compress, S, h, {}, T, f.lim), "");
}

TEST(Graph, EraseArcNeedsTrivialConstraint) {
  Fixture f;
  const Word sw{H, f.x, f.a, H, f.ab, f.xb, H};
  f.limits_for(sw);
  auto smu = f.base_mu({f.a, f.ab});
  smu[f.x] = f.m().one();
  smu[f.xb] = f.m().one();
  Vertex S = make_vertex(sw, {H, f.a, f.ab}, {f.x, f.xb}, {}, smu);
  Vertex T = make_vertex({H, f.a, H, f.ab, H}, {H, f.a, f.ab}, {}, {}, f.base_mu({f.a, f.ab}));
  EXPECT_EQ(check_arc(f.alph, f.m(), ArcKind::Erase, S, {}, {f.x, {}}, T, f.lim), "");
  smu[f.x] = f.mu(f.a);
  smu[f.xb] = f.mu(f.ab);
  Vertex S2 = make_vertex(sw, S.B, S.X, {}, smu);
  EXPECT_NE(check_arc(f.alph, f.m(), ArcKind::Erase, S2, {}, {f.x, {}}, T, f.lim), "");
}

TEST(Graph, PopFromTypedVariable) {
  Fixture f;
  TypeRelation t;
  t.add(f.alph, {f.x}, {f.b});
  const Word sw{H, f.x, H, f.xb, H};
  f.limits_for(sw);
  auto smu = f.base_mu({f.a, f.ab, f.b, f.bb});
  smu[f.x] = f.pr(f.b, f.b);
  smu[f.xb] = f.pr(f.bb, f.bb);
  Vertex S = make_vertex(sw, {H, f.a, f.ab, f.b, f.bb}, {f.x, f.xb}, t, smu);
  const Word tw{H, f.b, f.x, H, f.xb, f.bb, H};
  auto good = smu;
  Vertex T = make_vertex(tw, S.B, S.X, t, good);
  EXPECT_EQ(check_arc(f.alph, f.m(), ArcKind::Pop, S, {}, {f.x, {f.b}}, T, f.lim), "");

  auto bad = smu;
  bad[f.x] = f.pr(f.a, f.a);
  bad[f.xb] = f.pr(f.ab, f.ab);
  Vertex T2 = make_vertex(tw, S.B, S.X, t, bad);
  EXPECT_NE(check_arc(f.alph, f.m(), ArcKind::Pop, S, {}, {f.x, {f.b}}, T2, f.lim), "");

  const Word tw3{H, f.a, f.x, H, f.xb, f.ab, H};
  Vertex T3 = make_vertex(tw3, S.B, S.X, t, good);
  EXPECT_NE(check_arc(f.alph, f.m(), ArcKind::Pop, S, {}, {f.x, {f.a}}, T3, f.lim), "");
}

TEST(Graph, SubstitutionInvolutesSuffix) {
  Fixture f;
  const Word w{H, f.x, f.a, H, f.ab, f.xb, H};
  EXPECT_EQ(substitute_var(f.alph, w, f.x, {f.b}, false), (Word{H, f.b, f.x, f.a, H, f.ab, f.xb, f.bb, H}));
  EXPECT_EQ(substitute_var(f.alph, w, f.x, {}, true), (Word{H, f.a, H, f.ab, H}));
}

TEST(Graph, CanonicalFormIgnoresPoolChoice) {
  Fixture f;
  auto [p0, p0b] = f.alph.pool_pair(0);
  auto [p1, p1b] = f.alph.pool_pair(1);
  auto vertex_with = [&](Sym p, Sym pb) {
    auto mu = f.base_mu({f.a, f.ab});
    mu[p] = f.mu(f.a);
    mu[pb] = f.mu(f.ab);
    return make_vertex({H, p, f.a, H, f.ab, pb, H}, {H, f.a, f.ab, p, pb}, {}, {}, mu);
  };
  Canonical c0 = canonicalize(f.alph, vertex_with(p0, p0b));
  Canonical c1 = canonicalize(f.alph, vertex_with(p1, p1b));
  EXPECT_EQ(c0.vertex, c1.vertex);
  EXPECT_TRUE(c0.to_raw.empty());
  EXPECT_EQ(c1.to_raw.at(p0), p1);
  EXPECT_EQ(c1.to_raw.at(p0b), p1b);
  // Oriented by first occurrence: the barred letter coming first becomes p0.
  Canonical cb = canonicalize(f.alph, vertex_with(p1b, p1));
  EXPECT_EQ(cb.vertex.W[1], p0);
  Canonical again = canonicalize(f.alph, c1.vertex);
  EXPECT_EQ(again.vertex, c1.vertex);
  EXPECT_TRUE(again.to_raw.empty());
}

TEST(Graph, UsefulOnChainAndWithoutFinal) {
  Graph g;
  for (Sym i = 0; i < 4; ++i) g.add_vertex(make_vertex({H, i + 1, H}, {}, {}, {}, {}));
  g.add_arc(edge(0, 1));
  g.add_arc(edge(1, 2));
  g.add_arc(edge(3, 2));
  g.mark_initial(0);
  EXPECT_EQ(g.useful(), (std::vector<bool>{false, false, false, false}));
  g.mark_final(2);
  EXPECT_EQ(g.useful(), (std::vector<bool>{true, true, true, false}));
  EXPECT_FALSE(g.add_arc(edge(0, 1)));
}

TEST(Graph, UsefulMatchesReachabilityProperty) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    Graph g;
    for (int i = 0; i < n; ++i) g.add_vertex(make_vertex({H, static_cast<Sym>(i + 1), H}, {}, {}, {}, {}));
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) reach[i][i] = true;
    for (int k = 0; k < 2 * n; ++k) {
      int s = static_cast<int>(rng() % n), t = static_cast<int>(rng() % n);
      g.add_arc(edge(s, t));
      reach[s][t] = true;
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    std::vector<int> init, fin;
    for (int i = 0; i < n; ++i) {
      if (rng() % 3 == 0) init.push_back(i), g.mark_initial(i);
      if (rng() % 3 == 0) fin.push_back(i), g.mark_final(i);
    }
    auto u = g.useful();
    for (int v = 0; v < n; ++v) {
      bool from = false, to = false;
      for (int i : init) from = from || reach[i][v];
      for (int j : fin) to = to || reach[v][j];
      EXPECT_EQ(u[static_cast<std::size_t>(v)], from && to) << "trial " << trial << " vertex " << v;
    }
  }
}

TEST(Graph, ExtractionReadsLeadingBlocks) {
  Fixture f;
  Vertex v = make_vertex({H, f.a, H, f.b, f.a, H, f.ab, H}, {}, {}, {}, {});
  EXPECT_EQ(*extraction_label(v, 1).image(H), (Word{f.a}));
  EXPECT_EQ(*extraction_label(v, 2).image(H), (Word{f.a, H, f.b, f.a}));
  EXPECT_FALSE(extraction_label(v, 1).involutive);
}

TEST(Graph, AssembleWithoutUsefulVertexIsEmpty) {
  Fixture f;
  Graph g;
  g.add_vertex(make_vertex({H, f.a, H}, {}, {}, {}, {}));
  g.mark_initial(0);
  EndoNfa nfa = assemble_nfa(g, f.alph, 1, {f.a, f.ab}, nullptr);
  EXPECT_EQ(nfa.states, 1);
  EXPECT_TRUE(is_empty(nfa));
  EXPECT_TRUE(enumerate(nfa, 6).empty());
}

TEST(Graph, AssembleChainProducesExtraction) {
  Fixture f;
  Graph g;
  auto mu = f.base_mu({f.a, f.ab});
  mu[f.c] = f.mu(f.a);
  mu[f.cb] = f.mu(f.ab);
  int s = g.add_vertex(make_vertex({H, f.c, H, f.cb, H}, {H, f.a, f.ab, f.c, f.cb}, {}, {}, mu));
  int t = g.add_vertex(make_vertex({H, f.a, H, f.ab, H}, {H, f.a, f.ab}, {}, {}, f.base_mu({f.a, f.ab})));
  Arc arc = edge(s, t);
  arc.label = map_pair(f.alph, f.a, {f.c, f.c});
  g.add_arc(arc);
  g.mark_initial(s);
  g.mark_final(t);
  EndoNfa nfa = assemble_nfa(g, f.alph, 1, {f.a, f.ab, f.c, f.cb}, nullptr);
  EXPECT_FALSE(is_empty(nfa));
  EXPECT_EQ(enumerate(nfa, 6), (std::vector<Word>{{f.c, f.c}}));
}
