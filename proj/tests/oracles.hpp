#pragma once

#include <array>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "weq/alphabet.hpp"
#include "weq/automaton.hpp"
#include "weq/free_product.hpp"

// Brute-force reference implementations shared by the tests and the acceptance run.
namespace weq::oracles {

// All words over `letters` of length ≤ max_len, shortest first.
inline std::vector<Word> all_words(const std::vector<Sym>& letters, std::size_t max_len) {
  std::vector<Word> out{{}};
  std::size_t from = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t to = out.size();
    for (std::size_t i = from; i < to; ++i)
      for (Sym s : letters) {
        Word w = out[i];
        w.push_back(s);
        out.push_back(std::move(w));
      }
    from = to;
  }
  return out;
}

// Stack-based free reduction over the partner table.
inline Word stack_reduce(const Alphabet& alph, const Word& w) {
  Word st;
  for (Sym s : w) {
    if (!st.empty() && alph.partner(st.back()) == s && s != Alphabet::kMarker)
      st.pop_back();
    else
      st.push_back(s);
  }
  return st;
}

// Z/2 ⋆ Z/3 as PSL(2,Z): s ↦ [[0,-1],[1,0]], t ↦ [[0,-1],[1,1]], u ↦ t².
using Mat = std::array<long long, 4>;
inline Mat mat_mul(const Mat& x, const Mat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}
inline Mat projective(Mat m) {
  for (long long v : m) {
    if (v == 0) continue;
    if (v < 0)
      for (auto& x : m) x = -x;
    break;
  }
  return m;
}
struct Psl2Model {
  std::map<Sym, Mat> gen;
  Psl2Model(Sym s, Sym t, Sym u) {
    const Mat S{0, -1, 1, 0}, T{0, -1, 1, 1};
    gen[s] = S;
    gen[t] = T;
    gen[u] = mat_mul(T, T);
  }
  Mat eval(const Word& w) const {
    Mat m{1, 0, 0, 1};
    for (Sym x : w) m = mat_mul(m, gen.at(x));
    return projective(m);
  }
};

// Normal forms reachable in `a` along paths whose running value stays within
// `bound` letters of geodesic length.
inline std::set<Word> bounded_image(const Nfa& a, const FreeProductSpec& spec, std::size_t bound) {
  const Nfa n = a;
  auto cl = n.eps_closure();
  std::set<std::pair<int, Word>> seen;
  std::vector<std::pair<int, Word>> stack;
  for (int i : n.initial)
    for (int q = 0; q < n.states; ++q)
      if (cl[i][q] && seen.insert({q, {}}).second) stack.push_back({q, {}});
  std::set<Word> out;
  while (!stack.empty()) {
    auto [p, w] = stack.back();
    stack.pop_back();
    if (n.final[p]) out.insert(w);
    for (const auto& e : n.edges) {
      if (e.from != p || e.label == Nfa::kEps) continue;
      Word v = spec.normal_form(concat(w, {e.label}));
      if (v.size() > bound) continue;
      for (int q = 0; q < n.states; ++q)
        if (cl[e.to][q] && seen.insert({q, v}).second) stack.push_back({q, v});
    }
  }
  return out;
}

inline Nfa random_nfa(std::mt19937& rng, const std::vector<Sym>& letters, int max_states) {
  Nfa a;
  const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_states));
  for (int i = 0; i < k; ++i) a.add_state(rng() % 3 == 0);
  a.final[static_cast<std::size_t>(rng() % static_cast<unsigned>(k))] = true;
  a.initial = {0};
  const int edges = 1 + static_cast<int>(rng() % static_cast<unsigned>(2 * k + 2));
  for (int i = 0; i < edges; ++i)
    a.add_edge(static_cast<int>(rng() % static_cast<unsigned>(k)), letters[rng() % letters.size()],
               static_cast<int>(rng() % static_cast<unsigned>(k)));
  return a;
}

}  // namespace weq::oracles
