#include "weq/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace weq {

int Nfa::add_state(bool is_final) {
  final.push_back(is_final);
  return states++;
}

void Nfa::add_edge(int from, Sym label, int to) {
  if (from < 0 || from >= states || to < 0 || to >= states) throw Error("nfa: state out of range");
  if (!has_edge(from, label, to)) edges.push_back({from, label, to});
}

bool Nfa::has_edge(int from, Sym label, int to) const {
  return std::find(edges.begin(), edges.end(), Edge{from, label, to}) != edges.end();
}

bool Nfa::has_eps() const {
  return std::any_of(edges.begin(), edges.end(), [](const Edge& e) { return e.label == kEps; });
}

std::vector<std::vector<bool>> Nfa::eps_closure() const {
  std::vector<std::vector<bool>> c(states, std::vector<bool>(states, false));
  for (int s = 0; s < states; ++s) {
    std::deque<int> q{s};
    c[s][s] = true;
    while (!q.empty()) {
      int p = q.front();
      q.pop_front();
      for (const auto& e : edges)
        if (e.from == p && e.label == kEps && !c[s][e.to]) {
          c[s][e.to] = true;
          q.push_back(e.to);
        }
    }
  }
  return c;
}

std::set<int> Nfa::step(const std::set<int>& from, Sym a) const {
  std::set<int> out;
  for (const auto& e : edges)
    if (e.label == a && from.count(e.from)) out.insert(e.to);
  return out;
}

bool Nfa::accepts(const Word& w) const {
  auto cl = eps_closure();
  auto close = [&](const std::set<int>& s) {
    std::set<int> r;
    for (int p : s)
      for (int q = 0; q < states; ++q)
        if (cl[p][q]) r.insert(q);
    return r;
  };
  std::set<int> cur = close(std::set<int>(initial.begin(), initial.end()));
  for (Sym a : w) {
    cur = close(step(cur, a));
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(), [&](int s) { return final[s]; });
}

Nfa remove_eps(const Nfa& a) {
  auto cl = a.eps_closure();
  Nfa out;
  for (int s = 0; s < a.states; ++s) {
    bool f = false;
    for (int t = 0; t < a.states; ++t) f = f || (cl[s][t] && a.final[t]);
    out.add_state(f);
  }
  out.initial = a.initial;
  for (int s = 0; s < a.states; ++s)
    for (const auto& e : a.edges)
      if (e.label != Nfa::kEps && cl[s][e.from]) out.add_edge(s, e.label, e.to);
  return out;
}

Nfa intersect(const Nfa& a, const Nfa& b) {
  if (a.has_eps() || b.has_eps()) throw Error("intersect: automata must be ε-free");
  Nfa out;
  for (int i = 0; i < a.states; ++i)
    for (int j = 0; j < b.states; ++j) out.add_state(a.final[i] && b.final[j]);
  auto id = [&](int i, int j) { return i * b.states + j; };
  for (int i : a.initial)
    for (int j : b.initial) out.initial.push_back(id(i, j));
  for (const auto& e : a.edges)
    for (const auto& f : b.edges)
      if (e.label == f.label) out.add_edge(id(e.from, f.from), e.label, id(e.to, f.to));
  return out;
}

Nfa complement(const Nfa& a, const std::vector<Sym>& letters) {
  Nfa src = a.has_eps() ? remove_eps(a) : a;
  std::map<std::set<int>, int> index;
  std::vector<std::set<int>> subsets;
  Nfa out;
  auto intern = [&](const std::set<int>& s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    bool acc = std::any_of(s.begin(), s.end(), [&](int q) { return src.final[q]; });
    int id = out.add_state(!acc);
    index.emplace(s, id);
    subsets.push_back(s);
    return id;
  };
  out.initial.push_back(intern(std::set<int>(src.initial.begin(), src.initial.end())));
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    std::set<int> cur = subsets[k];
    for (Sym x : letters) {
      int t = intern(src.step(cur, x));
      out.add_edge(static_cast<int>(k), x, t);
    }
  }
  return out;
}

Elem MatrixRecognizer::eval(const Word& w) const {
  Elem r = monoid->one();
  for (Sym s : w) {
    auto it = images.find(s);
    if (it == images.end()) throw Error("matrix recognizer: unmapped letter " + std::to_string(s));
    r = monoid->mul(r, it->second);
  }
  return r;
}

bool MatrixRecognizer::accepting(Elem m) const {
  for (int i : initial)
    for (int j : final)
      if (monoid->entry(m, i, j)) return true;
  return false;
}

MatrixRecognizer boolean_matrix_morphism(const Nfa& a, const std::vector<Sym>& letters) {
  if (a.has_eps()) throw Error("boolean matrix morphism: automaton has empty moves");
  MatrixRecognizer r;
  r.monoid = std::make_shared<BoolMatrixMonoid>(a.states);
  for (Sym x : letters) {
    BoolMatrixMonoid::Matrix m(a.states, 0);
    for (const auto& e : a.edges)
      if (e.label == x) m[e.from] |= std::uint64_t{1} << e.to;
    r.images[x] = r.monoid->intern(m);
  }
  r.initial = a.initial;
  for (int s = 0; s < a.states; ++s)
    if (a.final[s]) r.final.push_back(s);
  return r;
}

}  // namespace weq
