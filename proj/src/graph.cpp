#include "weq/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace weq {

namespace {

void append_word(std::string& out, const Word& w) {
  for (Sym s : w) {
    out += std::to_string(s);
    out += ',';
  }
}

Elem eval(const Monoid& m, const std::map<Sym, Elem>& mu, const Word& w, bool* ok = nullptr) {
  Elem e = m.one();
  for (Sym s : w) {
    auto it = mu.find(s);
    if (it == mu.end()) {
      if (ok) *ok = false;
      return e;
    }
    e = m.mul(e, it->second);
  }
  return e;
}

bool contains(const std::vector<Sym>& v, Sym s) { return std::binary_search(v.begin(), v.end(), s); }

TypeRelation restrict_theta(const Alphabet& alph, const TypeRelation& t, const std::vector<Sym>& B,
                            const std::vector<Sym>& X) {
  TypeRelation r;
  for (const auto& [x, p] : t.entries()) {
    bool keep = true;
    for (Sym s : x) keep = keep && (contains(B, s) || contains(X, s));
    for (Sym s : p) keep = keep && (contains(B, s) || contains(X, s));
    if (keep) r.add(alph, x, p);
  }
  return r;
}

}  // namespace

std::string Vertex::key() const {
  std::string k;
  k.reserve(W.size() * 4 + 64);
  append_word(k, W);
  k += '|';
  append_word(k, B);
  k += '|';
  append_word(k, X);
  k += '|';
  for (const auto& [x, p] : theta.entries()) {
    append_word(k, x);
    k += ':';
    append_word(k, p);
    k += ';';
  }
  k += '|';
  for (const auto& [s, e] : mu) {
    k += std::to_string(s);
    k += '=';
    k += std::to_string(e);
    k += ',';
  }
  return k;
}

bool Vertex::has_letter(Sym s) const { return contains(B, s); }
bool Vertex::has_var(Sym s) const { return contains(X, s); }

Vertex make_vertex(Word W, std::vector<Sym> B, std::vector<Sym> X, TypeRelation theta, std::map<Sym, Elem> mu) {
  Vertex v;
  std::sort(B.begin(), B.end());
  B.erase(std::unique(B.begin(), B.end()), B.end());
  std::sort(X.begin(), X.end());
  X.erase(std::unique(X.begin(), X.end()), X.end());
  v.W = trace_normal_form(W, theta);
  for (auto it = mu.begin(); it != mu.end();) {
    if (!contains(B, it->first) && !contains(X, it->first))
      it = mu.erase(it);
    else
      ++it;
  }
  v.B = std::move(B);
  v.X = std::move(X);
  v.theta = std::move(theta);
  v.mu = std::move(mu);
  return v;
}

std::string arc_kind_name(ArcKind k) {
  switch (k) {
    case ArcKind::Rename:
      return "rename";
    case ArcKind::Compress:
      return "compress";
    case ArcKind::Restrict:
      return "restrict";
    case ArcKind::Erase:
      return "erase";
    case ArcKind::Type:
      return "type";
    case ArcKind::Pop:
      return "pop";
    case ArcKind::Extract:
      return "extract";
    case ArcKind::Decode:
      return "decode";
  }
  return "?";
}

Word substitute_var(const Alphabet& alph, const Word& W, Sym var, const Word& prefix, bool erase) {
  const Sym bar = alph.partner(var);
  const Word suffix = alph.involute(prefix);
  Word out;
  out.reserve(W.size() + 8);
  for (Sym s : W) {
    if (s == var) {
      if (erase) continue;
      out.insert(out.end(), prefix.begin(), prefix.end());
      out.push_back(s);
    } else if (s == bar) {
      if (erase) continue;
      out.push_back(s);
      out.insert(out.end(), suffix.begin(), suffix.end());
    } else {
      out.push_back(s);
    }
  }
  return out;
}

std::string check_arc(const Alphabet& alph, const Monoid& m, ArcKind kind, const Vertex& S, const Endomorphism& h,
                      const SubstData& data, const Vertex& T, const WellFormedLimits& lim) {
  if (kind == ArcKind::Extract || kind == ArcKind::Decode) return "not an arc between vertices";
  if (!h.involutive) return "label is not involutive";
  for (const auto& [c, w] : h.images) {
    if (c == Alphabet::kMarker) return "label maps the marker";
    if (w.size() > 3) return "image longer than three";
    for (Sym s : w)
      if (s == Alphabet::kMarker) return "image contains the marker";
    const Word* wb = h.image(alph.partner(c));
    if (!wb || *wb != alph.involute(w)) return "label does not commute with the involution";
  }
  auto rep = check_well_formed(alph, T.W, T.B, T.X, T.theta, m, T.mu_map(), lim);
  if (!rep.ok()) return "target not well-formed: " + rep.issues.front();

  const bool compression = kind == ArcKind::Rename || kind == ArcKind::Compress || kind == ArcKind::Restrict;
  if (compression) {
    if (T.X != S.X) return "variables changed";
    for (Sym x : S.X)
      if (T.mu.at(x) != S.mu.at(x)) return "mu changed on a variable";
    std::set<Sym> mapped;
    for (const auto& [c, w] : h.images) mapped.insert(c);
    for (Sym b : T.B) {
      if (mapped.count(b)) continue;
      if (!S.has_letter(b)) return "new letter without an image: " + alph.name(b);
      if (T.mu.at(b) != S.mu.at(b)) return "mu changed on " + alph.name(b);
    }
    for (const auto& [c, w] : h.images) {
      if (!T.has_letter(c)) return "mapped letter outside the target alphabet";
      for (Sym s : w)
        if (!S.has_letter(s)) return "image outside the source alphabet";
      bool ok = true;
      Elem e = eval(m, S.mu, w, &ok);
      if (!ok || T.mu.at(c) != e) return "mu of " + alph.name(c) + " is not mu of its image";
    }
    if (kind == ArcKind::Restrict) {
      if (!h.images.empty()) return "restrict carries a nontrivial label";
      for (Sym b : T.B)
        if (!S.has_letter(b)) return "restrict enlarges the alphabet";
      if (!(T.theta == restrict_theta(alph, S.theta, T.B, T.X))) return "restrict changes the type relation";
    } else {
      if (mapped.size() != 2) return "expected exactly one mapped pair";
      if (kind == ArcKind::Rename)
        for (const auto& [c, w] : h.images)
          if (w.size() != 1) return "rename image is not a letter";
      for (const auto& [c, w] : h.images)
        if (w.empty()) return "empty image";
      for (Sym b : S.B)
        if (!T.has_letter(b)) return "letter dropped outside restrict";
      for (const auto& e : S.theta.entries())
        if (!T.theta.entries().count(e)) return "type entry dropped";
    }
    for (const auto& [x, p] : T.theta.entries()) {
      Word hx = h.apply(x), hp = h.apply(p);
      if (!trace_equal(concat(hx, hp), concat(hp, hx), S.theta)) return "label does not respect the type relation";
    }
    if (!trace_equal(h.apply(T.W), S.W, S.theta)) return "h(W') differs from W";
    return "";
  }

  if (!h.images.empty()) return "substitution arc with a nontrivial label";
  const Sym y = data.var;
  if (!S.has_var(y)) return "unknown variable";
  const Sym ybar = alph.partner(y);
  if (T.B != S.B) return "alphabet changed";
  for (Sym b : S.B)
    if (T.mu.at(b) != S.mu.at(b)) return "mu changed on " + alph.name(b);
  switch (kind) {
    case ArcKind::Erase: {
      if (S.mu.at(y) != m.one()) return "erased variable has mu != 1";
      std::vector<Sym> X;
      for (Sym x : S.X)
        if (x != y && x != ybar) X.push_back(x);
      if (T.X != X) return "variables not erased";
      for (Sym x : X)
        if (T.mu.at(x) != S.mu.at(x)) return "mu changed on a variable";
      if (!(T.theta == restrict_theta(alph, S.theta, T.B, T.X))) return "type relation not restricted";
      if (!trace_equal(T.W, substitute_var(alph, S.W, y, {}, true), T.theta)) return "W' is not W with the variable erased";
      return "";
    }
    case ArcKind::Type: {
      if (T.X != S.X || T.mu != S.mu) return "type changes variables or mu";
      if (S.theta.type_of({y})) return "variable already typed";
      if (data.word.empty()) return "empty type";
      for (Sym s : data.word)
        if (!S.has_letter(s)) return "type outside the alphabet";
      bool ok = true;
      Elem p = eval(m, S.mu, data.word, &ok);
      if (m.mul(S.mu.at(y), p) != m.mul(p, S.mu.at(y))) return "mu(X) and mu(p) do not commute";
      TypeRelation want = S.theta;
      want.add(alph, {y}, data.word);
      if (!(T.theta == want)) return "type relation is not extended by (X,p)";
      if (!trace_equal(T.W, S.W, T.theta)) return "type changes W";
      return "";
    }
    case ArcKind::Pop: {
      if (T.X != S.X) return "pop changes variables";
      if (data.word.size() != 1 || !S.has_letter(data.word[0]) || data.word[0] == Alphabet::kMarker)
        return "popped word is not a letter of B";
      if (auto t = S.theta.type_of({y}); t && *t != data.word) return "typed variable popped with a foreign letter";
      if (!(T.theta == S.theta)) return "pop changes the type relation";
      for (Sym x : S.X)
        if (x != y && x != ybar && T.mu.at(x) != S.mu.at(x)) return "mu changed on another variable";
      if (S.mu.at(y) != m.mul(S.mu.at(data.word[0]), T.mu.at(y))) return "mu(X) != mu(p) mu'(X)";
      if (T.mu.at(ybar) != m.inv(T.mu.at(y))) return "mu' does not respect the involution";
      if (!trace_equal(T.W, substitute_var(alph, S.W, y, data.word, false), T.theta)) return "W' is not tau(W)";
      return "";
    }
    default:
      return "unexpected kind";
  }
}

bool is_final(const Alphabet& alph, const Vertex& v) {
  return v.X.empty() && v.theta.empty() && alph.involute(v.W) == v.W;
}

Endomorphism extraction_label(const Vertex& v, std::size_t targets) {
  Endomorphism g;
  g.involutive = false;
  Word img;
  std::size_t seen = 0;
  for (std::size_t i = 1; i < v.W.size() && seen < targets; ++i) {
    if (v.W[i] == Alphabet::kMarker) {
      if (++seen == targets) break;
    }
    img.push_back(v.W[i]);
  }
  g.images[Alphabet::kMarker] = img;
  return g;
}

Vertex rename_vertex(const Vertex& v, const std::map<Sym, Sym>& ren, const Alphabet& alph) {
  auto r = [&](Sym s) {
    auto it = ren.find(s);
    return it == ren.end() ? s : it->second;
  };
  auto rw = [&](const Word& w) {
    Word o(w);
    for (Sym& s : o) s = r(s);
    return o;
  };
  TypeRelation theta;
  for (const auto& [x, p] : v.theta.entries()) theta.add(alph, rw(x), rw(p));
  std::vector<Sym> B;
  for (Sym b : v.B) B.push_back(r(b));
  std::map<Sym, Elem> mu;
  for (const auto& [s, e] : v.mu) mu[r(s)] = e;
  return make_vertex(rw(v.W), B, v.X, theta, mu);
}

Canonical canonicalize(Alphabet& alph, const Vertex& v) {
  Canonical c{v, {}};
  std::map<Sym, Sym> raw_of;  // current → original
  for (Sym b : v.B) raw_of[b] = b;
  for (int round = 0; round < 4; ++round) {
    const Vertex& cur = c.vertex;
    std::vector<Sym> order;  // pool letters, oriented by first occurrence
    std::set<Sym> placed;
    for (Sym s : cur.W) {
      if (!alph.at(s).fresh || placed.count(s)) continue;
      placed.insert(s);
      placed.insert(alph.partner(s));
      order.push_back(s);
    }
    std::vector<Sym> rest;
    for (Sym b : cur.B)
      if (alph.at(b).fresh && !placed.count(b) && b < alph.partner(b)) rest.push_back(b);
    std::sort(rest.begin(), rest.end(), [&](Sym a, Sym b) {
      auto ka = std::make_pair(cur.mu.at(a), cur.mu.at(alph.partner(a)));
      auto kb = std::make_pair(cur.mu.at(b), cur.mu.at(alph.partner(b)));
      return ka != kb ? ka < kb : a < b;
    });
    order.insert(order.end(), rest.begin(), rest.end());
    std::map<Sym, Sym> ren;
    bool identity = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto [p, q] = alph.pool_pair(i);
      ren[order[i]] = p;
      ren[alph.partner(order[i])] = q;
      identity = identity && order[i] == p;
    }
    if (identity) break;
    std::map<Sym, Sym> next;
    for (const auto& [from, to] : ren) next[to] = raw_of.at(from);
    for (const auto& [s, r] : raw_of)
      if (!ren.count(s)) next[s] = r;
    raw_of = std::move(next);
    c.vertex = rename_vertex(cur, ren, alph);
  }
  for (const auto& [s, r] : raw_of)
    if (s != r) c.to_raw[s] = r;
  return c;
}

int Graph::find(const Vertex& v) const {
  auto it = index_.find(v.key());
  return it == index_.end() ? -1 : it->second;
}

int Graph::add_vertex(const Vertex& v, bool* inserted) {
  auto k = v.key();
  auto it = index_.find(k);
  if (it != index_.end()) {
    if (inserted) *inserted = false;
    return it->second;
  }
  int id = static_cast<int>(vertices_.size());
  vertices_.push_back(v);
  index_.emplace(std::move(k), id);
  if (inserted) *inserted = true;
  return id;
}

bool Graph::add_arc(Arc a) {
  std::string lk;
  for (const auto& [s, w] : a.label.images) {
    lk += std::to_string(s) + "=";
    append_word(lk, w);
    lk += ";";
  }
  if (!arc_keys_.insert({a.src, a.dst, lk}).second) return false;
  arcs_.push_back(std::move(a));
  return true;
}

std::vector<bool> Graph::useful() const {
  const auto n = vertices_.size();
  std::vector<std::vector<int>> fwd(n), bwd(n);
  for (const auto& a : arcs_) {
    fwd[static_cast<std::size_t>(a.src)].push_back(a.dst);
    bwd[static_cast<std::size_t>(a.dst)].push_back(a.src);
  }
  auto reach = [&](const std::set<int>& start, const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(n, false);
    std::deque<int> q(start.begin(), start.end());
    for (int s : start) seen[static_cast<std::size_t>(s)] = true;
    while (!q.empty()) {
      int s = q.front();
      q.pop_front();
      for (int t : adj[static_cast<std::size_t>(s)])
        if (!seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = true;
          q.push_back(t);
        }
    }
    return seen;
  };
  auto f = reach(initial_, fwd), b = reach(final_, bwd);
  std::vector<bool> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = f[i] && b[i];
  return u;
}

std::string validate_stored_arc(const Alphabet& alph, const Monoid& m, const Graph& g, const Arc& a, std::size_t kappa) {
  const Vertex& S = g.vertex(a.src);
  const Vertex T = rename_vertex(g.vertex(a.dst), a.to_raw, alph);
  // The stored label must be the validated one read through the renaming.
  for (const auto& [canon, raw] : a.to_raw) {
    const Word* stored = a.label.image(canon);
    const Word* orig = a.raw.image(raw);
    Word want = orig ? *orig : Word{raw};
    Word have = stored ? *stored : Word{canon};
    if (want != have) return "stored label disagrees with the renaming";
  }
  WellFormedLimits lim;
  lim.n = a.n;
  lim.kappa = kappa;
  lim.markers = a.markers;
  for (Sym b : S.B)
    if (!alph.at(b).fresh && b != Alphabet::kMarker) lim.letters.push_back(b);
  return check_arc(alph, m, a.kind, S, a.raw, a.data, T, lim);
}

EndoNfa assemble_nfa(const Graph& g, const Alphabet& alph, std::size_t targets, const std::vector<Sym>& raw_letters,
                     const FreeProductSpec* encoded) {
  EndoNfa a;
  for (std::size_t i = 0; i < alph.size(); ++i) a.names.push_back(alph.name(static_cast<Sym>(i)));
  a.seed = Alphabet::kMarker;
  a.terminals = raw_letters;
  a.terminals.push_back(Alphabet::kMarker);
  std::sort(a.terminals.begin(), a.terminals.end());
  auto useful = g.useful();
  if (std::none_of(useful.begin(), useful.end(), [](bool u) { return u; })) {
    a.initial = {a.add_state(false)};
    return a;
  }
  std::vector<int> state(g.size(), -1);
  for (std::size_t v = 0; v < g.size(); ++v)
    if (useful[v]) state[v] = a.add_state();
  const int sink = a.add_state(true);
  for (const auto& arc : g.arcs()) {
    int s = state[static_cast<std::size_t>(arc.src)], t = state[static_cast<std::size_t>(arc.dst)];
    if (s < 0 || t < 0) continue;
    a.add_transition(s, a.add_label(arc.label), t);
  }
  for (int f : g.finals()) {
    int s = state[static_cast<std::size_t>(f)];
    if (s >= 0) a.add_transition(s, a.add_label(extraction_label(g.vertex(f), targets)), sink);
  }
  if (encoded) {
    const int start = a.add_state();
    Endomorphism eta;
    eta.involutive = false;
    for (Sym l : encoded->encoded_letters())
      if (encoded->is_hat(l)) eta.images[l] = {};
    const int lab = a.add_label(eta);
    for (int v : g.initial())
      if (state[static_cast<std::size_t>(v)] >= 0) a.add_transition(start, lab, state[static_cast<std::size_t>(v)]);
    a.initial = {start};
  } else {
    for (int v : g.initial())
      if (state[static_cast<std::size_t>(v)] >= 0) a.initial.push_back(state[static_cast<std::size_t>(v)]);
  }
  return a;
}

std::string show_endomorphism(const Alphabet& alph, const Endomorphism& h) {
  if (h.images.empty()) return "id";
  std::string out;
  for (const auto& [s, w] : h.images) {
    if (!out.empty()) out += ", ";
    out += alph.name(s) + "->" + (w.empty() ? std::string("1") : alph.show(w, ""));
  }
  return out;
}

}  // namespace weq
