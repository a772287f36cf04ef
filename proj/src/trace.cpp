#include "weq/trace.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace weq {

namespace {

Token token_of(const Word& w) {
  if (w.size() == 1) return Token{w[0], -1};
  if (w.size() == 2) return Token{w[0], w[1]};
  throw Error("type relation: entries must have length 1 or 2");
}

Word flatten(const std::vector<Token>& ts) {
  Word w;
  for (const auto& t : ts) {
    w.push_back(t.a);
    if (!t.single()) w.push_back(t.b);
  }
  return w;
}

}  // namespace

void TypeRelation::add(const Alphabet& alph, const Word& x, const Word& p) {
  token_of(x);
  token_of(p);
  entries_.insert({x, p});
  entries_.insert({alph.involute(x), alph.involute(p)});
  rebuild();
}

std::optional<Word> TypeRelation::type_of(const Word& x) const {
  for (const auto& [l, r] : entries_)
    if (l == x) return r;
  return std::nullopt;
}

void TypeRelation::erase_mentioning(const std::unordered_set<Sym>& letters) {
  auto mentions = [&](const Word& w) {
    return std::any_of(w.begin(), w.end(), [&](Sym s) { return letters.count(s) > 0; });
  };
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (mentions(it->first) || mentions(it->second))
      it = entries_.erase(it);
    else
      ++it;
  }
  rebuild();
}

void TypeRelation::clear() {
  entries_.clear();
  rebuild();
}

void TypeRelation::rebuild() {
  partnered_.clear();
  commuting_.clear();
  pair_tokens_.clear();
  partners_.clear();
  for (const auto& [x, p] : entries_) {
    Token tx = token_of(x), tp = token_of(p);
    partnered_.insert(tx.key());
    partnered_.insert(tp.key());
    commuting_.insert({tx.key(), tp.key()});
    commuting_.insert({tp.key(), tx.key()});
    partners_[tx.key()].push_back(tp.key());
    partners_[tp.key()].push_back(tx.key());
    if (!tx.single()) pair_tokens_.insert(tx.key());
    if (!tp.single()) pair_tokens_.insert(tp.key());
  }
}

const std::vector<std::uint64_t>& TypeRelation::partners(const Token& t) const {
  static const std::vector<std::uint64_t> none;
  auto it = partners_.find(t.key());
  return it == partners_.end() ? none : it->second;
}

bool TypeRelation::commutes(const Token& s, const Token& t) const {
  return commuting_.count({s.key(), t.key()}) > 0;
}

std::vector<Token> TypeRelation::tokenize(const Word& w) const {
  std::vector<Token> out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size();) {
    if (!pair_tokens_.empty() && i + 1 < w.size() && pair_tokens_.count(Token{w[i], w[i + 1]}.key())) {
      out.push_back(Token{w[i], w[i + 1]});
      i += 2;
    } else {
      out.push_back(Token{w[i], -1});
      ++i;
    }
  }
  return out;
}

std::string TypeRelation::validate(const Alphabet& alph) const {
  std::map<Word, int> count;
  bool any_single_right = false, any_pair_right = false;
  for (const auto& [x, p] : entries_) {
    if (x == p) return "irreflexive";
    if (entries_.count({p, x})) return "antisymmetric";
    if (!entries_.count({alph.involute(x), alph.involute(p)})) return "involution closure";
    if (++count[x] > 1) return "at most one type per symbol";
    if (p.size() == 1) {
      any_single_right = true;
      if (x.size() != 1 || x[0] == p[0] || x[0] == alph.partner(p[0])) return "shape of single-letter types";
    } else {
      any_pair_right = true;
      if (p[1] != alph.partner(p[0])) return "pair types must be c c-bar";
      bool var = x.size() == 1 && alph.is_variable(x[0]);
      bool pair = x.size() == 2 && x[1] == alph.partner(x[0]);
      if (!var && !pair) return "pair types attach to variables or a a-bar";
    }
  }
  if (any_single_right && any_pair_right) return "mixed type shapes";
  return "";
}

std::string TypeRelation::show(const Alphabet& alph) const {
  std::string out;
  for (const auto& [x, p] : entries_) {
    if (!out.empty()) out += ",";
    out += "(" + alph.show(x, "") + ":" + alph.show(p, "") + ")";
  }
  return out;
}

Word trace_normal_form(const Word& w, const TypeRelation& theta) {
  if (theta.empty()) return w;
  std::vector<Token> ts = theta.tokenize(w);
  const int m = static_cast<int>(ts.size());
  std::vector<int> nxt(m + 1), prv(m + 1);
  for (int i = 0; i < m; ++i) {
    nxt[i] = i + 1;
    prv[i + 1] = i;
  }
  int head = 0;
  std::vector<Token> out;
  out.reserve(m);
  std::vector<int> prefix;
  std::vector<std::uint64_t> cand;
  while (head < m) {
    int best = -1;
    prefix.clear();
    for (int i = head; i < m; i = nxt[i]) {
      bool avail = true;
      for (int p : prefix)
        if (!theta.commutes(ts[p], ts[i])) {
          avail = false;
          break;
        }
      if (avail && (best < 0 || ts[i] < ts[best])) best = i;
      prefix.push_back(i);
      if (!theta.has_partner(ts[i])) break;
      // Only tokens commuting with the whole prefix can still be emitted.
      const auto& ps = theta.partners(ts[i]);
      if (prefix.size() == 1) {
        cand.assign(ps.begin(), ps.end());
      } else {
        std::erase_if(cand, [&](std::uint64_t k) { return std::find(ps.begin(), ps.end(), k) == ps.end(); });
      }
      if (cand.empty()) break;
    }
    out.push_back(ts[best]);
    if (best == head) {
      head = nxt[best];
    } else {
      nxt[prv[best]] = nxt[best];
      prv[nxt[best]] = prv[best];
    }
  }
  return flatten(out);
}

bool trace_equal(const Word& u, const Word& v, const TypeRelation& theta) {
  if (u.size() != v.size()) return false;
  return trace_normal_form(u, theta) == trace_normal_form(v, theta);
}

std::vector<Word> trace_representatives(const Word& w, const TypeRelation& theta, std::size_t cap) {
  std::vector<Token> start = theta.tokenize(w);
  std::set<std::vector<Token>> seen{start};
  std::deque<std::vector<Token>> q{start};
  std::vector<Word> out;
  while (!q.empty() && out.size() < cap) {
    auto cur = q.front();
    q.pop_front();
    out.push_back(flatten(cur));
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (!theta.commutes(cur[i], cur[i + 1])) continue;
      auto nb = cur;
      std::swap(nb[i], nb[i + 1]);
      if (seen.insert(nb).second) q.push_back(std::move(nb));
    }
  }
  return out;
}

bool is_trace_factor(const Word& f, const Word& w, const TypeRelation& theta) {
  if (f.size() > w.size()) return false;
  if (theta.empty()) return std::search(w.begin(), w.end(), f.begin(), f.end()) != w.end();
  const Word target = trace_normal_form(f, theta);
  const std::size_t k = theta.tokenize(f).size();
  for (const Word& rep : trace_representatives(w, theta)) {
    std::vector<Token> ts = theta.tokenize(rep);
    for (std::size_t i = 0; i + k <= ts.size(); ++i) {
      Word window = flatten(std::vector<Token>(ts.begin() + i, ts.begin() + i + k));
      if (window.size() == f.size() && trace_normal_form(window, theta) == target) return true;
    }
  }
  return false;
}

std::vector<Word> marker_segments(const Word& w) {
  std::vector<Word> out;
  Word cur;
  bool open = false;
  for (Sym s : w) {
    if (s == Alphabet::kMarker) {
      if (open) out.push_back(cur);
      cur.clear();
      open = true;
    } else {
      cur.push_back(s);
    }
  }
  return out;
}

WellFormedReport check_well_formed(const Alphabet& alph, const Word& w, const std::vector<Sym>& B,
                                   const std::vector<Sym>& X, const TypeRelation& theta, const Monoid& m,
                                   const std::unordered_map<Sym, Elem>& mu, const WellFormedLimits& lim) {
  WellFormedReport rep;
  auto issue = [&](std::string s) { rep.issues.push_back(std::move(s)); };
  if (w.size() > lim.kappa * lim.n) issue("length exceeds kappa*n");
  auto markers = static_cast<std::size_t>(std::count(w.begin(), w.end(), Alphabet::kMarker));
  if (markers != lim.markers) issue("marker count changed");
  if (w.empty() || w.front() != Alphabet::kMarker || w.back() != Alphabet::kMarker) issue("must start and end with #");

  auto mu_of = [&](Sym s) -> std::optional<Elem> {
    auto it = mu.find(s);
    if (it == mu.end()) return std::nullopt;
    return it->second;
  };
  for (Sym b : B) {
    if (b == Alphabet::kMarker) continue;
    auto v = mu_of(b);
    if (!v) {
      issue("unmapped letter " + alph.name(b));
      continue;
    }
    if (m.is_zero(*v)) issue("mu(" + alph.name(b) + ") = 0");
    if (*v == m.one()) issue("mu(" + alph.name(b) + ") = 1");
    if (alph.partner(b) == b) issue("self-involuting letter " + alph.name(b));
  }
  for (Sym x : X) {
    auto v = mu_of(x);
    if (!v)
      issue("unmapped variable " + alph.name(x));
    else if (m.is_zero(*v))
      issue("mu(" + alph.name(x) + ") = 0");
  }
  std::unordered_set<Sym> inB(B.begin(), B.end()), inX(X.begin(), X.end());
  for (Sym s : w)
    if (!inB.count(s) && !inX.count(s)) {
      issue("symbol outside B and X: " + alph.name(s));
      break;
    }

  auto segs = marker_segments(w);
  std::set<Word> nfs;
  for (const auto& s : segs) nfs.insert(trace_normal_form(s, theta));
  std::unordered_set<Sym> singles;
  for (const auto& s : segs) {
    if (s.size() == 1) singles.insert(s[0]);
    Elem e = m.one();
    bool mapped = true;
    for (Sym x : s) {
      auto v = mu_of(x);
      if (!v) {
        mapped = false;
        break;
      }
      e = m.mul(e, *v);
    }
    if (mapped && m.is_zero(e)) issue("proper factor with mu = 0: " + alph.show(s, ""));
    Word inv = alph.involute(s);
    if (s.empty() || nfs.count(trace_normal_form(inv, theta))) continue;
    bool found = false;
    for (const auto& t : segs)
      if (t.size() >= inv.size() && is_trace_factor(inv, t, theta)) {
        found = true;
        break;
      }
    if (!found) issue("factor not closed under involution: " + alph.show(s, ""));
  }
  for (Sym a : lim.letters)
    if (!singles.count(a)) issue("missing #" + alph.name(a) + "#");
  return rep;
}

}  // namespace weq
