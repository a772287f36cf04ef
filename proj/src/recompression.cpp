#include "weq/recompression.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace weq {

void RunStats::merge(const RunStats& o) {
  runs += o.runs;
  arcs += o.arcs;
  new_vertices += o.new_vertices;
  new_arcs += o.new_arcs;
  rounds += o.rounds;
  for (const auto& [k, v] : o.by_kind) by_kind[k] += v;
  max_ratio = std::max(max_ratio, o.max_ratio);
  max_ratio_block = std::max(max_ratio_block, o.max_ratio_block);
  max_ratio_pair = std::max(max_ratio_pair, o.max_ratio_pair);
  forward_failures += o.forward_failures;
  solution_failures += o.solution_failures;
  structural_violations += o.structural_violations;
  measure_failures += o.measure_failures;
  postcondition_failures += o.postcondition_failures;
  for (const auto& f : o.failures)
    if (failures.size() < 20) failures.push_back(f);
}

void RunStats::fail(std::size_t& counter, const std::string& msg) {
  ++counter;
  if (failures.size() < 20) failures.push_back(msg);
}

namespace {

// One letter of σ(W): visible when vpos < 0, else position vpos of σ(W[widx]).
struct Pos {
  Sym s;
  std::size_t widx;
  int vpos;
};

std::vector<Pos> expand(const Alphabet& alph, const Word& W, const std::unordered_map<Sym, Word>& sigma) {
  std::vector<Pos> E;
  E.reserve(W.size() * 2);
  for (std::size_t i = 0; i < W.size(); ++i) {
    if (alph.is_variable(W[i])) {
      const Word& v = sigma.at(W[i]);
      for (std::size_t k = 0; k < v.size(); ++k) E.push_back({v[k], i, static_cast<int>(k)});
    } else {
      E.push_back({W[i], i, -1});
    }
  }
  return E;
}

// Consistent letter replacements inside σ, recorded for a variable and mirrored
// onto its partner.
class Decisions {
 public:
  explicit Decisions(const Alphabet& alph) : alph_(alph) {}
  void set(const std::unordered_map<Sym, Word>& sigma, Sym var, int pos, Sym letter) {
    put(var, pos, letter);
    const auto len = static_cast<int>(sigma.at(var).size());
    put(alph_.partner(var), len - 1 - pos, alph_.partner(letter));
  }
  void apply(std::unordered_map<Sym, Word>& sigma) const {
    for (const auto& [k, v] : d_) sigma.at(k.first).at(static_cast<std::size_t>(k.second)) = v;
  }

 private:
  void put(Sym var, int pos, Sym letter) {
    auto [it, ins] = d_.emplace(std::make_pair(var, pos), letter);
    if (!ins && it->second != letter) throw Error("inconsistent replacement inside a variable");
  }
  const Alphabet& alph_;
  std::map<std::pair<Sym, int>, Sym> d_;
};

struct Run {
  std::size_t start, len;
  bool visible = false, interior = false;
};

// Maximal runs of letters satisfying `in` in E.
template <class F>
std::vector<Run> runs_of(const std::vector<Pos>& E, F in) {
  std::vector<Run> out;
  for (std::size_t i = 0; i < E.size();) {
    if (!in(E[i].s)) {
      ++i;
      continue;
    }
    Run r{i, 0};
    while (i < E.size() && in(E[i].s)) {
      (E[i].vpos < 0 ? r.visible : r.interior) = true;
      ++i;
    }
    r.len = i - r.start;
    out.push_back(r);
  }
  return out;
}

Word power(const Word& w, std::size_t k) {
  Word r;
  for (std::size_t i = 0; i < k; ++i) r.insert(r.end(), w.begin(), w.end());
  return r;
}

}  // namespace

WitnessRun::WitnessRun(Graph& graph, const SolverContext& ctx, const WitnessInstance& wi, const RunOptions& opt)
    : graph_(graph), alph_(*ctx.problem->alph), ctx_(ctx), opt_(opt), rng_(opt.seed) {
  n_ = wi.n;
  markers_ = wi.markers;
  base_.assign(alph_.size(), false);
  base_[Alphabet::kMarker] = true;
  for (Sym a : ctx.letters) base_[static_cast<std::size_t>(a)] = true;
  std::vector<Sym> B(ctx.letters);
  B.push_back(Alphabet::kMarker);
  cur_ = make_vertex(wi.W, B, wi.vars, {}, wi.mu);
  sigma_ = wi.sigma;
  target_ = forward_value();
  WellFormedLimits lim{n_, opt_.kappa, markers_, ctx_.letters};
  auto rep = check_well_formed(alph_, cur_.W, cur_.B, cur_.X, cur_.theta, *ctx_.mu0.monoid, cur_.mu_map(), lim);
  if (!rep.ok()) {
    stats_.fail(stats_.structural_violations, "initial vertex: " + rep.issues.front());
    throw Error("initial vertex is not well-formed: " + rep.issues.front());
  }
  bool ins = false;
  vid_ = initial_ = graph_.add_vertex(cur_, &ins);
  if (ins) ++stats_.new_vertices;
  graph_.mark_initial(vid_);
  if (is_final(alph_, cur_)) graph_.mark_final(vid_);
  stats_.runs = 1;
  stats_.max_ratio = static_cast<double>(cur_.W.size()) / static_cast<double>(n_);
}

bool WitnessRun::is_base(Sym s) const { return static_cast<std::size_t>(s) < base_.size() && base_[static_cast<std::size_t>(s)]; }

Word WitnessRun::alpha_of(Sym s) const {
  if (is_base(s)) return {s};
  return alpha_.at(s);
}

Elem WitnessRun::eval(const Word& w) const {
  const Monoid& m = *ctx_.mu0.monoid;
  Elem e = m.one();
  for (Sym s : w) e = m.mul(e, cur_.mu.at(s));
  return e;
}

Word WitnessRun::forward_value() const {
  Word out;
  auto put = [&](Sym t) {
    if (is_base(t)) {
      out.push_back(t);
    } else {
      const Word& a = alpha_.at(t);
      out.insert(out.end(), a.begin(), a.end());
    }
  };
  for (Sym s : cur_.W) {
    if (alph_.is_variable(s))
      for (Sym t : sigma_.at(s)) put(t);
    else
      put(s);
  }
  return out;
}

std::size_t WitnessRun::measure(const std::unordered_map<Sym, Word>& alpha, const std::unordered_map<Sym, Word>& sigma,
                                const std::vector<Sym>& X) const {
  std::size_t total = 0;
  for (Sym x : X)
    for (Sym t : sigma.at(x)) total += is_base(t) ? 1 : alpha.at(t).size();
  return total;
}

std::pair<Sym, Sym> WitnessRun::fresh_pair() {
  std::vector<bool> used(alph_.size(), false);
  for (Sym b : cur_.B) used[static_cast<std::size_t>(b)] = true;
  return alph_.fresh_letters(used, 1).front();
}

WitnessRun::Next WitnessRun::start() const {
  return Next{cur_.W, cur_.B, cur_.X, cur_.theta, cur_.mu, alpha_, sigma_};
}

bool WitnessRun::at_final() const { return is_final(alph_, cur_); }

void WitnessRun::commit(ArcKind kind, const Endomorphism& h, const SubstData& d, Next nx, bool canon) {
  if (++arcs_ > opt_.max_arcs) throw Error("step budget exhausted");
  const std::string kname = arc_kind_name(kind);
  Vertex T = make_vertex(nx.W, nx.B, nx.X, nx.theta, nx.mu);
  WellFormedLimits lim{n_, opt_.kappa, markers_, ctx_.letters};
  std::string why = check_arc(alph_, *ctx_.mu0.monoid, kind, cur_, h, d, T, lim);
  if (!why.empty()) {
    stats_.fail(stats_.structural_violations, kname + ": " + why);
    throw Error("invalid " + kname + " arc: " + why);
  }
  // Forward value, solution property and measure of the witness.
  bool fwd_ok = false;
  {
    Word fv, sw;
    for (Sym s : T.W) {
      const Word one{s};
      const Word& v = alph_.is_variable(s) ? nx.sigma.at(s) : one;
      sw.insert(sw.end(), v.begin(), v.end());
      for (Sym t : v) {
        if (is_base(t)) {
          fv.push_back(t);
        } else {
          const Word& a = nx.alpha.at(t);
          fv.insert(fv.end(), a.begin(), a.end());
        }
      }
    }
    fwd_ok = fv == target_;
    if (!fwd_ok) stats_.fail(stats_.forward_failures, kname + ": forward value changed");
    if (!trace_equal(sw, alph_.involute(sw), T.theta))
      stats_.fail(stats_.solution_failures, kname + ": witness is not a solution");
    for (Sym x : T.X) {
      const Word& v = nx.sigma.at(x);
      for (Sym t : v)
        if (!T.has_letter(t)) stats_.fail(stats_.structural_violations, kname + ": witness leaves the alphabet");
      if (alph_.involute(v) != nx.sigma.at(alph_.partner(x)))
        stats_.fail(stats_.solution_failures, kname + ": witness breaks the involution");
    }
    const std::size_t m0 = measure(alpha_, sigma_, cur_.X), m1 = measure(nx.alpha, nx.sigma, T.X);
    if (kind == ArcKind::Pop ? m1 >= m0 : m1 > m0)
      stats_.fail(stats_.measure_failures, kname + ": measure " + std::to_string(m0) + " -> " + std::to_string(m1));
  }
  stats_.max_ratio = std::max(stats_.max_ratio, static_cast<double>(T.W.size()) / static_cast<double>(n_));

  Arc arc;
  arc.src = vid_;
  arc.kind = kind;
  arc.raw = h;
  arc.data = d;
  arc.n = n_;
  arc.markers = markers_;
  Vertex next = T;
  if (canon) {
    Canonical c = canonicalize(alph_, T);
    next = c.vertex;
    arc.to_raw = c.to_raw;
    std::map<Sym, Sym> to_canon;
    for (const auto& [cn, raw] : c.to_raw) to_canon[raw] = cn;
    auto rn = [&](Sym s) {
      auto it = to_canon.find(s);
      return it == to_canon.end() ? s : it->second;
    };
    std::unordered_map<Sym, Word> alpha2, sigma2;
    for (auto& [s, w] : nx.alpha) alpha2[rn(s)] = std::move(w);
    for (auto& [x, w] : nx.sigma) {
      for (Sym& t : w) t = rn(t);
      sigma2[x] = std::move(w);
    }
    nx.alpha = std::move(alpha2);
    nx.sigma = std::move(sigma2);
    for (const auto& [cn, raw] : c.to_raw) {
      const Word* img = h.image(raw);
      Word w = img ? *img : Word{raw};
      if (w != Word{cn}) arc.label.images[cn] = w;
    }
    for (const auto& [s, w] : h.images)
      if (!c.to_raw.count(s) && !to_canon.count(s)) arc.label.images[s] = w;
  } else {
    arc.label = h;
  }
  arc.label.involutive = h.involutive;

  bool ins = false;
  const int id = graph_.add_vertex(next, &ins);
  arc.dst = id;
  if (ins) ++stats_.new_vertices;
  if (opt_.trace) {
    std::ostringstream o;
    o << kname << " " << vid_ << " -> " << id << " |W|=" << next.W.size() << " [" << show_endomorphism(alph_, arc.label)
      << "] forward=" << (fwd_ok ? "ok" : "FAIL");
    if (d.var >= 0) o << " " << alph_.name(d.var) << (d.word.empty() ? "" : " " + alph_.show(d.word, ""));
    trace_.push_back(o.str());
  }
  if (graph_.add_arc(std::move(arc))) ++stats_.new_arcs;
  ++stats_.arcs;
  ++stats_.by_kind[kname];
  if (is_final(alph_, next)) graph_.mark_final(id);
  cur_ = std::move(next);
  vid_ = id;
  alpha_ = std::move(nx.alpha);
  sigma_ = std::move(nx.sigma);
}

void WitnessRun::pop(Sym y) {
  const Word& s = sigma_.at(y);
  if (s.empty()) throw Error("pop from an empty variable");
  const Sym p = s.front();
  Word rest(s.begin() + 1, s.end());
  Next nx = start();
  const Sym yb = alph_.partner(y);
  nx.W = substitute_var(alph_, cur_.W, y, {p}, false);
  nx.mu[y] = eval(rest);
  nx.mu[yb] = ctx_.mu0.monoid->inv(nx.mu[y]);
  nx.sigma[yb] = alph_.involute(rest);
  nx.sigma[y] = std::move(rest);
  commit(ArcKind::Pop, {}, {y, {p}}, std::move(nx));
}

void WitnessRun::erase(Sym y) {
  const Sym yb = alph_.partner(y);
  Next nx = start();
  nx.W = substitute_var(alph_, cur_.W, y, {}, true);
  nx.X.erase(std::remove_if(nx.X.begin(), nx.X.end(), [&](Sym x) { return x == y || x == yb; }), nx.X.end());
  nx.mu.erase(y);
  nx.mu.erase(yb);
  nx.sigma.erase(y);
  nx.sigma.erase(yb);
  nx.theta.erase_mentioning({y, yb});
  commit(ArcKind::Erase, {}, {y, {}}, std::move(nx));
}

void WitnessRun::erase_empty() {
  const std::vector<Sym> X = cur_.X;
  for (Sym x : X)
    if (x < alph_.partner(x) && cur_.has_var(x) && sigma_.at(x).empty()) erase(x);
}

void WitnessRun::type_var(Sym y, Sym letter) {
  Next nx = start();
  nx.theta.add(alph_, {y}, {letter});
  commit(ArcKind::Type, {}, {y, {letter}}, std::move(nx));
}

void WitnessRun::reduce_alphabet() {
  std::set<Sym> keep(cur_.W.begin(), cur_.W.end());
  keep.insert(Alphabet::kMarker);
  keep.insert(ctx_.letters.begin(), ctx_.letters.end());
  for (const auto& [x, p] : cur_.theta.entries()) {
    keep.insert(x.begin(), x.end());
    keep.insert(p.begin(), p.end());
  }
  Next nx = start();
  nx.B.clear();
  for (Sym b : cur_.B)
    if (keep.count(b)) nx.B.push_back(b);
  if (nx.B == cur_.B && canonicalize(alph_, cur_).to_raw.empty()) return;
  for (auto& [x, w] : nx.sigma) {
    Word out;
    for (Sym t : w) {
      if (keep.count(t)) {
        out.push_back(t);
      } else {
        Word a = alpha_of(t);
        out.insert(out.end(), a.begin(), a.end());
      }
    }
    w = std::move(out);
  }
  for (Sym b : cur_.B)
    if (!keep.count(b)) {
      nx.alpha.erase(b);
      nx.mu.erase(b);
    }
  commit(ArcKind::Restrict, {}, {}, std::move(nx), true);
}

// ---- block compression ------------------------------------------------------

void WitnessRun::block_compression() {
  std::vector<Sym> reps;
  for (Sym x : cur_.X)
    if (x < alph_.partner(x)) reps.push_back(x);
  for (Sym x : reps)
    if (sigma_.at(x).size() <= 2) {
      while (!sigma_.at(x).empty()) pop(x);
      erase(x);
    }
  for (Sym y : std::vector<Sym>(cur_.X))
    if (cur_.has_var(y) && !sigma_.at(y).empty()) pop(y);
  erase_empty();
  std::vector<Sym> letters;
  for (Sym b : cur_.B)
    if (b != Alphabet::kMarker && b < alph_.partner(b)) letters.push_back(b);
  for (Sym b : letters)
    if (cur_.has_letter(b)) block_letter(b);
  reduce_alphabet();
  for (std::size_t i = 0; i + 1 < cur_.W.size(); ++i)
    if (cur_.W[i] != Alphabet::kMarker && cur_.W[i] == cur_.W[i + 1] && alph_.is_constant(cur_.W[i])) {
      stats_.fail(stats_.postcondition_failures, "block compression left " + alph_.name(cur_.W[i]) + "^2");
      break;
    }
  stats_.max_ratio_block = std::max(stats_.max_ratio_block, static_cast<double>(cur_.W.size()) / static_cast<double>(n_));
}

void WitnessRun::block_letter(Sym b) {
  const Sym bb = alph_.partner(b);
  std::set<std::size_t> lambdas;
  {
    auto E = expand(alph_, cur_.W, sigma_);
    for (Sym l : {b, bb})
      for (const Run& r : runs_of(E, [&](Sym s) { return s == l; }))
        if (r.len >= 2 && r.visible) lambdas.insert(r.len);
    if (lambdas.empty()) return;
    // Rename every block whose length is in Λ.
    auto [c, cb] = fresh_pair();
    Next nx = start();
    Decisions dec(alph_);
    for (Sym l : {b, bb})
      for (const Run& r : runs_of(E, [&](Sym s) { return s == l; })) {
        if (!lambdas.count(r.len)) continue;
        const Sym to = l == b ? c : cb;
        for (std::size_t k = r.start; k < r.start + r.len; ++k) {
          if (E[k].vpos < 0)
            nx.W[E[k].widx] = to;
          else
            dec.set(sigma_, cur_.W[E[k].widx], E[k].vpos, to);
        }
      }
    dec.apply(nx.sigma);
    nx.B.push_back(c);
    nx.B.push_back(cb);
    nx.mu[c] = cur_.mu.at(b);
    nx.mu[cb] = cur_.mu.at(bb);
    nx.alpha[c] = alpha_of(b);
    nx.alpha[cb] = alpha_of(bb);
    Endomorphism h;
    h.images[c] = {b};
    h.images[cb] = {bb};
    commit(ArcKind::Rename, h, {}, std::move(nx));
    b = c;  // from here on the block letter is c
  }
  const Sym c = b, cb = alph_.partner(c);

  std::set<Sym> cmark, cbmark;
  std::map<std::size_t, Sym> marker;
  std::map<std::size_t, std::size_t> ell;
  for (std::size_t lam : lambdas) {
    auto E = expand(alph_, cur_.W, sigma_);
    auto [m, mb] = fresh_pair();
    Next nx = start();
    Decisions dec(alph_);
    auto in_c = [&](Sym s) { return s == c || cmark.count(s) > 0; };
    auto in_cb = [&](Sym s) { return s == cb || cbmark.count(s) > 0; };
    for (int side = 0; side < 2; ++side) {
      auto rs = side == 0 ? runs_of(E, in_c) : runs_of(E, in_cb);
      const std::set<Sym>& marks = side == 0 ? cmark : cbmark;
      for (const Run& r : rs) {
        if (r.len != lam) continue;
        bool marked = false;
        for (std::size_t k = r.start; k < r.start + r.len; ++k) marked = marked || marks.count(E[k].s) > 0;
        if (marked) continue;
        // c-blocks get their marker first, c̄-blocks last, preferring visible letters.
        std::optional<std::size_t> at;
        for (std::size_t k = r.start; k < r.start + r.len; ++k)
          if (E[k].vpos < 0 && (side == 1 || !at)) at = k;
        if (!at) at = side == 0 ? r.start : r.start + r.len - 1;
        const Pos& p = E[*at];
        if (p.vpos < 0)
          nx.W[p.widx] = side == 0 ? m : mb;
        else
          dec.set(sigma_, cur_.W[p.widx], p.vpos, side == 0 ? m : mb);
      }
    }
    dec.apply(nx.sigma);
    nx.B.push_back(m);
    nx.B.push_back(mb);
    nx.theta.add(alph_, {m}, {c});
    nx.mu[m] = cur_.mu.at(c);
    nx.mu[mb] = cur_.mu.at(cb);
    nx.alpha[m] = alpha_.at(c);
    nx.alpha[mb] = alpha_.at(cb);
    Endomorphism h;
    h.images[m] = {c};
    h.images[mb] = {cb};
    commit(ArcKind::Rename, h, {}, std::move(nx));
    cmark.insert(m);
    cbmark.insert(mb);
    marker[lam] = m;
    ell[lam] = lam - 1;
  }

  auto typed_with = [&](Sym y) -> Sym {
    auto t = cur_.theta.type_of({y});
    return t && t->size() == 1 ? (*t)[0] : -1;
  };
  auto all_of_letter = [](const Word& w, Sym l) {
    return !w.empty() && std::all_of(w.begin(), w.end(), [&](Sym s) { return s == l; });
  };
  auto retype = [&]() {
    for (Sym y : std::vector<Sym>(cur_.X)) {
      if (y > alph_.partner(y) || !cur_.has_var(y) || typed_with(y) >= 0) continue;
      if (all_of_letter(sigma_.at(y), c))
        type_var(y, c);
      else if (all_of_letter(sigma_.at(y), cb))
        type_var(y, cb);
    }
  };
  retype();

  // Runs of W over {c, its markers, c-typed variables}; the c̄ side mirrors it.
  struct WRun {
    std::size_t start, end;
    std::size_t letters = 0;
    Sym mark = -1;
  };
  auto w_runs = [&](Sym letter, const std::set<Sym>& marks) {
    std::vector<WRun> out;
    const Word& W = cur_.W;
    auto in = [&](Sym s) { return s == letter || marks.count(s) || (alph_.is_variable(s) && typed_with(s) == letter); };
    for (std::size_t i = 0; i < W.size();) {
      if (!in(W[i])) {
        ++i;
        continue;
      }
      WRun r{i, i};
      while (i < W.size() && in(W[i])) {
        if (W[i] == letter) ++r.letters;
        if (marks.count(W[i])) r.mark = W[i];
        ++i;
      }
      r.end = i;
      out.push_back(r);
    }
    return out;
  };
  // Rebuilds every run of W with `keep(run)` copies of the letter in front.
  auto rebuild = [&](Word& W, Sym letter, const std::set<Sym>& marks, const std::function<std::size_t(const WRun&)>& keep) {
    auto rs = w_runs(letter, marks);
    Word out;
    std::size_t i = 0;
    for (const WRun& r : rs) {
      out.insert(out.end(), cur_.W.begin() + static_cast<std::ptrdiff_t>(i), cur_.W.begin() + static_cast<std::ptrdiff_t>(r.start));
      const std::size_t k = keep(r);
      for (std::size_t j = 0; j < k; ++j) out.push_back(letter);
      for (std::size_t j = r.start; j < r.end; ++j)
        if (cur_.W[j] != letter) out.push_back(cur_.W[j]);
      i = r.end;
    }
    out.insert(out.end(), cur_.W.begin() + static_cast<std::ptrdiff_t>(i), cur_.W.end());
    W = std::move(out);
  };
  auto leading = [](const Word& w, Sym l) {
    std::size_t k = 0;
    while (k < w.size() && w[k] == l) ++k;
    return k;
  };
  auto c_present = [&]() {
    for (Sym s : cur_.W)
      if (s == c || s == cb) return true;
    for (Sym x : cur_.X)
      for (Sym s : sigma_.at(x))
        if (s == c || s == cb) return true;
    return false;
  };

  for (int guard = 0;; ++guard) {
    if (guard > 200) throw Error("block compression does not converge");
    // Make every interior c-count even.
    for (Sym y : std::vector<Sym>(cur_.X)) {
      if (!cur_.has_var(y)) continue;
      const Sym t = typed_with(y);
      if (t >= 0) {
        if (y < alph_.partner(y) && sigma_.at(y).size() % 2 == 1) pop(y);
        continue;
      }
      for (int side = 0; side < 2; ++side) {
        const Word& s = sigma_.at(y);
        const Sym l = side == 0 ? c : cb;
        const std::set<Sym>& marks = side == 0 ? cmark : cbmark;
        const std::size_t k = leading(s, l);
        if (k % 2 == 1 && (k == s.size() || !marks.count(s[k]))) pop(y);
      }
    }
    retype();
    erase_empty();

    for (auto& [lam, l] : ell) {
      if (l % 2 == 0) continue;
      const Sym m = marker.at(lam), mb = alph_.partner(m);
      Next nx = start();
      Word W = cur_.W;
      auto take_one = [&](const WRun& r, Sym mk) -> std::size_t {
        if (r.mark != mk) return r.letters;
        if (r.letters == 0) throw Error("absorption without a visible letter");
        return r.letters - 1;
      };
      rebuild(W, c, cmark, [&](const WRun& r) { return take_one(r, m); });
      std::swap(W, cur_.W);  // rebuild reads cur_.W
      Word W2 = cur_.W;
      rebuild(W2, cb, cbmark, [&](const WRun& r) { return take_one(r, mb); });
      std::swap(W, cur_.W);
      nx.W = std::move(W2);
      for (auto& [x, w] : nx.sigma) {
        for (std::size_t i = 0; i < w.size(); ++i) {
          if (w[i] == m) {
            if (i + 1 >= w.size() || w[i + 1] != c) throw Error("interior absorption without a letter");
            w.erase(w.begin() + static_cast<std::ptrdiff_t>(i) + 1);
          } else if (w[i] == mb) {
            if (i == 0 || w[i - 1] != cb) throw Error("interior absorption without a letter");
            w.erase(w.begin() + static_cast<std::ptrdiff_t>(i) - 1);
            --i;
          }
        }
      }
      nx.mu[m] = eval({c, m});
      nx.mu[mb] = eval({mb, cb});
      nx.alpha[m] = concat(alpha_.at(c), alpha_.at(m));
      nx.alpha[mb] = concat(alpha_.at(mb), alpha_.at(cb));
      Endomorphism h;
      h.images[m] = {c, m};
      h.images[mb] = {mb, cb};
      commit(ArcKind::Compress, h, {}, std::move(nx));
      --l;
    }

    if (c_present()) {
      for (auto& [lam, l] : ell)
        if (l % 2) throw Error("block halving with an odd count");
      Next nx = start();
      auto half = [&](const WRun& r) -> std::size_t {
        if (r.letters % 2) throw Error("block halving with an odd visible run");
        return r.letters / 2;
      };
      Word W = cur_.W;
      rebuild(W, c, cmark, half);
      std::swap(W, cur_.W);
      Word W2 = cur_.W;
      rebuild(W2, cb, cbmark, half);
      std::swap(W, cur_.W);
      nx.W = std::move(W2);
      for (auto& [x, w] : nx.sigma) {
        Word out;
        for (std::size_t i = 0; i < w.size();) {
          if (w[i] != c && w[i] != cb) {
            out.push_back(w[i++]);
            continue;
          }
          const Sym l = w[i];
          std::size_t j = i;
          while (j < w.size() && w[j] == l) ++j;
          if ((j - i) % 2) throw Error("block halving with an odd interior run");
          for (std::size_t k = 0; k < (j - i) / 2; ++k) out.push_back(l);
          i = j;
        }
        w = std::move(out);
      }
      nx.mu[c] = eval({c, c});
      nx.mu[cb] = eval({cb, cb});
      nx.alpha[c] = power(alpha_.at(c), 2);
      nx.alpha[cb] = power(alpha_.at(cb), 2);
      Endomorphism h;
      h.images[c] = {c, c};
      h.images[cb] = {cb, cb};
      commit(ArcKind::Compress, h, {}, std::move(nx));
      for (auto& [lam, l] : ell) l /= 2;
    }
    erase_empty();
    bool zero = std::all_of(ell.begin(), ell.end(), [](const auto& e) { return e.second == 0; });
    if (zero) {
      if (c_present()) throw Error("block compression left letters behind");
      break;
    }
  }
  Next nx = start();
  nx.B.erase(std::remove_if(nx.B.begin(), nx.B.end(), [&](Sym s) { return s == c || s == cb; }), nx.B.end());
  nx.theta.erase_mentioning({c, cb});
  nx.mu.erase(c);
  nx.mu.erase(cb);
  nx.alpha.erase(c);
  nx.alpha.erase(cb);
  commit(ArcKind::Restrict, {}, {}, std::move(nx));
}

// ---- non-standard block compression -----------------------------------------

void WitnessRun::nonstandard_block_compression() {
  std::vector<Sym> reps;
  for (Sym x : cur_.X)
    if (x < alph_.partner(x)) reps.push_back(x);
  for (Sym x : reps)
    if (sigma_.at(x).size() <= 10) {
      while (!sigma_.at(x).empty()) pop(x);
      erase(x);
    }
  for (Sym y : std::vector<Sym>(cur_.X))
    if (cur_.has_var(y) && !sigma_.at(y).empty()) pop(y);
  erase_empty();
  std::vector<Sym> letters;
  for (Sym b : cur_.B)
    if (b != Alphabet::kMarker && b < alph_.partner(b)) letters.push_back(b);
  for (Sym a : letters)
    if (cur_.has_letter(a)) nonstandard_letter(a);
  reduce_alphabet();
  const Word& W = cur_.W;
  for (std::size_t i = 0; i + 2 < W.size(); ++i)
    if (W[i] != Alphabet::kMarker && alph_.is_constant(W[i]) && W[i + 1] == alph_.partner(W[i]) && W[i + 2] == W[i]) {
      stats_.fail(stats_.postcondition_failures, "non-standard compression left x x' x");
      break;
    }
}

void WitnessRun::nonstandard_letter(Sym a) {
  const Sym ab = alph_.partner(a);
  // Greedy maximal (a ā)-runs of σ(W), as [start, end) in E.
  auto unit_runs = [&](const std::vector<Pos>& E) {
    std::vector<Run> out;
    for (std::size_t i = 0; i + 1 < E.size();) {
      if (E[i].s != a || E[i + 1].s != ab) {
        ++i;
        continue;
      }
      Run r{i, 0};
      std::size_t j = i;
      while (j + 1 < E.size() && E[j].s == a && E[j + 1].s == ab) {
        for (std::size_t k = j; k < j + 2; ++k) (E[k].vpos < 0 ? r.visible : r.interior) = true;
        j += 2;
      }
      r.len = j - i;
      out.push_back(r);
      i = j;
    }
    return out;
  };
  for (int guard = 0;; ++guard) {
    if (guard > 10000) throw Error("uncrossing does not converge");
    auto E = expand(alph_, cur_.W, sigma_);
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> span;  // W index → E range
    for (std::size_t k = 0; k < E.size(); ++k) {
      auto [it, ins] = span.emplace(E[k].widx, std::make_pair(k, k));
      it->second.second = k;
    }
    std::set<Sym> to_pop;
    for (const Run& r : unit_runs(E)) {
      if (!(r.visible && r.interior)) continue;
      for (std::size_t k = r.start; k < r.start + r.len; ++k) {
        if (E[k].vpos < 0) continue;
        const Sym y = cur_.W[E[k].widx];
        auto [first, last] = span.at(E[k].widx);
        if (r.start < first) to_pop.insert(y);
        if (r.start + r.len - 1 > last) to_pop.insert(alph_.partner(y));
      }
    }
    if (to_pop.empty()) break;
    for (Sym y : to_pop)
      if (cur_.has_var(y) && !sigma_.at(y).empty()) pop(y);
    erase_empty();
  }

  auto E = expand(alph_, cur_.W, sigma_);
  std::set<std::size_t> lambdas;
  for (const Run& r : unit_runs(E))
    if (r.visible) lambdas.insert(r.len / 2);
  if (lambdas.empty()) return;
  auto [c, cb] = fresh_pair();
  {
    Next nx = start();
    for (const Run& r : unit_runs(E)) {
      if (!r.visible) continue;
      for (std::size_t k = r.start; k < r.start + r.len; ++k) nx.W[E[k].widx] = E[k].s == a ? c : cb;
    }
    nx.B.push_back(c);
    nx.B.push_back(cb);
    nx.mu[c] = cur_.mu.at(a);
    nx.mu[cb] = cur_.mu.at(ab);
    nx.alpha[c] = alpha_of(a);
    nx.alpha[cb] = alpha_of(ab);
    Endomorphism h;
    h.images[c] = {a};
    h.images[cb] = {ab};
    commit(ArcKind::Rename, h, {}, std::move(nx));
  }

  std::map<std::size_t, std::size_t> ell;
  std::map<std::size_t, Sym> marker;
  std::set<Sym> marks;
  for (std::size_t lam : lambdas) ell[lam] = lam;
  struct URun {
    std::size_t start, end, units = 0;
    Sym mark = -1;
  };
  auto w_runs = [&]() {
    std::vector<URun> out;
    const Word& W = cur_.W;
    auto unit_at = [&](std::size_t i) { return i + 1 < W.size() && W[i] == c && W[i + 1] == cb; };
    auto mark_at = [&](std::size_t i) {
      return i + 1 < W.size() && marks.count(W[i]) && W[i + 1] == alph_.partner(W[i]);
    };
    for (std::size_t i = 0; i < W.size();) {
      if (!unit_at(i) && !mark_at(i)) {
        ++i;
        continue;
      }
      URun r{i, i};
      while (unit_at(i) || mark_at(i)) {
        if (unit_at(i))
          ++r.units;
        else
          r.mark = W[i];
        i += 2;
      }
      r.end = i;
      out.push_back(r);
    }
    return out;
  };
  // Rewrites each run as [marker] (c c̄)^keep(run).
  auto rebuild = [&](const std::function<std::size_t(const URun&)>& keep, Sym new_mark_for_unmarked,
                     std::size_t unmarked_units) {
    Word out;
    std::size_t i = 0;
    for (const URun& r : w_runs()) {
      out.insert(out.end(), cur_.W.begin() + static_cast<std::ptrdiff_t>(i), cur_.W.begin() + static_cast<std::ptrdiff_t>(r.start));
      std::size_t k = keep(r);
      Sym mk = r.mark;
      if (mk < 0 && new_mark_for_unmarked >= 0 && r.units == unmarked_units) {
        mk = new_mark_for_unmarked;
        --k;
      }
      if (mk >= 0) {
        out.push_back(mk);
        out.push_back(alph_.partner(mk));
      }
      for (std::size_t j = 0; j < k; ++j) {
        out.push_back(c);
        out.push_back(cb);
      }
      i = r.end;
    }
    out.insert(out.end(), cur_.W.begin() + static_cast<std::ptrdiff_t>(i), cur_.W.end());
    return out;
  };

  for (int guard = 0;; ++guard) {
    if (guard > 200) throw Error("non-standard compression does not converge");
    bool done = true;
    for (const auto& [lam, l] : ell) done = done && l == 0 && marker.count(lam);
    if (done) break;
    for (auto& [lam, l] : ell) {
      if (marker.count(lam) || l % 2 == 0) continue;
      auto [m, mb] = fresh_pair();
      Next nx = start();
      nx.W = rebuild([](const URun& r) { return r.units; }, m, l);
      nx.B.push_back(m);
      nx.B.push_back(mb);
      nx.theta.add(alph_, {m, mb}, {c, cb});
      nx.mu[m] = cur_.mu.at(c);
      nx.mu[mb] = cur_.mu.at(cb);
      nx.alpha[m] = alpha_.at(c);
      nx.alpha[mb] = alpha_.at(cb);
      Endomorphism h;
      h.images[m] = {c};
      h.images[mb] = {cb};
      commit(ArcKind::Rename, h, {}, std::move(nx));
      marks.insert(m);
      marker[lam] = m;
      --l;
    }
    for (auto& [lam, l] : ell) {
      if (!marker.count(lam) || l % 4 != 2) continue;
      const Sym m = marker.at(lam), mb = alph_.partner(m);
      Next nx = start();
      nx.W = rebuild(
          [&](const URun& r) {
            if (r.mark != m) return r.units;
            if (r.units < 2) throw Error("non-standard absorption without units");
            return r.units - 2;
          },
          -1, 0);
      nx.mu[m] = eval({c, cb, m});
      nx.mu[mb] = eval({mb, c, cb});
      nx.alpha[m] = concat(alpha_.at(c), alpha_.at(cb), alpha_.at(m));
      nx.alpha[mb] = concat(alpha_.at(mb), alpha_.at(c), alpha_.at(cb));
      Endomorphism h;
      h.images[m] = {c, cb, m};
      h.images[mb] = {mb, c, cb};
      commit(ArcKind::Compress, h, {}, std::move(nx));
      l -= 2;
    }
    bool units = false;
    for (const URun& r : w_runs()) units = units || r.units > 0;
    if (units) {
      for (const auto& [lam, l] : ell)
        if (l % 2) throw Error("non-standard halving with an odd count");
      Next nx = start();
      nx.W = rebuild(
          [](const URun& r) {
            if (r.units % 2) throw Error("non-standard halving with an odd run");
            return r.units / 2;
          },
          -1, 0);
      const Word cc = concat(alpha_.at(c), alpha_.at(cb));
      nx.mu[c] = eval({c, cb});
      nx.mu[cb] = eval({c, cb});
      nx.alpha[c] = cc;
      nx.alpha[cb] = cc;
      Endomorphism h;
      h.images[c] = {c, cb};
      h.images[cb] = {c, cb};
      commit(ArcKind::Compress, h, {}, std::move(nx));
      for (auto& [lam, l] : ell) l /= 2;
    }
  }
  Next nx = start();
  for (Sym s : cur_.W)
    if (s == c || s == cb) throw Error("non-standard compression left letters behind");
  nx.B.erase(std::remove_if(nx.B.begin(), nx.B.end(), [&](Sym s) { return s == c || s == cb; }), nx.B.end());
  nx.theta.erase_mentioning({c, cb});
  nx.mu.erase(c);
  nx.mu.erase(cb);
  nx.alpha.erase(c);
  nx.alpha.erase(cb);
  commit(ArcKind::Restrict, {}, {}, std::move(nx));
}

// ---- pair compression ---------------------------------------------------------

void WitnessRun::pair_compression() {
  erase_empty();
  std::vector<Sym> plus;
  for (Sym b : cur_.B)
    if (b != Alphabet::kMarker && b < alph_.partner(b)) plus.push_back(b);
  std::map<std::pair<Sym, Sym>, std::size_t> counts;
  {
    auto E = expand(alph_, cur_.W, sigma_);
    for (std::size_t i = 0; i + 1 < E.size(); ++i) {
      Sym x = E[i].s, y = E[i + 1].s;
      if (x == Alphabet::kMarker || y == Alphabet::kMarker || y == alph_.partner(x)) continue;
      ++counts[{x, y}];
    }
  }
  std::unordered_map<Sym, std::size_t> idx;
  for (std::size_t i = 0; i < plus.size(); ++i) idx[plus[i]] = i;
  auto left = [&](Sym s, std::uint64_t mask) {
    const bool bit = (mask >> idx.at(std::min(s, alph_.partner(s)))) & 1u;
    return s < alph_.partner(s) ? bit : !bit;
  };
  auto score = [&](std::uint64_t mask) {
    std::size_t v = 0;
    for (const auto& [xy, k] : counts)
      if (left(xy.first, mask) && !left(xy.second, mask)) v += k;
    return v;
  };
  std::uint64_t best = 0;
  std::size_t best_score = score(0);
  if (plus.size() <= 12) {
    for (std::uint64_t m = 1; m < (1ull << plus.size()); ++m)
      if (auto s = score(m); s > best_score) {
        best_score = s;
        best = m;
      }
  } else {
    const std::uint64_t full = plus.size() >= 64 ? ~0ull : (1ull << plus.size()) - 1;
    for (int t = 0; t < 4096; ++t) {
      std::uint64_t m = rng_() & full;
      if (auto s = score(m); s > best_score) {
        best_score = s;
        best = m;
      }
    }
  }
  std::map<Sym, bool> in_left;
  for (Sym b : plus) {
    in_left[b] = left(b, best);
    in_left[alph_.partner(b)] = !in_left[b];
  }
  auto L = [&](Sym s) {
    auto it = in_left.find(s);
    return it != in_left.end() && it->second;
  };
  auto R = [&](Sym s) {
    auto it = in_left.find(s);
    return it != in_left.end() && !it->second;
  };

  for (Sym y : std::vector<Sym>(cur_.X))
    if (cur_.has_var(y) && !sigma_.at(y).empty() && R(sigma_.at(y).front())) pop(y);
  erase_empty();

  std::set<std::pair<Sym, Sym>> kinds;
  for (std::size_t i = 0; i + 1 < cur_.W.size(); ++i) {
    Sym x = cur_.W[i], y = cur_.W[i + 1];
    if (L(x) && R(y) && y != alph_.partner(x)) {
      std::pair<Sym, Sym> k{x, y}, kb{alph_.partner(y), alph_.partner(x)};
      kinds.insert(std::min(k, kb));
    }
  }
  for (const auto& [x, y] : kinds) {
    const Sym yb = alph_.partner(y), xb = alph_.partner(x);
    auto [c, cb] = fresh_pair();
    auto replace = [&](const Word& w) {
      Word out;
      for (std::size_t i = 0; i < w.size();) {
        if (i + 1 < w.size() && w[i] == x && w[i + 1] == y) {
          out.push_back(c);
          i += 2;
        } else if (i + 1 < w.size() && w[i] == yb && w[i + 1] == xb) {
          out.push_back(cb);
          i += 2;
        } else {
          out.push_back(w[i++]);
        }
      }
      return out;
    };
    Next nx = start();
    nx.W = replace(cur_.W);
    for (auto& [v, w] : nx.sigma) w = replace(w);
    nx.B.push_back(c);
    nx.B.push_back(cb);
    nx.mu[c] = eval({x, y});
    nx.mu[cb] = eval({yb, xb});
    nx.alpha[c] = concat(alpha_of(x), alpha_of(y));
    nx.alpha[cb] = concat(alpha_of(yb), alpha_of(xb));
    Endomorphism h;
    h.images[c] = {x, y};
    h.images[cb] = {yb, xb};
    commit(ArcKind::Compress, h, {}, std::move(nx));
  }
  reduce_alphabet();
  const double ratio = static_cast<double>(cur_.W.size()) / static_cast<double>(n_);
  stats_.max_ratio_pair = std::max(stats_.max_ratio_pair, ratio);
  if (cur_.W.size() > 29 * n_) stats_.fail(stats_.postcondition_failures, "pair compression exceeded 29n");
}

void WitnessRun::run() {
  for (std::size_t round = 0; !at_final(); ++round) {
    if (round > 10000) throw Error("too many compression rounds");
    ++stats_.rounds;
    block_compression();
    if (at_final()) break;
    if (ctx_.encoded) {
      nonstandard_block_compression();
      if (at_final()) break;
    }
    pair_compression();
  }
}

// ---- expectation helpers ------------------------------------------------------

std::size_t compressed_length(const Alphabet& alph, const Word& w, const std::unordered_map<Sym, bool>& in_left) {
  std::size_t len = w.size();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    auto l = in_left.find(w[i]);
    auto r = in_left.find(w[i + 1]);
    if (l == in_left.end() || r == in_left.end()) continue;
    if (l->second && !r->second && w[i + 1] != alph.partner(w[i])) {
      --len;
      ++i;
    }
  }
  return len;
}

boost::rational<long long> expected_pair_compressed_length(const Alphabet& alph, const Word& w) {
  std::vector<Sym> reps;
  for (Sym s : w) reps.push_back(std::min(s, alph.partner(s)));
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  if (reps.size() > 20) throw Error("too many letters for an exact expectation");
  long long total = 0;
  const std::uint64_t count = 1ull << reps.size();
  for (std::uint64_t m = 0; m < count; ++m) {
    std::unordered_map<Sym, bool> in_left;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      in_left[reps[i]] = (m >> i) & 1u;
      in_left[alph.partner(reps[i])] = !((m >> i) & 1u);
    }
    total += static_cast<long long>(compressed_length(alph, w, in_left));
  }
  return {total, static_cast<long long>(count)};
}

}  // namespace weq
