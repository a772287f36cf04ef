#include "weq/reduction.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "weq/free_product.hpp"

namespace weq {

SolverContext make_context(const Problem& p) {
  SolverContext ctx;
  ctx.problem = &p;
  const Alphabet& alph = *p.alph;
  ctx.encoded = p.mode != Mode::FreeGroup;
  ctx.letters = ctx.encoded ? p.spec.encoded_letters() : p.letters();

  std::vector<ConstraintMorphism> owned;
  owned.reserve(2 + p.automata.size());
  std::vector<bool> structural;
  if (!ctx.encoded) {
    owned.push_back(build_reduced_word_monoid(alph, ctx.letters).mu0);
    structural.push_back(true);
    ctx.components.push_back("reduced words");
  } else {
    owned.push_back(build_iota_recognizer(p.spec));
    structural.push_back(true);
    ctx.components.push_back("encoding");
    auto pc = build_product_constraint_monoid(p.spec);
    std::unordered_map<Sym, Elem> rho;
    for (Sym x : ctx.letters) rho[x] = p.spec.is_hat(x) ? pc.monoid->one() : pc.psi.images.at(x);
    rho[Alphabet::kMarker] = *pc.monoid->zero();
    owned.push_back(dual_lift(alph, pc.monoid, rho));
    structural.push_back(true);
    ctx.components.push_back("geodesics and units");
  }
  for (const auto& ua : p.automata) {
    std::unordered_map<Sym, Elem> rho;
    for (Sym x : ctx.letters) rho[x] = ua.rec.eval(ctx.encoded ? p.spec.eta({x}) : Word{x});
    rho[Alphabet::kMarker] = *ua.rec.monoid->zero();
    owned.push_back(dual_lift(alph, ua.rec.monoid, rho));
    structural.push_back(false);
    ctx.components.push_back("automaton " + ua.name);
  }
  std::vector<const ConstraintMorphism*> parts;
  for (const auto& m : owned) parts.push_back(&m);
  ctx.mu0 = product_morphism(parts, structural);
  return ctx;
}

Sym ensure_variable(Alphabet& alph, const std::string& name) {
  Sym s = alph.lookup(name);
  if (s >= 0) {
    if (!alph.is_variable(s)) throw Error("name clash with a constant: " + name);
    return s;
  }
  return alph.add_pair(name, name + "'", SymKind::Variable);
}

std::vector<Triangle> define_by_triangles(Alphabet& alph, Sym x, const Word& w, const std::string& tag) {
  if (w.size() < 2) throw Error("cannot triangulate a word of length < 2");
  std::vector<Triangle> out;
  Sym prev = w[0];
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    Sym t = ensure_variable(alph, tag + "_" + std::to_string(i));
    out.push_back({t, prev, w[i]});
    prev = t;
  }
  out.push_back({x, prev, w.back()});
  return out;
}

Triangulation triangulate(Alphabet& alph, const Word& U, const Word& V, const std::string& tag) {
  Triangulation t;
  t.lhs = ensure_variable(alph, "_X" + tag);
  t.unit = ensure_variable(alph, "_Y" + tag);
  Word u = concat(U, {t.unit, t.unit}), v = concat(V, {t.unit, t.unit});
  t.triangles = define_by_triangles(alph, t.lhs, u, "_T" + tag + "a");
  auto more = define_by_triangles(alph, t.lhs, v, "_T" + tag + "b");
  t.triangles.insert(t.triangles.end(), more.begin(), more.end());
  return t;
}

GroupSplit group_to_monoid(Alphabet& alph, const Triangle& t, const std::string& tag) {
  GroupSplit g;
  g.P = ensure_variable(alph, "_P" + tag);
  g.Q = ensure_variable(alph, "_Q" + tag);
  g.R = ensure_variable(alph, "_R" + tag);
  g.equations = {{{t.x}, {g.P, g.R}}, {{t.y}, {g.P, g.Q}}, {{t.z}, {alph.partner(g.Q), g.R}}};
  return g;
}

SplitValues split_reduced(const Alphabet& alph, const Word& y, const Word& z) {
  std::size_t k = 0;
  while (k < y.size() && k < z.size() && alph.partner(y[y.size() - 1 - k]) == z[k]) ++k;
  SplitValues s;
  s.P.assign(y.begin(), y.end() - static_cast<std::ptrdiff_t>(k));
  s.Q.assign(y.end() - static_cast<std::ptrdiff_t>(k), y.end());
  s.R.assign(z.begin() + static_cast<std::ptrdiff_t>(k), z.end());
  return s;
}

Word build_initial_word(const Alphabet& alph, const std::vector<Sym>& xlist,
                        const std::vector<std::pair<Word, Word>>& equations) {
  const Sym hash = Alphabet::kMarker;
  Word U, V;
  for (std::size_t i = 0; i < equations.size(); ++i) {
    if (i) {
      U.push_back(hash);
      V.push_back(hash);
    }
    U.insert(U.end(), equations[i].first.begin(), equations[i].first.end());
    V.insert(V.end(), equations[i].second.begin(), equations[i].second.end());
  }
  Word W{hash};
  for (Sym x : xlist) {
    W.push_back(x);
    W.push_back(hash);
  }
  for (const Word* part : {&U, &V}) {
    W.insert(W.end(), part->begin(), part->end());
    W.push_back(hash);
  }
  for (const Word& part : {alph.involute(U), alph.involute(V)}) {
    W.insert(W.end(), part.begin(), part.end());
    W.push_back(hash);
  }
  for (std::size_t i = xlist.size(); i-- > 0;) {
    W.push_back(alph.partner(xlist[i]));
    W.push_back(hash);
  }
  return W;
}

namespace {

std::string show_eq(const Alphabet& alph, const std::pair<Word, Word>& e) {
  auto s = [&](const Word& w) { return w.empty() ? std::string("1") : alph.show(w, " "); };
  return s(e.first) + " = " + s(e.second);
}

}  // namespace

WitnessInstance build_witness_instance(const SolverContext& ctx, const Branch& branch,
                                       const std::vector<Word>& values) {
  const Problem& p = *ctx.problem;
  Alphabet& alph = *p.alph;
  const bool group = p.mode != Mode::FreeMonoid;
  WitnessInstance wi;
  std::map<Sym, Word> val;
  for (std::size_t i = 0; i < p.vars.size(); ++i) {
    val[p.vars[i]] = values.at(i);
    val[alph.partner(p.vars[i])] = p.raw_involute(values.at(i));
  }
  auto value = [&](const Word& w) {
    Word out;
    for (Sym s : w) {
      if (alph.is_variable(s)) {
        const Word& v = val.at(s);
        out.insert(out.end(), v.begin(), v.end());
      } else {
        out.push_back(s);
      }
    }
    return group ? p.spec.normal_form(out) : out;
  };
  auto assign = [&](Sym x, const Word& v) {
    auto it = val.find(x);
    if (it != val.end() && it->second != v)
      throw Error("inconsistent witness value for " + alph.name(x));
    val[x] = v;
    val[alph.partner(x)] = p.raw_involute(v);
  };
  std::vector<std::pair<Word, Word>> raw;
  auto shape = [&](const Word& lhs, const Word& rhs, std::size_t i) {
    auto sp = split_inequality(value(lhs), value(rhs));
    if (!sp) throw Error("witness does not satisfy an inequality");
    const std::string t = std::to_string(i);
    Sym P = ensure_variable(alph, "_NP" + t), Q = ensure_variable(alph, "_NQ" + t),
        R = ensure_variable(alph, "_NR" + t);
    assign(R, sp->R);
    switch (sp->branch.shape) {
      case NeqShape::Differ:
        assign(P, sp->P);
        assign(Q, sp->Q);
        raw.push_back({lhs, {P, sp->branch.b, Q}});
        raw.push_back({rhs, {P, sp->branch.c, R}});
        wi.report.push_back("inequality " + t + ": differ at " + alph.name(sp->branch.b) + "/" +
                            alph.name(sp->branch.c));
        break;
      case NeqShape::LeftPrefix:
        raw.push_back({rhs, concat(lhs, {sp->branch.b, R})});
        wi.report.push_back("inequality " + t + ": left side is a proper prefix");
        break;
      case NeqShape::RightPrefix:
        raw.push_back({lhs, concat(rhs, {sp->branch.b, R})});
        wi.report.push_back("inequality " + t + ": right side is a proper prefix");
        break;
    }
  };

  if (!group) {
    for (std::size_t i = 0; i < branch.size(); ++i) {
      const Atom& a = branch[i];
      if (a.kind == AtomKind::Eq) raw.push_back({a.lhs, a.rhs});
      if (a.kind == AtomKind::Neq) shape(a.lhs, a.rhs, i);
    }
  } else {
    std::vector<Triangle> tris;
    auto define = [&](const std::vector<Triangle>& ts) {
      for (const auto& t : ts) {
        assign(t.x, value({t.y, t.z}));
        tris.push_back(t);
      }
    };
    for (std::size_t i = 0; i < branch.size(); ++i) {
      const Atom& a = branch[i];
      const std::string t = std::to_string(i);
      if (a.kind == AtomKind::Eq) {
        auto tr = triangulate(alph, a.lhs, a.rhs, t);
        assign(tr.unit, {});
        define(tr.triangles);
      } else if (a.kind == AtomKind::Neq) {
        Sym x = ensure_variable(alph, "_X" + t), z = ensure_variable(alph, "_Z" + t),
            y = ensure_variable(alph, "_Y" + t);
        assign(y, {});
        define(define_by_triangles(alph, x, concat(a.lhs, {y, y}), "_T" + t + "a"));
        define(define_by_triangles(alph, z, concat(a.rhs, {y, y}), "_T" + t + "b"));
        shape({x}, {z}, i);
      }
    }
    for (std::size_t j = 0; j < tris.size(); ++j) {
      const Triangle& t = tris[j];
      const std::string tag = std::to_string(j);
      const Word vy = value({t.y}), vz = value({t.z});
      if (p.mode == Mode::FreeGroup) {
        auto g = group_to_monoid(alph, t, tag);
        auto sv = split_reduced(alph, vy, vz);
        assign(g.P, sv.P);
        assign(g.Q, sv.Q);
        assign(g.R, sv.R);
        raw.insert(raw.end(), g.equations.begin(), g.equations.end());
      } else {
        Sym P = ensure_variable(alph, "_P" + tag), Q = ensure_variable(alph, "_Q" + tag),
            R = ensure_variable(alph, "_R" + tag);
        auto sp = split_product(p.spec, vy, vz);
        assign(P, sp.P);
        assign(Q, sp.Q);
        assign(R, sp.R);
        auto opt = [](Sym s) { return s >= 0 ? Word{s} : Word{}; };
        raw.push_back({{t.x}, concat(concat(Word{P}, opt(sp.branch.a)), Word{Q})});
        raw.push_back({{t.y}, concat(concat(Word{P}, opt(sp.branch.b)), Word{R})});
        raw.push_back({{t.z}, concat(concat(Word{alph.partner(R)}, opt(sp.branch.c)), Word{Q})});
      }
    }
  }

  auto encode = [&](const Word& w) {
    Word out;
    for (Sym s : w) {
      if (alph.is_variable(s)) {
        out.push_back(s);
      } else {
        Word e = p.spec.iota({s});
        out.insert(out.end(), e.begin(), e.end());
      }
    }
    return out;
  };
  std::set<Sym> vars;
  for (Sym v : p.vars) {
    vars.insert(v);
    vars.insert(alph.partner(v));
  }
  for (const auto& [l, r] : raw)
    for (const Word* w : {&l, &r})
      for (Sym s : *w)
        if (alph.is_variable(s)) {
          vars.insert(s);
          vars.insert(alph.partner(s));
        }
  wi.vars.assign(vars.begin(), vars.end());
  for (const auto& [l, r] : raw) wi.equations.push_back({encode(l), encode(r)});
  for (Sym v : wi.vars) {
    if (!val.count(v)) throw Error("no witness value for " + alph.name(v));
    wi.sigma[v] = p.spec.iota(val.at(v));
  }
  for (Sym v : wi.vars)
    if (alph.involute(wi.sigma.at(v)) != wi.sigma.at(alph.partner(v)))
      throw Error("witness values do not respect the involution");
  auto apply = [&](const Word& w) {
    Word out;
    for (Sym s : w) {
      if (alph.is_variable(s))
        out.insert(out.end(), wi.sigma.at(s).begin(), wi.sigma.at(s).end());
      else
        out.push_back(s);
    }
    return out;
  };
  for (const auto& e : wi.equations)
    if (apply(e.first) != apply(e.second))
      throw Error("witness does not solve " + show_eq(alph, e));

  std::set<Sym> tset(p.targets.begin(), p.targets.end());
  wi.xlist = p.targets;
  for (Sym v : wi.vars)
    if (!tset.count(v)) wi.xlist.push_back(v);
  wi.xlist.insert(wi.xlist.end(), ctx.letters.begin(), ctx.letters.end());
  wi.W = build_initial_word(alph, wi.xlist, wi.equations);
  wi.n = wi.W.size();
  wi.markers = static_cast<std::size_t>(std::count(wi.W.begin(), wi.W.end(), Alphabet::kMarker));
  wi.mu[Alphabet::kMarker] = ctx.mu0.at(Alphabet::kMarker);
  for (Sym a : ctx.letters) wi.mu[a] = ctx.mu0.at(a);
  for (Sym v : wi.vars) wi.mu[v] = ctx.mu0.eval(wi.sigma.at(v));
  for (const auto& e : wi.equations) wi.report.push_back(show_eq(alph, e));
  return wi;
}

std::vector<std::map<Sym, Elem>> guess_mu_init(const SolverContext& ctx,
                                               const std::vector<std::pair<Word, Word>>& equations,
                                               const std::vector<Sym>& vars, std::size_t cap) {
  const Problem& p = *ctx.problem;
  const Alphabet& alph = *p.alph;
  const Monoid& m = *ctx.mu0.monoid;
  std::vector<Elem> gens;
  for (Sym a : ctx.letters) gens.push_back(ctx.mu0.at(a));
  std::vector<Elem> cands;
  for (Elem e : generated_submonoid(m, gens))
    if (!m.is_zero(e)) cands.push_back(e);
  std::sort(cands.begin(), cands.end());

  std::vector<Sym> reps;
  for (Sym v : vars)
    if (v < alph.partner(v)) reps.push_back(v);
  std::map<Sym, std::size_t> depth;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    depth[reps[i]] = i + 1;
    depth[alph.partner(reps[i])] = i + 1;
  }
  std::vector<std::vector<std::size_t>> due(reps.size() + 1);
  for (std::size_t k = 0; k < equations.size(); ++k) {
    std::size_t d = 0;
    for (const Word* w : {&equations[k].first, &equations[k].second})
      for (Sym s : *w)
        if (alph.is_variable(s)) d = std::max(d, depth.at(s));
    due[d].push_back(k);
  }
  std::map<Sym, Elem> mu;
  for (Sym a : ctx.letters) mu[a] = ctx.mu0.at(a);
  auto eval = [&](const Word& w) {
    Elem e = m.one();
    for (Sym s : w) e = m.mul(e, mu.at(s));
    return e;
  };
  std::vector<std::map<Sym, Elem>> out;
  std::function<bool(std::size_t)> rec = [&](std::size_t d) {
    for (std::size_t k : due[d])
      if (eval(equations[k].first) != eval(equations[k].second)) return true;
    if (d == reps.size()) {
      std::map<Sym, Elem> r;
      for (Sym v : vars) r[v] = mu.at(v);
      out.push_back(std::move(r));
      return out.size() < cap;
    }
    Sym x = reps[d];
    for (Elem e : cands) {
      mu[x] = e;
      mu[alph.partner(x)] = m.inv(e);
      if (!rec(d + 1)) return false;
    }
    mu.erase(x);
    mu.erase(alph.partner(x));
    return true;
  };
  rec(0);
  return out;
}

}  // namespace weq
