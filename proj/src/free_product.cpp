#include "weq/free_product.hpp"

#include <algorithm>

namespace weq {

void FreeProductSpec::register_letter(const Alphabet& alph, Sym s, int factor, int element, Sym raw_partner,
                                      Sym hat) {
  LetterInfo li;
  li.factor = factor;
  li.element = element;
  li.raw_partner = raw_partner;
  li.hat = hat;
  li.name = alph.name(s);
  info_[s] = li;
  factors_[factor].letters.push_back(s);
  letters_.push_back(s);
  std::sort(letters_.begin(), letters_.end());
  if (hat >= 0) hats_.insert(hat);
}

void FreeProductSpec::add_free_group(Alphabet& alph, const std::vector<std::string>& names) {
  factors_.push_back(Factor{FactorKind::FreeGroup, "free-group", {}, {}, {}, {}});
  int f = static_cast<int>(factors_.size()) - 1;
  for (const auto& n : names) {
    Sym a = alph.add_pair(n, n + "'", SymKind::Constant);
    register_letter(alph, a, f, -1, a + 1, -1);
    register_letter(alph, a + 1, f, -1, a, -1);
  }
}

void FreeProductSpec::add_free_monoid(Alphabet& alph, const std::vector<std::string>& names,
                                      const std::vector<std::pair<std::string, std::string>>& inv) {
  factors_.push_back(Factor{FactorKind::FreeMonoid, "free-monoid", {}, {}, {}, {}});
  int f = static_cast<int>(factors_.size()) - 1;
  std::unordered_map<std::string, std::string> partner;
  for (const auto& [x, y] : inv) {
    if (partner.count(x) || partner.count(y)) throw Error("free monoid: letter '" + x + "' paired twice");
    partner[x] = y;
    partner[y] = x;
  }
  std::unordered_set<std::string> declared(names.begin(), names.end());
  for (const auto& [x, y] : inv)
    if (!declared.count(x) && !declared.count(y))
      throw Error("free monoid: involution mentions undeclared letter '" + x + "'");
  std::unordered_set<std::string> done;
  for (const auto& n : names) {
    if (done.count(n)) continue;
    auto it = partner.find(n);
    std::string p = it == partner.end() ? n + "'" : it->second;
    if (p == n) {
      Sym a = alph.add_pair(n, n + "^", SymKind::Constant);
      register_letter(alph, a, f, -1, a, a + 1);
    } else {
      Sym a = alph.add_pair(n, p, SymKind::Constant);
      register_letter(alph, a, f, -1, a + 1, -1);
      register_letter(alph, a + 1, f, -1, a, -1);
      done.insert(p);
    }
    done.insert(n);
  }
}

void FreeProductSpec::add_finite_group(Alphabet& alph, const std::string& name,
                                       const std::vector<std::string>& elements,
                                       const std::vector<std::vector<int>>& table) {
  const int n = static_cast<int>(elements.size());
  if (n == 0) throw Error("finite group '" + name + "': no elements");
  if (static_cast<int>(table.size()) != n) throw Error("finite group '" + name + "': table has wrong size");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw Error("finite group '" + name + "': ragged table");
    for (int v : row)
      if (v < 0 || v >= n) throw Error("finite group '" + name + "': entry out of range");
  }
  for (int x = 0; x < n; ++x)
    if (table[0][x] != x || table[x][0] != x) throw Error("finite group '" + name + "': first element is not the identity");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (table[table[x][y]][z] != table[x][table[y][z]]) throw Error("finite group '" + name + "': not associative");
  std::vector<int> inverse(n, -1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (table[x][y] == 0 && table[y][x] == 0) inverse[x] = y;
  for (int x = 0; x < n; ++x)
    if (inverse[x] < 0) throw Error("finite group '" + name + "': element without inverse");

  factors_.push_back(Factor{FactorKind::FiniteGroup, name, {}, elements, table, std::vector<Sym>(n, -1)});
  int f = static_cast<int>(factors_.size()) - 1;
  for (int x = 1; x < n; ++x) {
    int y = inverse[x];
    if (y < x) continue;
    if (y == x) {
      Sym a = alph.add_pair(elements[x], elements[x] + "^", SymKind::Constant);
      factors_[f].element_letter[x] = a;
      register_letter(alph, a, f, x, a, a + 1);
    } else {
      Sym a = alph.add_pair(elements[x], elements[y], SymKind::Constant);
      factors_[f].element_letter[x] = a;
      factors_[f].element_letter[y] = a + 1;
      register_letter(alph, a, f, x, a + 1, -1);
      register_letter(alph, a + 1, f, y, a, -1);
    }
  }
}

const FreeProductSpec::LetterInfo& FreeProductSpec::info(Sym s) const {
  auto it = info_.find(s);
  if (it == info_.end()) throw Error("not a factor letter: " + std::to_string(s));
  return it->second;
}

bool FreeProductSpec::is_unit(Sym s) const { return kind_of(s) != FactorKind::FreeMonoid; }

bool FreeProductSpec::is_infinite() const {
  int finite_nontrivial = 0;
  for (const auto& f : factors_) {
    if (f.letters.empty()) continue;
    if (f.kind != FactorKind::FiniteGroup) return true;
    ++finite_nontrivial;
  }
  return finite_nontrivial >= 2;
}

bool FreeProductSpec::adjacent_ok(Sym a, Sym b) const {
  const auto& ia = info(a);
  const auto& ib = info(b);
  switch (factors_[ia.factor].kind) {
    case FactorKind::FreeGroup:
      return b != ia.raw_partner;
    case FactorKind::FiniteGroup:
      return ia.factor != ib.factor;
    case FactorKind::FreeMonoid:
      return true;
  }
  return true;
}

bool FreeProductSpec::is_geodesic(const Word& w) const {
  for (Sym s : w)
    if (!is_letter(s)) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!adjacent_ok(w[i], w[i + 1])) return false;
  return true;
}

Word FreeProductSpec::normal_form(const Word& w) const {
  Word st;
  for (Sym x : w) {
    const auto& ix = info(x);
    if (!st.empty()) {
      Sym t = st.back();
      const auto& it = info(t);
      const Factor& f = factors_[it.factor];
      if (f.kind == FactorKind::FiniteGroup && it.factor == ix.factor) {
        int e = f.table[it.element][ix.element];
        st.pop_back();
        if (e != 0) st.push_back(f.element_letter[e]);
        continue;
      }
      if (f.kind == FactorKind::FreeGroup && x == it.raw_partner) {
        st.pop_back();
        continue;
      }
    }
    st.push_back(x);
  }
  return st;
}

Word FreeProductSpec::raw_involute(const Word& w) const {
  Word r(w.rbegin(), w.rend());
  for (Sym& s : r) s = raw_partner(s);
  return r;
}

Word FreeProductSpec::multiply_letters(Sym a, Sym b) const { return normal_form(Word{a, b}); }

std::vector<Word> FreeProductSpec::geodesics(int max_len) const {
  std::vector<Word> out{Word{}};
  std::size_t lo = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::size_t hi = out.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (Sym x : letters_)
        if (out[i].empty() || adjacent_ok(out[i].back(), x)) {
          Word w = out[i];
          w.push_back(x);
          out.push_back(std::move(w));
        }
    lo = hi;
  }
  return out;
}

Word FreeProductSpec::iota(const Word& w) const {
  Word r;
  for (Sym x : w) {
    r.push_back(x);
    Sym h = info(x).hat;
    if (h >= 0) r.push_back(h);
  }
  return r;
}

Word FreeProductSpec::eta(const Word& w) const {
  Word r;
  for (Sym x : w)
    if (!hats_.count(x)) r.push_back(x);
  return r;
}

std::vector<Sym> FreeProductSpec::encoded_letters() const {
  std::vector<Sym> r(letters_.begin(), letters_.end());
  r.insert(r.end(), hats_.begin(), hats_.end());
  std::sort(r.begin(), r.end());
  return r;
}

bool ProductConstraint::unit_component_one(Elem m) const {
  if (monoid->collapsed_zero(m)) return false;
  return monoid->components(m)[1] == 0;
}

ProductConstraint build_product_constraint_monoid(const FreeProductSpec& spec) {
  ProductConstraint pc;
  const auto& letters = spec.letters();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    pc.index[letters[i]] = static_cast<int>(i);
    names.push_back(spec.info(letters[i]).name);
  }
  std::vector<int> partner(letters.size());
  std::vector<std::vector<bool>> allowed(letters.size(), std::vector<bool>(letters.size()));
  for (std::size_t i = 0; i < letters.size(); ++i) {
    partner[i] = pc.index.at(spec.raw_partner(letters[i]));
    for (std::size_t j = 0; j < letters.size(); ++j) allowed[i][j] = spec.adjacent_ok(letters[i], letters[j]);
  }
  pc.geodesic = std::make_shared<AdjacencyMonoid>(names, partner, allowed);
  pc.units = std::make_shared<TableMonoid>(std::vector<std::string>{"1", "0"},
                                           std::vector<std::vector<int>>{{0, 1}, {1, 1}}, std::vector<int>{0, 1});
  pc.monoid = std::make_shared<ProductMonoid>(std::vector<MonoidPtr>{pc.geodesic, pc.units},
                                              std::vector<bool>{true, false});
  pc.psi.monoid = pc.monoid;
  pc.psi_f.monoid = pc.geodesic;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    Elem g = pc.geodesic->pair(static_cast<int>(i), static_cast<int>(i));
    Elem u = spec.is_unit(letters[i]) ? 0 : 1;
    pc.psi.images[letters[i]] = pc.monoid->make({g, u});
    pc.psi_f.images[letters[i]] = g;
  }
  pc.psi.images[Alphabet::kMarker] = *pc.monoid->zero();
  pc.psi_f.images[Alphabet::kMarker] = *pc.geodesic->zero();
  return pc;
}

ConstraintMorphism build_iota_recognizer(const FreeProductSpec& spec) {
  auto m = std::make_shared<BoolMatrixMonoid>(2);
  ConstraintMorphism rec;
  rec.monoid = m;
  const Elem e00 = m->intern({1, 0});
  const Elem e01 = m->intern({2, 0});
  const Elem e10 = m->intern({0, 1});
  for (Sym x : spec.letters()) {
    Sym h = spec.info(x).hat;
    if (h >= 0) {
      rec.images[x] = e01;
      rec.images[h] = e10;
    } else {
      rec.images[x] = e00;
    }
  }
  rec.images[Alphabet::kMarker] = *m->zero();
  return rec;
}

bool iota_accepting(const ConstraintMorphism& rec, Elem m) {
  auto bm = std::dynamic_pointer_cast<const BoolMatrixMonoid>(rec.monoid);
  if (!bm) throw Error("iota recognizer must be a boolean matrix monoid");
  return bm->entry(m, 0, 0);
}

Nfa benois_saturate(const Nfa& a, const FreeProductSpec& spec, std::size_t* firings) {
  Nfa out = a;
  std::size_t fired = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    auto cl = out.eps_closure();
    std::vector<Nfa::Edge> snapshot = out.edges;
    for (int p = 0; p < out.states; ++p)
      for (const auto& e1 : snapshot) {
        if (e1.label == Nfa::kEps || !cl[p][e1.from]) continue;
        for (const auto& e2 : snapshot) {
          if (e2.label == Nfa::kEps || !cl[e1.to][e2.from]) continue;
          if (spec.adjacent_ok(e1.label, e2.label)) continue;
          Word c = spec.multiply_letters(e1.label, e2.label);
          Sym lab = c.empty() ? Nfa::kEps : c[0];
          for (int q = 0; q < out.states; ++q)
            if (cl[e2.to][q] && !out.has_edge(p, lab, q)) {
              out.add_edge(p, lab, q);
              ++fired;
              changed = true;
            }
        }
      }
  }
  if (firings) *firings = fired;
  return out;
}

Nfa geodesic_automaton(const FreeProductSpec& spec) {
  Nfa g;
  g.initial.push_back(g.add_state(true));
  std::unordered_map<Sym, int> st;
  for (Sym x : spec.letters()) st[x] = g.add_state(true);
  for (Sym x : spec.letters()) {
    g.add_edge(0, x, st[x]);
    for (Sym y : spec.letters())
      if (spec.adjacent_ok(x, y)) g.add_edge(st[x], y, st[y]);
  }
  return g;
}

Nfa rat_complement(const Nfa& saturated, const FreeProductSpec& spec) {
  Nfa comp = complement(remove_eps(saturated), spec.letters());
  return intersect(comp, geodesic_automaton(spec));
}

Nfa rat_intersect(const Nfa& sat1, const Nfa& sat2, const FreeProductSpec& spec) {
  return intersect(intersect(remove_eps(sat1), remove_eps(sat2)), geodesic_automaton(spec));
}

std::vector<EquationBranch> reduce_equation_over_F(const FreeProductSpec& spec) {
  std::vector<Sym> opts{-1};
  opts.insert(opts.end(), spec.letters().begin(), spec.letters().end());
  std::vector<EquationBranch> out;
  for (Sym b : opts)
    for (Sym c : opts) {
      Word bc;
      if (b >= 0) bc.push_back(b);
      if (c >= 0) bc.push_back(c);
      Word a = spec.normal_form(bc);
      if (a.size() > 1) continue;
      out.push_back({a.empty() ? -1 : a[0], b, c});
    }
  std::sort(out.begin(), out.end());
  return out;
}

ProductSplit split_product(const FreeProductSpec& spec, const Word& y, const Word& z) {
  std::size_t k = 0;
  while (k < y.size() && k < z.size()) {
    Sym last = y[y.size() - 1 - k];
    if (!spec.is_unit(last) || z[k] != spec.raw_partner(last)) break;
    ++k;
  }
  ProductSplit s;
  s.R.assign(y.end() - static_cast<std::ptrdiff_t>(k), y.end());
  Word yp(y.begin(), y.end() - static_cast<std::ptrdiff_t>(k));
  Word zp(z.begin() + static_cast<std::ptrdiff_t>(k), z.end());
  if (!yp.empty() && !zp.empty()) {
    Sym b = yp.back(), c = zp.front();
    const auto& ib = spec.info(b);
    const auto& ic = spec.info(c);
    if (ib.factor == ic.factor && spec.kind_of(b) == FactorKind::FiniteGroup) {
      Word a = spec.multiply_letters(b, c);
      if (a.size() != 1) throw Error("split_product: cancellation not maximal");
      s.branch = {a[0], b, c};
      s.P.assign(yp.begin(), yp.end() - 1);
      s.Q.assign(zp.begin() + 1, zp.end());
      return s;
    }
  }
  s.P = yp;
  s.Q = zp;
  return s;
}

std::vector<InequalityBranch> reduce_inequality(const FreeProductSpec& spec) {
  std::vector<InequalityBranch> out;
  for (Sym b : spec.letters())
    for (Sym c : spec.letters())
      if (b != c) out.push_back({NeqShape::Differ, b, c});
  for (Sym b : spec.letters()) {
    out.push_back({NeqShape::LeftPrefix, b, -1});
    out.push_back({NeqShape::RightPrefix, b, -1});
  }
  return out;
}

std::optional<InequalitySplit> split_inequality(const Word& x, const Word& y) {
  if (x == y) return std::nullopt;
  std::size_t p = 0;
  while (p < x.size() && p < y.size() && x[p] == y[p]) ++p;
  InequalitySplit s;
  s.P.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p));
  if (p < x.size() && p < y.size()) {
    s.branch = {NeqShape::Differ, x[p], y[p]};
    s.Q.assign(x.begin() + static_cast<std::ptrdiff_t>(p) + 1, x.end());
    s.R.assign(y.begin() + static_cast<std::ptrdiff_t>(p) + 1, y.end());
  } else if (p == x.size()) {
    s.branch = {NeqShape::LeftPrefix, y[p], -1};
    s.R.assign(y.begin() + static_cast<std::ptrdiff_t>(p) + 1, y.end());
  } else {
    s.branch = {NeqShape::RightPrefix, x[p], -1};
    s.R.assign(x.begin() + static_cast<std::ptrdiff_t>(p) + 1, x.end());
  }
  return s;
}

}  // namespace weq
