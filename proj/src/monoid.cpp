#include "weq/monoid.hpp"

#include <deque>
#include <set>

namespace weq {

namespace {
std::uint64_t key(Elem x, Elem y) { return (static_cast<std::uint64_t>(x) << 32) | y; }
}  // namespace

Elem Monoid::mul(const std::vector<Elem>& xs) const {
  Elem r = one();
  for (Elem x : xs) r = mul(r, x);
  return r;
}

// ---------------------------------------------------------------- adjacency

AdjacencyMonoid::AdjacencyMonoid(std::vector<std::string> letter_names, std::vector<int> partner,
                                 std::vector<std::vector<bool>> allowed)
    : names_(std::move(letter_names)), partner_(std::move(partner)), allowed_(std::move(allowed)) {}

Elem AdjacencyMonoid::mul(Elem x, Elem y) const {
  if (x == 0) return y;
  if (y == 0) return x;
  if (x == 1 || y == 1) return 1;
  if (!allowed_[last(x)][first(y)]) return 1;
  return pair(first(x), last(y));
}

Elem AdjacencyMonoid::inv(Elem x) const {
  if (x < 2) return x;
  return pair(partner_[last(x)], partner_[first(x)]);
}

std::string AdjacencyMonoid::show(Elem x) const {
  if (x == 0) return "1";
  if (x == 1) return "0";
  return "(" + names_[first(x)] + "," + names_[last(x)] + ")";
}

std::optional<std::vector<Elem>> AdjacencyMonoid::all_elements() const {
  std::vector<Elem> v(size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<Elem>(i);
  return v;
}

// ----------------------------------------------------------- boolean matrix

BoolMatrixMonoid::BoolMatrixMonoid(int n) : n_(n) {
  if (n < 0 || n > 64) throw Error("boolean matrix dimension out of range");
  Matrix id(n, 0);
  for (int i = 0; i < n; ++i) id[i] = std::uint64_t{1} << i;
  one_ = intern(id);
  zero_ = intern(Matrix(n, 0));
}

Elem BoolMatrixMonoid::intern(const Matrix& m) const {
  auto it = index_.find(m);
  if (it != index_.end()) return it->second;
  Elem id = static_cast<Elem>(mats_.size());
  mats_.push_back(m);
  index_.emplace(m, id);
  return id;
}

Elem BoolMatrixMonoid::mul(Elem x, Elem y) const {
  auto k = key(x, y);
  auto it = memo_.find(k);
  if (it != memo_.end()) return it->second;
  const Matrix a = mats_.at(x);
  const Matrix b = mats_.at(y);
  Matrix c(n_, 0);
  for (int i = 0; i < n_; ++i) {
    std::uint64_t row = a[i];
    while (row) {
      int j = __builtin_ctzll(row);
      row &= row - 1;
      c[i] |= b[j];
    }
  }
  Elem r = intern(c);
  memo_.emplace(k, r);
  return r;
}

Elem BoolMatrixMonoid::inv(Elem x) const {
  const Matrix a = mats_.at(x);
  Matrix t(n_, 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if ((a[i] >> j) & 1u) t[j] |= std::uint64_t{1} << i;
  return intern(t);
}

std::string BoolMatrixMonoid::show(Elem x) const {
  const Matrix& a = mats_.at(x);
  std::string s = "[";
  for (int i = 0; i < n_; ++i) {
    if (i) s += "|";
    for (int j = 0; j < n_; ++j) s += ((a[i] >> j) & 1u) ? '1' : '0';
  }
  return s + "]";
}

// -------------------------------------------------------------------- table

TableMonoid::TableMonoid(std::vector<std::string> names, std::vector<std::vector<int>> table,
                         std::vector<int> involution)
    : names_(std::move(names)), table_(std::move(table)), inv_(std::move(involution)) {
  const int n = static_cast<int>(names_.size());
  if (static_cast<int>(table_.size()) != n || static_cast<int>(inv_.size()) != n)
    throw Error("table monoid: inconsistent sizes");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n) throw Error("table monoid: ragged table");
    for (int v : row)
      if (v < 0 || v >= n) throw Error("table monoid: entry out of range");
  }
  for (int z = 0; z < n; ++z) {
    bool absorbing = true;
    for (int x = 0; x < n && absorbing; ++x) absorbing = table_[z][x] == z && table_[x][z] == z;
    if (absorbing && n > 1) {
      zero_ = static_cast<Elem>(z);
      break;
    }
  }
}

std::optional<std::vector<Elem>> TableMonoid::all_elements() const {
  std::vector<Elem> v(names_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<Elem>(i);
  return v;
}

// ------------------------------------------------------------------ product

ProductMonoid::ProductMonoid(std::vector<MonoidPtr> parts, std::vector<bool> structural)
    : parts_(std::move(parts)), structural_(std::move(structural)) {
  structural_.resize(parts_.size(), false);
  for (bool b : structural_) collapsing_ = collapsing_ || b;
  if (collapsing_) {
    tuples_.push_back({});
    index_.emplace(std::vector<Elem>{}, 0);
    zero_ = 0;
  }
  std::vector<Elem> ones;
  for (const auto& p : parts_) ones.push_back(p->one());
  one_ = make(ones);
  if (!collapsing_) {
    std::vector<Elem> zs;
    bool all = true;
    for (const auto& p : parts_) {
      auto z = p->zero();
      if (!z) all = false;
      else zs.push_back(*z);
    }
    if (all && !parts_.empty()) zero_ = make(zs);
  }
}

Elem ProductMonoid::make(const std::vector<Elem>& comps) const {
  if (collapsing_) {
    for (std::size_t i = 0; i < parts_.size(); ++i)
      if (structural_[i] && parts_[i]->degenerate(comps[i])) return *zero_;
  }
  auto it = index_.find(comps);
  if (it != index_.end()) return it->second;
  Elem id = static_cast<Elem>(tuples_.size());
  tuples_.push_back(comps);
  index_.emplace(comps, id);
  return id;
}

Elem ProductMonoid::mul(Elem x, Elem y) const {
  if (collapsing_ && (x == *zero_ || y == *zero_)) return *zero_;
  if (x == one_) return y;
  if (y == one_) return x;
  auto k = key(x, y);
  auto it = memo_.find(k);
  if (it != memo_.end()) return it->second;
  const std::vector<Elem> a = tuples_.at(x);
  const std::vector<Elem> b = tuples_.at(y);
  std::vector<Elem> c(parts_.size());
  for (std::size_t i = 0; i < parts_.size(); ++i) c[i] = parts_[i]->mul(a[i], b[i]);
  Elem r = make(c);
  memo_.emplace(k, r);
  return r;
}

Elem ProductMonoid::inv(Elem x) const {
  if (collapsing_ && x == *zero_) return x;
  const std::vector<Elem> a = tuples_.at(x);
  std::vector<Elem> c(parts_.size());
  for (std::size_t i = 0; i < parts_.size(); ++i) c[i] = parts_[i]->inv(a[i]);
  return make(c);
}

std::string ProductMonoid::show(Elem x) const {
  if (collapsing_ && x == *zero_) return "0";
  const auto& a = tuples_.at(x);
  std::string s = "<";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ";";
    s += parts_[i]->show(a[i]);
  }
  return s + ">";
}

std::optional<std::vector<Elem>> ProductMonoid::all_elements() const {
  std::vector<std::vector<Elem>> lists;
  std::size_t total = 1;
  for (const auto& p : parts_) {
    auto e = p->all_elements();
    if (!e) return std::nullopt;
    total *= e->size();
    if (total > 200000) return std::nullopt;
    lists.push_back(*e);
  }
  std::set<Elem> out;
  std::vector<std::size_t> idx(parts_.size(), 0);
  while (true) {
    std::vector<Elem> comps(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i) comps[i] = lists[i][idx[i]];
    out.insert(make(comps));
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == lists[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return std::vector<Elem>(out.begin(), out.end());
}

// --------------------------------------------------------------------- dual

DualMonoid::DualMonoid(MonoidPtr base) : base_(std::move(base)) {
  one_ = make(base_->one(), base_->one());
  if (auto z = base_->zero()) zero_ = make(*z, *z);
}

Elem DualMonoid::make(Elem l, Elem r) const {
  auto p = std::make_pair(l, r);
  auto it = index_.find(p);
  if (it != index_.end()) return it->second;
  Elem id = static_cast<Elem>(pairs_.size());
  pairs_.push_back(p);
  index_.emplace(p, id);
  return id;
}

Elem DualMonoid::mul(Elem x, Elem y) const {
  auto k = key(x, y);
  auto it = memo_.find(k);
  if (it != memo_.end()) return it->second;
  auto [l1, r1] = pairs_.at(x);
  auto [l2, r2] = pairs_.at(y);
  Elem res = make(base_->mul(l1, l2), base_->mul(r2, r1));
  memo_.emplace(k, res);
  return res;
}

Elem DualMonoid::inv(Elem x) const {
  auto [l, r] = pairs_.at(x);
  return make(r, l);
}

std::string DualMonoid::show(Elem x) const {
  auto [l, r] = pairs_.at(x);
  return "(" + base_->show(l) + "," + base_->show(r) + "^T)";
}

bool DualMonoid::degenerate(Elem x) const {
  auto [l, r] = pairs_.at(x);
  return base_->degenerate(l) || base_->degenerate(r);
}

// ----------------------------------------------------------------- morphisms

Elem ConstraintMorphism::at(Sym s) const {
  auto it = images.find(s);
  if (it == images.end()) throw Error("constraint morphism: unmapped symbol " + std::to_string(s));
  return it->second;
}

Elem ConstraintMorphism::eval(const Word& w) const {
  Elem r = monoid->one();
  for (Sym s : w) r = monoid->mul(r, at(s));
  return r;
}

bool ConstraintMorphism::respects_involution(const Alphabet& alph) const {
  for (const auto& [s, e] : images) {
    auto it = images.find(alph.partner(s));
    if (it == images.end() || it->second != monoid->inv(e)) return false;
  }
  return true;
}

ReducedWordMonoid build_reduced_word_monoid(const Alphabet& alph, const std::vector<Sym>& letters) {
  ReducedWordMonoid out;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    Sym a = letters[i];
    if (alph.partner(a) == a) throw Error("reduced-word monoid: self-involuting letter " + alph.name(a));
    out.index[a] = static_cast<int>(i);
    names.push_back(alph.name(a));
  }
  std::vector<int> partner(letters.size());
  for (std::size_t i = 0; i < letters.size(); ++i) {
    auto it = out.index.find(alph.partner(letters[i]));
    if (it == out.index.end()) throw Error("reduced-word monoid: letter set not closed under involution");
    partner[i] = it->second;
  }
  std::vector<std::vector<bool>> allowed(letters.size(), std::vector<bool>(letters.size(), true));
  for (std::size_t i = 0; i < letters.size(); ++i) allowed[i][partner[i]] = false;
  out.monoid = std::make_shared<AdjacencyMonoid>(names, partner, allowed);
  out.mu0.monoid = out.monoid;
  out.mu0.images[Alphabet::kMarker] = *out.monoid->zero();
  for (std::size_t i = 0; i < letters.size(); ++i)
    out.mu0.images[letters[i]] = out.monoid->pair(static_cast<int>(i), static_cast<int>(i));
  return out;
}

ConstraintMorphism product_morphism(const std::vector<const ConstraintMorphism*>& parts,
                                    const std::vector<bool>& structural) {
  std::vector<MonoidPtr> ms;
  for (const auto* p : parts) ms.push_back(p->monoid);
  auto prod = std::make_shared<ProductMonoid>(ms, structural);
  ConstraintMorphism out;
  out.monoid = prod;
  if (parts.empty()) return out;
  for (const auto& [s, e] : parts[0]->images) {
    std::vector<Elem> comps;
    bool ok = true;
    for (const auto* p : parts) {
      auto it = p->images.find(s);
      if (it == p->images.end()) {
        ok = false;
        break;
      }
      comps.push_back(it->second);
    }
    if (ok) out.images[s] = prod->make(comps);
  }
  return out;
}

ConstraintMorphism dual_lift(const Alphabet& alph, MonoidPtr base, const std::unordered_map<Sym, Elem>& rho) {
  auto dual = std::make_shared<DualMonoid>(base);
  ConstraintMorphism out;
  out.monoid = dual;
  for (const auto& [s, e] : rho) {
    auto it = rho.find(alph.partner(s));
    if (it == rho.end()) throw Error("dual lift: partner of " + alph.name(s) + " unmapped");
    out.images[s] = dual->make(e, it->second);
  }
  return out;
}

std::vector<Elem> generated_submonoid(const Monoid& m, const std::vector<Elem>& gens, std::size_t cap) {
  std::set<Elem> seen{m.one()};
  std::deque<Elem> queue{m.one()};
  std::vector<Elem> order{m.one()};
  while (!queue.empty()) {
    Elem x = queue.front();
    queue.pop_front();
    for (Elem g : gens) {
      Elem y = m.mul(x, g);
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw Error("generated submonoid exceeds cap");
        order.push_back(y);
        queue.push_back(y);
      }
    }
  }
  return order;
}

AxiomReport check_axioms(const Monoid& m, const std::vector<Elem>& elems) {
  AxiomReport r;
  auto z = m.zero();
  for (Elem x : elems) {
    if (m.mul(m.one(), x) != x || m.mul(x, m.one()) != x) r.identity = false;
    if (m.inv(m.inv(x)) != x) r.involution = false;
    if (z && (m.mul(*z, x) != *z || m.mul(x, *z) != *z)) r.zero_absorbing = false;
    for (Elem y : elems) {
      if (m.inv(m.mul(x, y)) != m.mul(m.inv(y), m.inv(x))) r.involution = false;
      for (Elem w : elems)
        if (m.mul(m.mul(x, y), w) != m.mul(x, m.mul(y, w))) r.associative = false;
    }
  }
  if (m.inv(m.one()) != m.one()) r.involution = false;
  if (z && m.inv(*z) != *z) r.involution = false;
  return r;
}

}  // namespace weq
