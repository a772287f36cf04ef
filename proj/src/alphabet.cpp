#include "weq/alphabet.hpp"

namespace weq {

Alphabet::Alphabet() { add_self("#", SymKind::Marker); }

Sym Alphabet::push(Symbol s) {
  if (by_name_.count(s.name)) throw Error("duplicate symbol name '" + s.name + "'");
  Sym id = static_cast<Sym>(syms_.size());
  if (s.kind != SymKind::Variable) ++constants_;
  by_name_[s.name] = id;
  syms_.push_back(std::move(s));
  return id;
}

Sym Alphabet::add_self(const std::string& name, SymKind kind) {
  Sym id = static_cast<Sym>(syms_.size());
  push(Symbol{name, kind, id, false});
  return id;
}

Sym Alphabet::add_pair(const std::string& name, const std::string& partner_name, SymKind kind) {
  Sym id = static_cast<Sym>(syms_.size());
  push(Symbol{name, kind, id + 1, false});
  push(Symbol{partner_name, kind, id, false});
  return id;
}

const Symbol& Alphabet::at(Sym s) const {
  if (!contains(s)) throw Error("unknown symbol id " + std::to_string(s));
  return syms_[static_cast<std::size_t>(s)];
}

Sym Alphabet::lookup(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

std::vector<std::pair<Sym, Sym>> Alphabet::fresh_letters(const std::vector<bool>& in_use, int count) {
  std::vector<std::pair<Sym, Sym>> out;
  if (count <= 0) return out;
  auto used = [&](Sym s) { return static_cast<std::size_t>(s) < in_use.size() && in_use[s]; };
  for (std::size_t i = 0; i < syms_.size() && static_cast<int>(out.size()) < count; ++i) {
    const Symbol& s = syms_[i];
    Sym id = static_cast<Sym>(i);
    if (!s.fresh || s.partner < id) continue;
    if (!used(id) && !used(s.partner)) out.emplace_back(id, s.partner);
  }
  while (static_cast<int>(out.size()) < count) {
    Sym id = new_pool_pair();
    out.emplace_back(id, id + 1);
  }
  return out;
}

Sym Alphabet::new_pool_pair() {
  if (constants_ + 2 > capacity_) throw Error("alphabet budget exceeded");
  std::string base = "~" + std::to_string(pool_.size() + 1);
  Sym id = static_cast<Sym>(syms_.size());
  push(Symbol{base, SymKind::Constant, id + 1, true});
  push(Symbol{base + "'", SymKind::Constant, id, true});
  pool_.push_back(id);
  return id;
}

std::pair<Sym, Sym> Alphabet::pool_pair(std::size_t i) {
  while (pool_.size() <= i) new_pool_pair();
  return {pool_[i], pool_[i] + 1};
}

Word Alphabet::involute(const Word& w) const {
  Word r(w.rbegin(), w.rend());
  for (Sym& s : r) s = partner(s);
  return r;
}

std::string Alphabet::show(const Word& w, const std::string& sep) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += name(w[i]);
  }
  return out;
}

Word involute_word(const Alphabet& alph, const Word& w) { return alph.involute(w); }

bool is_reduced_free_group(const Alphabet& alph, const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (alph.partner(w[i]) == w[i + 1]) return false;
  return true;
}

Word concat(const Word& a, const Word& b) {
  Word r;
  r.reserve(a.size() + b.size());
  r.insert(r.end(), a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

}  // namespace weq
