#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace weq {

using Sym = std::int32_t;
using Word = std::vector<Sym>;

enum class SymKind : std::uint8_t { Marker, Constant, Variable };

struct Symbol {
  std::string name;
  SymKind kind = SymKind::Constant;
  Sym partner = -1;
  bool fresh = false;  // drawn from the pool of spare constants
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Symbol universe with an explicit partner table. Id 0 is always the marker #.
class Alphabet {
 public:
  Alphabet();

  static constexpr Sym kMarker = 0;

  Sym add_self(const std::string& name, SymKind kind);
  // Adds x and its partner; returns the id of x (partner is x+1).
  Sym add_pair(const std::string& name, const std::string& partner_name, SymKind kind);

  std::size_t size() const { return syms_.size(); }
  const Symbol& at(Sym s) const;
  Sym partner(Sym s) const { return at(s).partner; }
  SymKind kind(Sym s) const { return at(s).kind; }
  const std::string& name(Sym s) const { return at(s).name; }
  bool is_variable(Sym s) const { return at(s).kind == SymKind::Variable; }
  bool is_constant(Sym s) const { return at(s).kind != SymKind::Variable; }
  bool contains(Sym s) const { return s >= 0 && static_cast<std::size_t>(s) < syms_.size(); }
  Sym lookup(const std::string& name) const;  // -1 when absent
  bool has(const std::string& name) const { return lookup(name) >= 0; }

  // Constants (marker included) count against the capacity; variables do not.
  std::size_t constant_count() const { return constants_; }
  std::size_t capacity() const { return capacity_; }
  void set_capacity(std::size_t cap) { capacity_ = cap; }

  // Returns `count` partner pairs of constants that are not in `in_use`
  // (indexed by symbol id). New pool symbols are created on demand.
  std::vector<std::pair<Sym, Sym>> fresh_letters(const std::vector<bool>& in_use, int count);
  // The i-th pool pair (0-based), created on demand.
  std::pair<Sym, Sym> pool_pair(std::size_t i);
  std::size_t pool_size() const { return pool_.size(); }

  Word involute(const Word& w) const;
  std::string show(const Word& w, const std::string& sep = " ") const;
  std::string show_sym(Sym s) const { return name(s); }

 private:
  Sym push(Symbol s);
  std::vector<Symbol> syms_;
  std::unordered_map<std::string, Sym> by_name_;
  std::size_t constants_ = 0;
  std::size_t capacity_ = 1u << 20;
  std::vector<Sym> pool_;
  Sym new_pool_pair();
};

Word involute_word(const Alphabet& alph, const Word& w);
bool is_reduced_free_group(const Alphabet& alph, const Word& w);

Word concat(const Word& a, const Word& b);
inline Word concat(const Word& a, const Word& b, const Word& c) { return concat(concat(a, b), c); }

}  // namespace weq
