#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "weq/alphabet.hpp"
#include "weq/monoid.hpp"

namespace weq {

// A trace token: a single symbol, or a two-letter word x x̄ that commutes as a unit.
struct Token {
  Sym a = -1;
  Sym b = -1;  // -1 for single-letter tokens
  auto operator<=>(const Token&) const = default;
  bool single() const { return b < 0; }
  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b + 1);
  }
};

// Type relation with at most one partner per left-hand side. Entries are stored
// closed under involution: adding (x,p) also adds (x̄,p̄).
class TypeRelation {
 public:
  using Entry = std::pair<Word, Word>;

  void add(const Alphabet& alph, const Word& x, const Word& p);
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::set<Entry>& entries() const { return entries_; }
  std::optional<Word> type_of(const Word& x) const;
  // Drops every entry mentioning one of `letters` on either side.
  void erase_mentioning(const std::unordered_set<Sym>& letters);
  void clear();

  bool commutes(const Token& s, const Token& t) const;
  bool has_partner(const Token& t) const { return partnered_.count(t.key()) > 0; }
  const std::vector<std::uint64_t>& partners(const Token& t) const;
  std::vector<Token> tokenize(const Word& w) const;

  // Empty string when valid; otherwise the violated clause.
  std::string validate(const Alphabet& alph) const;
  std::string show(const Alphabet& alph) const;

  bool operator==(const TypeRelation& o) const { return entries_ == o.entries_; }

 private:
  void rebuild();
  std::set<Entry> entries_;
  std::unordered_set<std::uint64_t> partnered_;
  std::set<std::pair<std::uint64_t, std::uint64_t>> commuting_;
  std::unordered_set<std::uint64_t> pair_tokens_;  // key of x x̄ tokens
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> partners_;
};

Word trace_normal_form(const Word& w, const TypeRelation& theta);
bool trace_equal(const Word& u, const Word& v, const TypeRelation& theta);
// Every representative of W reachable by adjacent swaps, up to `cap` words.
std::vector<Word> trace_representatives(const Word& w, const TypeRelation& theta, std::size_t cap = 20000);
bool is_trace_factor(const Word& f, const Word& w, const TypeRelation& theta);

struct WellFormedLimits {
  std::size_t n = 0;          // |W_init|
  std::size_t kappa = 100;
  std::size_t markers = 0;    // |W_init|_#
  std::vector<Sym> letters;   // A±
};

struct WellFormedReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

WellFormedReport check_well_formed(const Alphabet& alph, const Word& w, const std::vector<Sym>& B,
                                   const std::vector<Sym>& X, const TypeRelation& theta, const Monoid& m,
                                   const std::unordered_map<Sym, Elem>& mu, const WellFormedLimits& lim);
inline bool is_well_formed(const Alphabet& alph, const Word& w, const std::vector<Sym>& B,
                           const std::vector<Sym>& X, const TypeRelation& theta, const Monoid& m,
                           const std::unordered_map<Sym, Elem>& mu, const WellFormedLimits& lim) {
  return check_well_formed(alph, w, B, X, theta, m, mu, lim).ok();
}

// #-free maximal factors of w.
std::vector<Word> marker_segments(const Word& w);

}  // namespace weq
