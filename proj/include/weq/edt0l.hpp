#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weq/alphabet.hpp"

namespace weq {

// Letter-to-word substitution, identity on unmapped letters.
struct Endomorphism {
  std::map<Sym, Word> images;
  bool involutive = true;  // false for extraction and decoding maps

  Word apply(const Word& w) const;
  const Word* image(Sym s) const;
  bool is_identity() const;
  bool operator==(const Endomorphism&) const = default;
  auto operator<=>(const Endomorphism&) const = default;
};

// (f ∘ g)(w) = f(g(w)).
Endomorphism compose(const Endomorphism& f, const Endomorphism& g);

// NFA whose transitions carry endomorphism labels. A path with labels l1 … lt
// ending in an accepting state denotes l1 ∘ … ∘ lt, applied to the seed.
struct EndoNfa {
  struct Transition {
    int from;
    int label;
    int to;
    auto operator<=>(const Transition&) const = default;
  };
  int states = 0;
  std::vector<int> initial;
  std::vector<bool> accepting;
  std::vector<Endomorphism> labels;
  std::vector<Transition> transitions;
  Sym seed = Alphabet::kMarker;
  std::vector<std::string> names;  // symbol names by id, for printing
  std::vector<Sym> terminals;      // output alphabet

  int add_state(bool acc = false);
  int add_label(const Endomorphism& h);  // deduplicated
  void add_transition(int from, int label, int to);
  bool operator==(const EndoNfa&) const = default;
};

// φ(seed) for the path given as transition indices; the path must run from an
// initial state to an accepting one.
Word evaluate_path(const EndoNfa& a, const std::vector<int>& path);

// States on some path from an initial to an accepting state.
std::vector<bool> useful_states(const EndoNfa& a);
bool is_empty(const EndoNfa& a);

// All outputs of length ≤ max_len over the terminal alphabet. Throws
// Error("enumeration budget") when more than `budget` configurations are visited.
std::vector<Word> enumerate(const EndoNfa& a, std::size_t max_len, std::size_t budget = 5000000);

enum class Finiteness { Empty, Finite, Infinite };
std::string finiteness_name(Finiteness f);
struct Classification {
  Finiteness morphisms = Finiteness::Empty;  // of the label language
  Finiteness outputs = Finiteness::Empty;    // by pumping a useful cycle
};
Classification classify(const EndoNfa& a);

std::string serialize(const EndoNfa& a);
EndoNfa deserialize(const std::string& text);
std::string to_dot(const EndoNfa& a);

// The hand-built system generating {vv : v ∈ {a,b}*}.
EndoNfa example_vv_system();

}  // namespace weq
