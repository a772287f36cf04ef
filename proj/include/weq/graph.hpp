#pragma once

#include <map>
#include <set>
#include <tuple>
#include <string>
#include <unordered_map>
#include <vector>

#include "weq/alphabet.hpp"
#include "weq/edt0l.hpp"
#include "weq/free_product.hpp"
#include "weq/monoid.hpp"
#include "weq/trace.hpp"

namespace weq {

// Extended equation (W, B, X, θ, μ). W is kept in trace normal form; μ covers B ∪ X.
struct Vertex {
  Word W;
  std::vector<Sym> B;  // sorted, contains #
  std::vector<Sym> X;  // sorted
  TypeRelation theta;
  std::map<Sym, Elem> mu;

  std::string key() const;
  std::unordered_map<Sym, Elem> mu_map() const { return {mu.begin(), mu.end()}; }
  bool has_letter(Sym s) const;
  bool has_var(Sym s) const;
  bool operator==(const Vertex& o) const { return key() == o.key(); }
};

Vertex make_vertex(Word W, std::vector<Sym> B, std::vector<Sym> X, TypeRelation theta, std::map<Sym, Elem> mu);

enum class ArcKind { Rename, Compress, Restrict, Erase, Type, Pop, Extract, Decode };
std::string arc_kind_name(ArcKind k);

// Substitution part of erase (var), type (var, type) and pop (var, popped letter).
struct SubstData {
  Sym var = -1;
  Word word;
  bool operator==(const SubstData&) const = default;
};

// Empty when the arc S → T with label h is a valid arc of the given kind.
std::string check_arc(const Alphabet& alph, const Monoid& m, ArcKind kind, const Vertex& S, const Endomorphism& h,
                      const SubstData& data, const Vertex& T, const WellFormedLimits& lim);

// W′ obtained from W by the substitution of a erase/pop arc.
Word substitute_var(const Alphabet& alph, const Word& W, Sym var, const Word& prefix, bool erase);

bool is_final(const Alphabet& alph, const Vertex& v);
// g(#) = u1#…#uk for W = #u1#…#uk#…
Endomorphism extraction_label(const Vertex& v, std::size_t targets);

// Renames pool letters by order of first occurrence in W. `to_raw` maps every
// renamed canonical letter back to the original one.
struct Canonical {
  Vertex vertex;
  std::map<Sym, Sym> to_raw;
};
Canonical canonicalize(Alphabet& alph, const Vertex& v);
Vertex rename_vertex(const Vertex& v, const std::map<Sym, Sym>& ren, const Alphabet& alph);

struct Arc {
  int src = -1, dst = -1;
  ArcKind kind = ArcKind::Rename;
  Endomorphism label;            // on canonical letters of dst
  Endomorphism raw;              // as validated, on the pre-renaming target
  std::map<Sym, Sym> to_raw;     // canonical → pre-renaming letters of dst
  SubstData data;
  std::size_t n = 0, markers = 0;  // limits of the run that produced the arc
};

class Graph {
 public:
  int find(const Vertex& v) const;
  int add_vertex(const Vertex& v, bool* inserted = nullptr);
  // False when an arc with the same endpoints and label already exists.
  bool add_arc(Arc a);
  void mark_initial(int v) { initial_.insert(v); }
  void mark_final(int v) { final_.insert(v); }

  const Vertex& vertex(int i) const { return vertices_.at(static_cast<std::size_t>(i)); }
  std::size_t size() const { return vertices_.size(); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::set<int>& initial() const { return initial_; }
  const std::set<int>& finals() const { return final_; }

  // Vertices on a path from an initial to a final vertex.
  std::vector<bool> useful() const;

 private:
  std::vector<Vertex> vertices_;
  std::unordered_map<std::string, int> index_;
  std::vector<Arc> arcs_;
  std::set<std::tuple<int, int, std::string>> arc_keys_;
  std::set<int> initial_, final_;
};

// Re-validates a stored arc against its reconstructed pre-renaming target.
std::string validate_stored_arc(const Alphabet& alph, const Monoid& m, const Graph& g, const Arc& a, std::size_t kappa);

// The endomorphism-labelled NFA of the useful part of the graph. In encoded
// modes a decoding arc η (hats ↦ 1) leads out of a fresh initial state.
EndoNfa assemble_nfa(const Graph& g, const Alphabet& alph, std::size_t targets, const std::vector<Sym>& raw_letters,
                     const FreeProductSpec* encoded);

std::string show_endomorphism(const Alphabet& alph, const Endomorphism& h);

}  // namespace weq
