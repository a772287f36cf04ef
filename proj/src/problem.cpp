#include "weq/problem.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace weq {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::FreeGroup:
      return "free-group";
    case Mode::FreeMonoid:
      return "free-monoid";
    case Mode::FreeProduct:
      return "free-product";
  }
  return "?";
}

ParseError::ParseError(int l, int c, const std::string& msg)
    : Error("line " + std::to_string(l) + ", col " + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {

struct Tok {
  std::string text;
  int col;
};

std::vector<Tok> split_line(const std::string& line) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

bool is_int(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

class LineParser {
 public:
  LineParser(int line, std::vector<Tok> toks) : line_(line), toks_(std::move(toks)) {}

  bool done() const { return pos_ >= toks_.size(); }
  const Tok& peek() const {
    if (done()) fail("unexpected end of line");
    return toks_[pos_];
  }
  Tok next() {
    const Tok& t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string& kw) {
    Tok t = next();
    if (t.text != kw) fail_at(t, "expected '" + kw + "'");
  }
  int next_int() {
    Tok t = next();
    if (!is_int(t.text)) fail_at(t, "expected a number");
    return std::stoi(t.text);
  }
  std::vector<int> next_int_list() {
    Tok t = next();
    std::vector<int> out;
    for (const auto& part : split_on(t.text, ',')) {
      if (!is_int(part)) fail_at(t, "expected a comma-separated list of numbers");
      out.push_back(std::stoi(part));
    }
    return out;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    int col = done() ? (toks_.empty() ? 1 : toks_.back().col + static_cast<int>(toks_.back().text.size())) : toks_[pos_].col;
    throw ParseError(line_, col, msg);
  }
  [[noreturn]] void fail_at(const Tok& t, const std::string& msg) const { throw ParseError(line_, t.col, msg); }
  int line() const { return line_; }
  std::size_t pos() const { return pos_; }

 private:
  int line_;
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

std::vector<std::string> word_tokens(LineParser& lp, const std::set<std::string>& stops) {
  std::vector<std::string> out;
  while (!lp.done() && !stops.count(lp.peek().text)) {
    std::string t = lp.next().text;
    if (t != "1") out.push_back(t);
  }
  return out;
}

AtomDecl parse_atom(LineParser& lp) {
  AtomDecl a;
  Tok kw = lp.next();
  if (kw.text == "eq" || kw.text == "neq") {
    a.kind = kw.text == "eq" ? AtomDecl::Kind::Eq : AtomDecl::Kind::Neq;
    const std::string sep = a.kind == AtomDecl::Kind::Eq ? "=" : "!=";
    std::size_t start = lp.pos();
    a.lhs = word_tokens(lp, {sep, "=", "|"});
    if (!lp.done() && (lp.peek().text == sep || lp.peek().text == "=")) {
      lp.next();
      a.rhs = word_tokens(lp, {"|"});
    } else if (a.kind == AtomDecl::Kind::Neq && a.lhs.size() == 2 && lp.pos() - start == 2) {
      a.rhs = {a.lhs[1]};
      a.lhs.resize(1);
    } else {
      lp.fail("expected '" + sep + "'");
    }
    return a;
  }
  if (kw.text == "constraint") {
    a.var = lp.next().text;
    Tok rel = lp.next();
    if (rel.text == "in")
      a.kind = AtomDecl::Kind::In;
    else if (rel.text == "notin")
      a.kind = AtomDecl::Kind::NotIn;
    else
      lp.fail_at(rel, "expected 'in' or 'notin'");
    Tok target = lp.next();
    auto colon = target.text.find(':');
    if (colon == std::string::npos) {
      a.automaton = target.text;
    } else {
      a.automaton = target.text.substr(0, colon);
      std::vector<std::string> w;
      for (const auto& part : split_on(target.text.substr(colon + 1), ',')) {
        if (part.empty()) lp.fail_at(target, "empty letter in element word");
        if (part != "1") w.push_back(part);
      }
      a.element = w;
    }
    if (a.automaton.empty()) lp.fail_at(target, "missing automaton name");
    return a;
  }
  lp.fail_at(kw, "expected eq, neq or constraint");
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

std::string word_text(const std::vector<std::string>& w) { return w.empty() ? "1" : join(w, " "); }

std::string atom_text(const AtomDecl& a) {
  switch (a.kind) {
    case AtomDecl::Kind::Eq:
      return "eq " + word_text(a.lhs) + " = " + word_text(a.rhs);
    case AtomDecl::Kind::Neq:
      return "neq " + word_text(a.lhs) + " != " + word_text(a.rhs);
    case AtomDecl::Kind::In:
    case AtomDecl::Kind::NotIn: {
      std::string s = "constraint " + a.var + (a.kind == AtomDecl::Kind::In ? " in " : " notin ") + a.automaton;
      if (a.element) s += ":" + (a.element->empty() ? std::string("1") : join(*a.element, ","));
      return s;
    }
  }
  return "";
}

}  // namespace

ProblemText parse_problem(const std::string& text) {
  ProblemText p;
  bool have_mode = false;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::set<std::string> declared;
  auto declare = [&](LineParser& lp, const Tok& t) {
    if (t.text == "1" || t.text == "=" || t.text == "|" || t.text.find_first_of(":,'") != std::string::npos)
      lp.fail_at(t, "invalid name '" + t.text + "'");
    if (!declared.insert(t.text).second) lp.fail_at(t, "duplicate declaration of '" + t.text + "'");
  };
  while (std::getline(in, raw)) {
    ++line;
    auto toks = split_line(raw);
    if (toks.empty()) continue;
    LineParser lp(line, toks);
    Tok kw = lp.peek();
    if (kw.text == "mode") {
      lp.next();
      Tok m = lp.next();
      if (m.text == "free-group")
        p.mode = Mode::FreeGroup;
      else if (m.text == "free-monoid")
        p.mode = Mode::FreeMonoid;
      else if (m.text == "free-product")
        p.mode = Mode::FreeProduct;
      else
        lp.fail_at(m, "unknown mode '" + m.text + "'");
      if (have_mode) lp.fail_at(kw, "mode given twice");
      have_mode = true;
    } else if (kw.text == "factor") {
      lp.next();
      Tok k = lp.next();
      FactorDecl f;
      if (k.text == "free-group" || k.text == "free-monoid") {
        f.kind = k.text == "free-group" ? FactorKind::FreeGroup : FactorKind::FreeMonoid;
        while (!lp.done() && lp.peek().text != "inv") {
          Tok t = lp.next();
          declare(lp, t);
          f.letters.push_back(t.text);
        }
        if (!lp.done()) {
          Tok invkw = lp.next();
          if (f.kind != FactorKind::FreeMonoid) lp.fail_at(invkw, "involution pairs only for free monoids");
          while (!lp.done()) {
            Tok t = lp.next();
            auto parts = split_on(t.text, '=');
            if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) lp.fail_at(t, "expected x=y");
            bool known0 = std::count(f.letters.begin(), f.letters.end(), parts[0]) > 0;
            if (!known0) lp.fail_at(t, "involution of undeclared letter '" + parts[0] + "'");
            if (parts[1] != parts[0] && !std::count(f.letters.begin(), f.letters.end(), parts[1])) {
              if (!declared.insert(parts[1]).second) lp.fail_at(t, "duplicate declaration of '" + parts[1] + "'");
            }
            f.inv.emplace_back(parts[0], parts[1]);
          }
        }
        if (f.letters.empty()) lp.fail_at(k, "factor without letters");
      } else if (k.text == "finite-group") {
        f.kind = FactorKind::FiniteGroup;
        f.name = lp.next().text;
        lp.expect("elems");
        while (!lp.done() && lp.peek().text != "table") {
          Tok t = lp.next();
          if (!f.elements.empty()) declare(lp, t);
          f.elements.push_back(t.text);
        }
        lp.expect("table");
        std::vector<int> row;
        auto flush = [&](const Tok& at) {
          if (row.size() != f.elements.size()) lp.fail_at(at, "table row has wrong length");
          f.table.push_back(row);
          row.clear();
        };
        Tok last = k;
        while (!lp.done()) {
          Tok t = lp.next();
          last = t;
          if (t.text == ";") {
            flush(t);
            continue;
          }
          auto it = std::find(f.elements.begin(), f.elements.end(), t.text);
          if (it != f.elements.end())
            row.push_back(static_cast<int>(it - f.elements.begin()));
          else if (is_int(t.text))
            row.push_back(std::stoi(t.text));
          else
            lp.fail_at(t, "unknown element '" + t.text + "'");
        }
        if (!row.empty()) flush(last);
        if (f.table.size() != f.elements.size()) lp.fail_at(last, "table has wrong number of rows");
      } else {
        lp.fail_at(k, "unknown factor kind '" + k.text + "'");
      }
      p.factors.push_back(std::move(f));
    } else if (kw.text == "vars") {
      lp.next();
      while (!lp.done()) {
        Tok t = lp.next();
        declare(lp, t);
        p.vars.push_back(t.text);
      }
    } else if (kw.text == "automaton") {
      lp.next();
      AutomatonDecl a;
      Tok name = lp.next();
      a.name = name.text;
      for (const auto& other : p.automata)
        if (other.name == a.name) lp.fail_at(name, "duplicate automaton '" + a.name + "'");
      lp.expect("states");
      a.states = lp.next_int();
      if (a.states <= 0 || a.states > 64) lp.fail("automaton needs 1..64 states");
      lp.expect("init");
      a.initial = lp.next_int_list();
      lp.expect("final");
      if (!lp.done() && lp.peek().text == "-")
        lp.next();
      else
        a.final = lp.next_int_list();
      lp.expect("edges");
      while (!lp.done()) {
        Tok t = lp.next();
        auto parts = split_on(t.text, ':');
        if (parts.size() != 3 || !is_int(parts[0]) || !is_int(parts[2]) || parts[1].empty())
          lp.fail_at(t, "expected edge p:letter:q");
        a.edges.push_back({std::stoi(parts[0]), parts[1], std::stoi(parts[2])});
      }
      auto in_range = [&](int s) { return s >= 0 && s < a.states; };
      for (int s : a.initial)
        if (!in_range(s)) lp.fail_at(name, "initial state out of range");
      for (int s : a.final)
        if (!in_range(s)) lp.fail_at(name, "final state out of range");
      for (const auto& e : a.edges)
        if (!in_range(e.from) || !in_range(e.to)) lp.fail_at(name, "edge state out of range");
      p.automata.push_back(std::move(a));
    } else if (kw.text == "eq" || kw.text == "neq" || kw.text == "constraint") {
      AtomDecl a = parse_atom(lp);
      if (!lp.done()) lp.fail("trailing input");
      p.clauses.push_back({a});
    } else if (kw.text == "either") {
      lp.next();
      std::vector<AtomDecl> clause{parse_atom(lp)};
      while (!lp.done()) {
        lp.expect("|");
        clause.push_back(parse_atom(lp));
      }
      p.clauses.push_back(std::move(clause));
    } else if (kw.text == "target") {
      lp.next();
      while (!lp.done()) p.targets.push_back(lp.next().text);
    } else {
      lp.fail_at(kw, "unknown directive '" + kw.text + "'");
    }
  }
  if (!have_mode) throw ParseError(1, 1, "missing mode line");
  return p;
}

std::string print_problem(const ProblemText& p) {
  std::ostringstream o;
  o << "mode " << mode_name(p.mode) << "\n";
  for (const auto& f : p.factors) {
    if (f.kind == FactorKind::FiniteGroup) {
      o << "factor finite-group " << f.name << " elems " << join(f.elements, " ") << " table";
      for (std::size_t r = 0; r < f.table.size(); ++r) {
        if (r) o << " ;";
        for (int v : f.table[r]) o << " " << f.elements[v];
      }
      o << "\n";
    } else {
      o << "factor " << (f.kind == FactorKind::FreeGroup ? "free-group " : "free-monoid ") << join(f.letters, " ");
      if (!f.inv.empty()) {
        o << " inv";
        for (const auto& [x, y] : f.inv) o << " " << x << "=" << y;
      }
      o << "\n";
    }
  }
  if (!p.vars.empty()) o << "vars " << join(p.vars, " ") << "\n";
  for (const auto& a : p.automata) {
    auto ints = [](const std::vector<int>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s;
    };
    o << "automaton " << a.name << " states " << a.states << " init " << ints(a.initial) << " final "
      << (a.final.empty() ? std::string("-") : ints(a.final)) << " edges";
    for (const auto& e : a.edges) o << " " << e.from << ":" << e.label << ":" << e.to;
    o << "\n";
  }
  for (const auto& c : p.clauses) {
    if (c.size() == 1) {
      o << atom_text(c[0]) << "\n";
    } else {
      o << "either";
      for (std::size_t i = 0; i < c.size(); ++i) o << (i ? " | " : " ") << atom_text(c[i]);
      o << "\n";
    }
  }
  if (!p.targets.empty()) o << "target " << join(p.targets, " ") << "\n";
  return o.str();
}

Problem compile_problem(const ProblemText& text) {
  Problem p;
  p.mode = text.mode;
  p.source = text;
  p.alph = std::make_shared<Alphabet>();
  Alphabet& alph = *p.alph;
  if (text.factors.empty()) throw Error("no factors declared");
  for (const auto& f : text.factors) {
    switch (f.kind) {
      case FactorKind::FreeGroup:
        p.spec.add_free_group(alph, f.letters);
        break;
      case FactorKind::FreeMonoid:
        p.spec.add_free_monoid(alph, f.letters, f.inv);
        break;
      case FactorKind::FiniteGroup:
        p.spec.add_finite_group(alph, f.name, f.elements, f.table);
        break;
    }
  }
  for (const auto& f : p.spec.factors()) {
    if (p.mode == Mode::FreeGroup && f.kind != FactorKind::FreeGroup)
      throw Error("free-group mode accepts only free-group factors");
    if (p.mode == Mode::FreeMonoid && f.kind != FactorKind::FreeMonoid)
      throw Error("free-monoid mode accepts only free-monoid factors");
  }
  if (p.mode == Mode::FreeProduct && !p.spec.is_infinite()) throw Error("free product must be infinite");
  for (const auto& v : text.vars) p.vars.push_back(alph.add_pair(v, v + "'", SymKind::Variable));

  auto sym = [&](const std::string& name) {
    Sym s = alph.lookup(name);
    if (s < 0 || p.spec.is_hat(s)) throw Error("unknown symbol '" + name + "'");
    return s;
  };
  auto word = [&](const std::vector<std::string>& toks) {
    Word w;
    for (const auto& t : toks) w.push_back(sym(t));
    return w;
  };
  auto letters_only = [&](const Word& w, const std::string& what) {
    for (Sym s : w)
      if (!p.spec.is_letter(s)) throw Error(what + " must use letters only");
  };

  const bool group_like = p.mode != Mode::FreeMonoid;
  for (const auto& a : text.automata) {
    UserAutomaton ua;
    ua.name = a.name;
    Nfa n;
    for (int s = 0; s < a.states; ++s) n.add_state(std::count(a.final.begin(), a.final.end(), s) > 0);
    n.initial = a.initial;
    for (const auto& e : a.edges) {
      Sym lab = Nfa::kEps;
      if (e.label != "1") {
        lab = sym(e.label);
        if (!p.spec.is_letter(lab)) throw Error("automaton " + a.name + ": '" + e.label + "' is not a letter");
      }
      n.add_edge(e.from, lab, e.to);
    }
    if (group_like) n = benois_saturate(n, p.spec);
    ua.nfa = remove_eps(n);
    ua.rec = boolean_matrix_morphism(ua.nfa, p.letters());
    std::vector<Elem> gens;
    for (Sym x : p.letters()) gens.push_back(ua.rec.images.at(x));
    ua.elements = generated_submonoid(*ua.rec.monoid, gens);
    std::sort(ua.elements.begin(), ua.elements.end());
    p.automata.push_back(std::move(ua));
  }
  auto automaton_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < p.automata.size(); ++i)
      if (p.automata[i].name == name) return static_cast<int>(i);
    throw Error("unknown automaton '" + name + "'");
  };

  for (const auto& clause : text.clauses) {
    std::vector<Atom> options;
    for (const auto& a : clause) {
      if (a.kind == AtomDecl::Kind::Eq || a.kind == AtomDecl::Kind::Neq) {
        Atom at;
        at.kind = a.kind == AtomDecl::Kind::Eq ? AtomKind::Eq : AtomKind::Neq;
        at.lhs = word(a.lhs);
        at.rhs = word(a.rhs);
        options.push_back(at);
        continue;
      }
      Sym v = sym(a.var);
      if (!alph.is_variable(v)) throw Error("constraint on non-variable '" + a.var + "'");
      int ai = automaton_index(a.automaton);
      const UserAutomaton& ua = p.automata[ai];
      std::vector<Elem> chosen;
      if (a.element) {
        Word w = word(*a.element);
        letters_only(w, "constraint element");
        if (group_like) w = p.spec.normal_form(w);
        Elem m = ua.rec.eval(w);
        if (a.kind == AtomDecl::Kind::In) {
          chosen.push_back(m);
        } else {
          if (ua.elements.size() < 2) throw Error("negated constraint over a one-element monoid");
          for (Elem e : ua.elements)
            if (e != m) chosen.push_back(e);
        }
      } else {
        for (Elem e : ua.elements)
          if (ua.rec.accepting(e) == (a.kind == AtomDecl::Kind::In)) chosen.push_back(e);
      }
      for (Elem e : chosen) {
        Atom at;
        at.kind = AtomKind::Member;
        at.var = v;
        at.automaton = ai;
        at.element = e;
        options.push_back(at);
      }
    }
    p.clauses.push_back(std::move(options));
  }

  if (text.targets.empty()) {
    p.targets = p.vars;
  } else {
    std::unordered_set<Sym> seen;
    for (const auto& t : text.targets) {
      Sym s = sym(t);
      if (std::find(p.vars.begin(), p.vars.end(), s) == p.vars.end()) throw Error("target '" + t + "' is not a variable");
      if (!seen.insert(s).second) throw Error("duplicate target '" + t + "'");
      p.targets.push_back(s);
    }
  }
  return p;
}

std::vector<Branch> normalize_formula(const Problem& p) {
  constexpr std::size_t kMaxBranches = 100000;
  std::vector<Branch> cur{Branch{}};
  for (const auto& clause : p.clauses) {
    std::vector<Branch> next;
    for (const auto& b : cur)
      for (const auto& opt : clause) {
        bool clash = false, dup = false;
        for (const auto& x : b) {
          if (x == opt) dup = true;
          if (x.kind == AtomKind::Member && opt.kind == AtomKind::Member && x.var == opt.var &&
              x.automaton == opt.automaton && x.element != opt.element)
            clash = true;
        }
        if (clash) continue;
        Branch nb = b;
        if (!dup) nb.push_back(opt);
        next.push_back(std::move(nb));
        if (next.size() > kMaxBranches) throw Error("formula expands to too many branches");
      }
    cur = std::move(next);
  }
  std::sort(cur.begin(), cur.end(), [](const Branch& a, const Branch& b) {
    auto key = [](const Branch& x) {
      std::vector<std::tuple<int, Word, Word, Sym, int, Elem>> k;
      for (const auto& t : x) k.emplace_back(static_cast<int>(t.kind), t.lhs, t.rhs, t.var, t.automaton, t.element);
      std::sort(k.begin(), k.end());
      return k;
    };
    return key(a) < key(b);
  });
  cur.erase(std::unique(cur.begin(), cur.end(),
                        [](const Branch& a, const Branch& b) {
                          auto s = [](Branch x) {
                            std::sort(x.begin(), x.end(), [](const Atom& u, const Atom& v) {
                              return std::tie(u.kind, u.lhs, u.rhs, u.var, u.automaton, u.element) <
                                     std::tie(v.kind, v.lhs, v.rhs, v.var, v.automaton, v.element);
                            });
                            return x;
                          };
                          return s(a) == s(b);
                        }),
            cur.end());
  return cur;
}

Word substitute(const Problem& p, const Word& w, const std::vector<Word>& values) {
  Word out;
  for (Sym s : w) {
    if (!p.alph->is_variable(s)) {
      out.push_back(s);
      continue;
    }
    bool found = false;
    for (std::size_t i = 0; i < p.vars.size(); ++i) {
      if (p.vars[i] == s) {
        out.insert(out.end(), values[i].begin(), values[i].end());
        found = true;
      } else if (p.alph->partner(p.vars[i]) == s) {
        Word inv = p.raw_involute(values[i]);
        out.insert(out.end(), inv.begin(), inv.end());
        found = true;
      }
      if (found) break;
    }
    if (!found) throw Error("substitute: unknown variable " + p.alph->name(s));
  }
  return out;
}

bool holds(const Problem& p, const Atom& a, const std::vector<Word>& values) {
  switch (a.kind) {
    case AtomKind::Eq:
    case AtomKind::Neq: {
      Word l = substitute(p, a.lhs, values), r = substitute(p, a.rhs, values);
      bool eq = p.mode == Mode::FreeMonoid ? l == r : p.spec.normal_form(l) == p.spec.normal_form(r);
      return (a.kind == AtomKind::Eq) == eq;
    }
    case AtomKind::Member: {
      Word v = substitute(p, Word{a.var}, values);
      return p.automata.at(a.automaton).rec.eval(v) == a.element;
    }
  }
  return false;
}

bool holds(const Problem& p, const Branch& b, const std::vector<Word>& values) {
  return std::all_of(b.begin(), b.end(), [&](const Atom& a) { return holds(p, a, values); });
}

std::string format_word(const Alphabet& alph, const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (Sym x : w) s += alph.name(x);
  return s;
}

std::string format_tuple(const Alphabet& alph, const std::vector<Word>& tuple) {
  std::string s;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) s += "#";
    s += format_word(alph, tuple[i]);
  }
  return s;
}

void sort_tuples(std::vector<std::string>& rows) {
  std::sort(rows.begin(), rows.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

}  // namespace weq
