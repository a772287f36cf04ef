#include "weq/edt0l.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

namespace weq {

Word Endomorphism::apply(const Word& w) const {
  if (images.empty()) return w;
  Word out;
  out.reserve(w.size());
  for (Sym s : w) {
    auto it = images.find(s);
    if (it == images.end())
      out.push_back(s);
    else
      out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

const Word* Endomorphism::image(Sym s) const {
  auto it = images.find(s);
  return it == images.end() ? nullptr : &it->second;
}

bool Endomorphism::is_identity() const {
  for (const auto& [s, w] : images)
    if (w.size() != 1 || w[0] != s) return false;
  return true;
}

Endomorphism compose(const Endomorphism& f, const Endomorphism& g) {
  Endomorphism r;
  r.involutive = f.involutive && g.involutive;
  for (const auto& [s, w] : g.images) r.images[s] = f.apply(w);
  for (const auto& [s, w] : f.images)
    if (!g.images.count(s)) r.images[s] = w;
  for (auto it = r.images.begin(); it != r.images.end();) {
    if (it->second.size() == 1 && it->second[0] == it->first)
      it = r.images.erase(it);
    else
      ++it;
  }
  return r;
}

int EndoNfa::add_state(bool acc) {
  accepting.push_back(acc);
  return states++;
}

int EndoNfa::add_label(const Endomorphism& h) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == h) return static_cast<int>(i);
  labels.push_back(h);
  return static_cast<int>(labels.size()) - 1;
}

void EndoNfa::add_transition(int from, int label, int to) { transitions.push_back({from, label, to}); }

Word evaluate_path(const EndoNfa& a, const std::vector<int>& path) {
  if (path.empty()) return {a.seed};
  const auto& first = a.transitions.at(static_cast<std::size_t>(path.front()));
  if (std::find(a.initial.begin(), a.initial.end(), first.from) == a.initial.end())
    throw Error("path does not start in an initial state");
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (a.transitions.at(static_cast<std::size_t>(path[i])).to !=
        a.transitions.at(static_cast<std::size_t>(path[i + 1])).from)
      throw Error("path is not connected");
  const auto& last = a.transitions.at(static_cast<std::size_t>(path.back()));
  if (!a.accepting.at(static_cast<std::size_t>(last.to))) throw Error("path does not end in an accepting state");
  Word w{a.seed};
  for (std::size_t i = path.size(); i-- > 0;)
    w = a.labels[static_cast<std::size_t>(a.transitions[static_cast<std::size_t>(path[i])].label)].apply(w);
  return w;
}

std::vector<bool> useful_states(const EndoNfa& a) {
  const auto n = static_cast<std::size_t>(a.states);
  std::vector<std::vector<int>> fwd(n), bwd(n);
  for (const auto& t : a.transitions) {
    fwd[static_cast<std::size_t>(t.from)].push_back(t.to);
    bwd[static_cast<std::size_t>(t.to)].push_back(t.from);
  }
  auto reach = [&](const std::vector<int>& start, const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(n, false);
    std::deque<int> q;
    for (int s : start)
      if (!seen[static_cast<std::size_t>(s)]) {
        seen[static_cast<std::size_t>(s)] = true;
        q.push_back(s);
      }
    while (!q.empty()) {
      int s = q.front();
      q.pop_front();
      for (int t : adj[static_cast<std::size_t>(s)])
        if (!seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = true;
          q.push_back(t);
        }
    }
    return seen;
  };
  std::vector<int> acc;
  for (std::size_t s = 0; s < n; ++s)
    if (a.accepting[s]) acc.push_back(static_cast<int>(s));
  auto f = reach(a.initial, fwd);
  auto b = reach(acc, bwd);
  std::vector<bool> u(n);
  for (std::size_t s = 0; s < n; ++s) u[s] = f[s] && b[s];
  return u;
}

bool is_empty(const EndoNfa& a) {
  auto u = useful_states(a);
  return std::none_of(u.begin(), u.end(), [](bool x) { return x; });
}

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

struct WordHash {
  std::size_t operator()(const std::pair<int, Word>& p) const {
    std::size_t h = std::hash<int>()(p.first);
    for (Sym s : p.second) h = h * 1000003u ^ std::hash<Sym>()(s);
    return h;
  }
};

}  // namespace

std::vector<Word> enumerate(const EndoNfa& a, std::size_t max_len, std::size_t budget) {
  const auto n = static_cast<std::size_t>(a.states);
  std::set<Sym> letters{a.seed};
  for (Sym t : a.terminals) letters.insert(t);
  for (const auto& l : a.labels)
    for (const auto& [s, w] : l.images) {
      letters.insert(s);
      letters.insert(w.begin(), w.end());
    }
  std::vector<Sym> syms(letters.begin(), letters.end());
  std::unordered_map<Sym, std::size_t> pos;
  for (std::size_t i = 0; i < syms.size(); ++i) pos[syms[i]] = i;
  std::unordered_set<Sym> terminal(a.terminals.begin(), a.terminals.end());
  std::vector<bool> is_init(n, false);
  for (int s : a.initial) is_init[static_cast<std::size_t>(s)] = true;

  // minlen[s][x]: shortest output reachable from letter x standing at state s.
  std::vector<std::vector<std::size_t>> minlen(n, std::vector<std::size_t>(syms.size(), kInf));
  for (std::size_t s = 0; s < n; ++s)
    if (is_init[s])
      for (std::size_t i = 0; i < syms.size(); ++i)
        if (terminal.count(syms[i])) minlen[s][i] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& t : a.transitions) {
      const auto& l = a.labels[static_cast<std::size_t>(t.label)];
      auto& dst = minlen[static_cast<std::size_t>(t.to)];
      const auto& src = minlen[static_cast<std::size_t>(t.from)];
      for (std::size_t i = 0; i < syms.size(); ++i) {
        std::size_t v = 0;
        if (const Word* img = l.image(syms[i])) {
          for (Sym y : *img) v = std::min(kInf, v + src[pos.at(y)]);
        } else {
          v = src[i];
        }
        if (v < dst[i]) {
          dst[i] = v;
          changed = true;
        }
      }
    }
  }
  auto bound = [&](int s, const Word& w) {
    std::size_t v = 0;
    for (Sym x : w) {
      auto it = pos.find(x);
      if (it == pos.end()) return kInf;
      v = std::min(kInf, v + minlen[static_cast<std::size_t>(s)][it->second]);
    }
    return v;
  };

  std::vector<std::vector<const EndoNfa::Transition*>> incoming(n);
  for (const auto& t : a.transitions) incoming[static_cast<std::size_t>(t.to)].push_back(&t);

  std::unordered_set<std::pair<int, Word>, WordHash> seen;
  std::deque<std::pair<int, Word>> queue;
  std::set<std::pair<std::size_t, Word>> out;
  auto visit = [&](int s, Word w) {
    if (bound(s, w) > max_len) return;
    std::pair<int, Word> key{s, std::move(w)};
    if (!seen.insert(key).second) return;
    if (seen.size() > budget) throw Error("enumeration budget");
    queue.push_back(std::move(key));
  };
  for (std::size_t s = 0; s < n; ++s)
    if (a.accepting[s]) visit(static_cast<int>(s), Word{a.seed});
  while (!queue.empty()) {
    auto [s, w] = std::move(queue.front());
    queue.pop_front();
    if (is_init[static_cast<std::size_t>(s)] && w.size() <= max_len &&
        std::all_of(w.begin(), w.end(), [&](Sym x) { return terminal.count(x) > 0; }))
      out.insert({w.size(), w});
    for (const auto* t : incoming[static_cast<std::size_t>(s)])
      visit(t->from, a.labels[static_cast<std::size_t>(t->label)].apply(w));
  }
  std::vector<Word> res;
  for (auto& [len, w] : out) res.push_back(w);
  return res;
}

std::string finiteness_name(Finiteness f) {
  switch (f) {
    case Finiteness::Empty:
      return "empty";
    case Finiteness::Finite:
      return "finite";
    case Finiteness::Infinite:
      return "infinite";
  }
  return "?";
}

namespace {

// Shortest transition path from any state in `from` to `target` (or to any
// accepting state when target < 0), restricted to `allowed` states.
std::optional<std::vector<int>> shortest_path(const EndoNfa& a, const std::vector<int>& from, int target,
                                              const std::vector<bool>& allowed, bool nonempty) {
  const auto n = static_cast<std::size_t>(a.states);
  std::vector<std::vector<int>> out(n);
  for (std::size_t i = 0; i < a.transitions.size(); ++i)
    out[static_cast<std::size_t>(a.transitions[i].from)].push_back(static_cast<int>(i));
  std::vector<int> via(n, -2);
  std::deque<int> q;
  auto is_goal = [&](int s) { return target >= 0 ? s == target : static_cast<bool>(a.accepting[static_cast<std::size_t>(s)]); };
  for (int s : from) {
    if (!nonempty && is_goal(s)) return std::vector<int>{};
    via[static_cast<std::size_t>(s)] = -1;
    q.push_back(s);
  }
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (int ti : out[static_cast<std::size_t>(s)]) {
      int t = a.transitions[static_cast<std::size_t>(ti)].to;
      if (!allowed[static_cast<std::size_t>(t)]) continue;
      if (is_goal(t)) {
        std::vector<int> path{ti};
        for (int cur = s; via[static_cast<std::size_t>(cur)] >= 0;) {
          int pt = via[static_cast<std::size_t>(cur)];
          path.push_back(pt);
          cur = a.transitions[static_cast<std::size_t>(pt)].from;
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (via[static_cast<std::size_t>(t)] == -2) {
        via[static_cast<std::size_t>(t)] = ti;
        q.push_back(t);
      }
    }
  }
  return std::nullopt;
}

std::size_t pumped_length(const EndoNfa& a, const std::vector<int>& head, const std::vector<int>& loop,
                          const std::vector<int>& tail, int times) {
  Word w{a.seed};
  auto run = [&](const std::vector<int>& seg) {
    for (std::size_t i = seg.size(); i-- > 0;) {
      w = a.labels[static_cast<std::size_t>(a.transitions[static_cast<std::size_t>(seg[i])].label)].apply(w);
      if (w.size() > 5000000) throw Error("pumped word too long");
    }
  };
  run(tail);
  for (int k = 0; k < times; ++k) run(loop);
  run(head);
  return w.size();
}

}  // namespace

Classification classify(const EndoNfa& a) {
  Classification c;
  const auto n = static_cast<std::size_t>(a.states);
  auto useful = useful_states(a);
  if (std::none_of(useful.begin(), useful.end(), [](bool x) { return x; })) return c;
  std::vector<int> cyclic;
  for (std::size_t s = 0; s < n; ++s) {
    if (!useful[s]) continue;
    if (shortest_path(a, {static_cast<int>(s)}, static_cast<int>(s), useful, true)) cyclic.push_back(static_cast<int>(s));
  }
  if (cyclic.empty()) {
    c.morphisms = c.outputs = Finiteness::Finite;
    return c;
  }
  c.morphisms = Finiteness::Infinite;
  c.outputs = Finiteness::Finite;
  std::size_t tried = 0;
  for (int s : cyclic) {
    if (++tried > 200) break;
    auto head = shortest_path(a, a.initial, s, useful, false);
    auto loop = shortest_path(a, {s}, s, useful, true);
    auto tail = shortest_path(a, {s}, -1, useful, false);
    if (!head || !loop || !tail) continue;
    try {
      auto l1 = pumped_length(a, *head, *loop, *tail, 1);
      auto l2 = pumped_length(a, *head, *loop, *tail, 2);
      auto l3 = pumped_length(a, *head, *loop, *tail, 3);
      if (l1 < l2 && l2 < l3) {
        c.outputs = Finiteness::Infinite;
        return c;
      }
    } catch (const Error&) {
      c.outputs = Finiteness::Infinite;
      return c;
    }
  }
  return c;
}

namespace {

std::string sym_text(const EndoNfa& a, Sym s) {
  if (s >= 0 && static_cast<std::size_t>(s) < a.names.size()) return a.names[static_cast<std::size_t>(s)];
  return std::to_string(s);
}

std::string word_ids(const Word& w) {
  std::string r;
  for (std::size_t i = 0; i < w.size(); ++i) r += (i ? "." : "") + std::to_string(w[i]);
  return r;
}

}  // namespace

std::string serialize(const EndoNfa& a) {
  std::ostringstream o;
  o << "edt0l-nfa\n";
  o << "symbols " << a.names.size() << "\n";
  for (std::size_t i = 0; i < a.names.size(); ++i) o << "sym " << i << " " << a.names[i] << "\n";
  o << "seed " << a.seed << "\n";
  o << "terminals";
  for (Sym t : a.terminals) o << " " << t;
  o << "\nstates " << a.states << "\ninitial";
  for (int s : a.initial) o << " " << s;
  o << "\naccepting";
  for (int s = 0; s < a.states; ++s)
    if (a.accepting[static_cast<std::size_t>(s)]) o << " " << s;
  o << "\n";
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    o << "label " << i << " " << (a.labels[i].involutive ? 1 : 0);
    for (const auto& [s, w] : a.labels[i].images) o << " " << s << "=" << word_ids(w);
    o << "\n";
  }
  for (const auto& t : a.transitions) o << "trans " << t.from << " " << t.label << " " << t.to << "\n";
  o << "end\n";
  return o.str();
}

EndoNfa deserialize(const std::string& text) {
  EndoNfa a;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false, done = false;
  auto fail = [&](const std::string& msg) { throw Error("line " + std::to_string(lineno) + ": " + msg); };
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) fail("bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad number '" + s + "'");
    }
    return 0;
  };
  std::vector<int> acc;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (!header) {
      if (key != "edt0l-nfa") fail("missing header");
      header = true;
      continue;
    }
    if (done) fail("content after end");
    std::vector<std::string> f;
    for (std::string t; ls >> t;) f.push_back(t);
    if (key == "symbols") {
      if (f.size() != 1) fail("symbols takes one count");
      a.names.assign(static_cast<std::size_t>(to_int(f[0])), "");
    } else if (key == "sym") {
      if (f.size() != 2) fail("sym takes an id and a name");
      int id = to_int(f[0]);
      if (id < 0 || static_cast<std::size_t>(id) >= a.names.size()) fail("symbol id out of range");
      a.names[static_cast<std::size_t>(id)] = f[1];
    } else if (key == "seed") {
      if (f.size() != 1) fail("seed takes one symbol");
      a.seed = to_int(f[0]);
    } else if (key == "terminals") {
      for (auto& t : f) a.terminals.push_back(to_int(t));
    } else if (key == "states") {
      if (f.size() != 1) fail("states takes one count");
      a.states = to_int(f[0]);
      if (a.states < 0) fail("negative state count");
      a.accepting.assign(static_cast<std::size_t>(a.states), false);
    } else if (key == "initial") {
      for (auto& t : f) a.initial.push_back(to_int(t));
    } else if (key == "accepting") {
      for (auto& t : f) acc.push_back(to_int(t));
    } else if (key == "label") {
      if (f.size() < 2) fail("label needs an index and a flag");
      if (to_int(f[0]) != static_cast<int>(a.labels.size())) fail("labels out of order");
      Endomorphism h;
      h.involutive = to_int(f[1]) != 0;
      for (std::size_t i = 2; i < f.size(); ++i) {
        auto eq = f[i].find('=');
        if (eq == std::string::npos) fail("image needs '='");
        Sym s = to_int(f[i].substr(0, eq));
        Word w;
        std::string rest = f[i].substr(eq + 1);
        std::size_t p = 0;
        while (p < rest.size()) {
          auto d = rest.find('.', p);
          if (d == std::string::npos) d = rest.size();
          w.push_back(to_int(rest.substr(p, d - p)));
          p = d + 1;
        }
        h.images[s] = w;
      }
      a.labels.push_back(h);
    } else if (key == "trans") {
      if (f.size() != 3) fail("trans takes three fields");
      EndoNfa::Transition t{to_int(f[0]), to_int(f[1]), to_int(f[2])};
      if (t.from < 0 || t.from >= a.states || t.to < 0 || t.to >= a.states) fail("state out of range");
      if (t.label < 0 || static_cast<std::size_t>(t.label) >= a.labels.size()) fail("label out of range");
      a.transitions.push_back(t);
    } else if (key == "end") {
      done = true;
    } else {
      fail("unknown record '" + key + "'");
    }
  }
  if (!header) throw Error("line 1: missing header");
  if (!done) throw Error("line " + std::to_string(lineno) + ": missing end");
  for (int s : acc) {
    if (s < 0 || s >= a.states) throw Error("accepting state out of range");
    a.accepting[static_cast<std::size_t>(s)] = true;
  }
  for (int s : a.initial)
    if (s < 0 || s >= a.states) throw Error("initial state out of range");
  return a;
}

std::string to_dot(const EndoNfa& a) {
  std::ostringstream o;
  o << "digraph edt0l {\n  rankdir=LR;\n";
  for (int s = 0; s < a.states; ++s) {
    o << "  q" << s << " [shape=" << (a.accepting[static_cast<std::size_t>(s)] ? "doublecircle" : "circle");
    if (std::find(a.initial.begin(), a.initial.end(), s) != a.initial.end()) o << ", style=bold";
    o << "];\n";
  }
  for (const auto& t : a.transitions) {
    const auto& h = a.labels[static_cast<std::size_t>(t.label)];
    std::string lab;
    for (const auto& [s, w] : h.images) {
      if (!lab.empty()) lab += "\\n";
      lab += sym_text(a, s) + "->";
      if (w.empty()) lab += "1";
      for (Sym x : w) lab += sym_text(a, x);
    }
    if (lab.empty()) lab = "id";
    o << "  q" << t.from << " -> q" << t.to << " [label=\"" << lab << "\"];\n";
  }
  o << "}\n";
  return o.str();
}

EndoNfa example_vv_system() {
  EndoNfa a;
  const Sym hash = 0, sa = 1, sb = 2, dollar = 3;
  a.names = {"#", "a", "b", "$"};
  a.seed = hash;
  a.terminals = {sa, sb};
  int q0 = a.add_state(), q1 = a.add_state(), q2 = a.add_state(true);
  a.initial = {q0};
  Endomorphism erase, grow_a, grow_b, start;
  erase.involutive = grow_a.involutive = grow_b.involutive = start.involutive = false;
  erase.images[dollar] = {};
  grow_a.images[dollar] = {dollar, sa};
  grow_b.images[dollar] = {dollar, sb};
  start.images[hash] = {dollar, dollar};
  a.add_transition(q0, a.add_label(erase), q1);
  a.add_transition(q1, a.add_label(grow_a), q1);
  a.add_transition(q1, a.add_label(grow_b), q1);
  a.add_transition(q1, a.add_label(start), q2);
  return a;
}

}  // namespace weq
