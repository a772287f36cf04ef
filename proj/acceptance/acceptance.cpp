// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "../tests/oracles.hpp"
#include "weq/cli.hpp"
#include "weq/oracle.hpp"
#include "weq/recompression.hpp"
#include "weq/solver.hpp"

using namespace weq;

namespace {

constexpr int kBound = 6;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> corpus() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(WEQ_CORPUS_DIR))
    if (e.path().extension() == ".weq") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

struct Instance {
  std::string name;
  Mode mode;
  bool constrained = false;
  bool match = false;
  bool empty_nfa = false;
  std::size_t solutions = 0, witnesses = 0, tuples = 0;
  double seconds = 0;
  RunStats stats;
  std::string error;
};

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
  failures += !ok;
}

std::vector<Instance> run_corpus() {
  std::vector<Instance> out;
  for (const auto& path : corpus()) {
    Instance in;
    in.name = std::filesystem::path(path).filename().string();
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Problem p = load_problem(read_file(path));
      in.mode = p.mode;
      in.constrained = !p.automata.empty();
      for (const auto& clause : p.clauses)
        for (const auto& a : clause) in.constrained = in.constrained || a.kind != AtomKind::Eq;
      SolveOptions opt;
      opt.max_len = kBound;
      SolveResult r = solve_all(p, opt);
      const auto rows = enumerate_solutions(p, r.nfa, kBound, opt.budget_enum);
      in.match = r.oracle.complete && rows == r.oracle.tuples;
      in.solutions = r.oracle.solutions.size();
      in.tuples = r.oracle.tuples.size();
      in.witnesses = r.witnesses;
      in.empty_nfa = is_empty(r.nfa);
      in.stats = r.stats;
    } catch (const std::exception& e) {
      in.error = e.what();
    }
    in.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(in);
  }
  return out;
}

void criterion1(const std::vector<Instance>& runs) {
  std::size_t ok = 0, fm = 0, fg = 0, fp = 0, slow = 0;
  std::string bad;
  for (const auto& r : runs) {
    if (r.match && r.error.empty())
      ++ok;
    else
      bad += " " + r.name + (r.error.empty() ? "" : "(" + r.error + ")");
    fm += r.mode == Mode::FreeMonoid;
    fg += r.mode == Mode::FreeGroup;
    fp += r.mode == Mode::FreeProduct;
    slow += r.seconds > 300;
  }
  const bool pass = runs.size() >= 20 && ok == runs.size() && fm > 0 && fg > 0 && fp >= 3 && slow == 0;
  report(1, pass,
         std::to_string(ok) + "/" + std::to_string(runs.size()) + " instances match at L=6 (" + std::to_string(fm) +
             " free-monoid, " + std::to_string(fg) + " free-group, " + std::to_string(fp) + " free-product, " +
             std::to_string(slow) + " over 5 min)" + bad);
}

void criterion2() {
  EndoNfa a = example_vv_system();
  std::set<Word> want;
  for (const Word& v : oracles::all_words(a.terminals, 4)) want.insert(concat(v, v));
  const auto t0 = std::chrono::steady_clock::now();
  auto got = enumerate(a, 8);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = std::set<Word>(got.begin(), got.end()) == want && got.size() == want.size() && s < 1.0;
  report(2, pass, std::to_string(got.size()) + " words up to length 8, expected " + std::to_string(want.size()));
}

void criterion3() {
  using Q = boost::rational<long long>;
  Alphabet alph;
  const Sym a = alph.add_pair("a", "a'", SymKind::Constant);
  const Sym b = alph.add_pair("b", "b'", SymKind::Constant);
  const Sym c = alph.add_pair("c", "c'", SymKind::Constant);
  const Q abc = expected_pair_compressed_length(alph, {a, b, c});

  Alphabet fpa;
  FreeProductSpec spec;
  spec.add_finite_group(fpa, "Z2", {"e", "s"}, {{0, 1}, {1, 0}});
  spec.add_free_monoid(fpa, {"c"}, {{"c", "c"}});
  spec.add_free_group(fpa, {"a"});
  Q worst(0);
  std::size_t blocks = 0;
  for (const Word& w : oracles::all_words(spec.encoded_letters(), 3)) {
    // Shapes left by block and non-standard block compression.
    if (w.size() != 3 || w[0] == w[1] || w[1] == w[2] || (w[1] == fpa.partner(w[0]) && w[2] == w[0])) continue;
    ++blocks;
    worst = std::max(worst, expected_pair_compressed_length(fpa, w));
  }
  const Sym fa = fpa.lookup("a");
  const Q abb = expected_pair_compressed_length(fpa, {fa, fpa.lookup("s"), fpa.partner(fpa.lookup("s"))});
  std::ostringstream d;
  d << "E|abc| = " << abc << ", max over " << blocks << " free-product blocks = " << worst << ", E|a s s^| = " << abb;
  report(3, abc == Q(5, 2) && worst <= Q(11, 4) && abb == Q(11, 4), d.str());
}

RunStats merged(const std::vector<Instance>& runs) {
  RunStats s;
  for (const auto& r : runs) s.merge(r.stats);
  return s;
}

std::string first_failure(const RunStats& s) { return s.failures.empty() ? "" : " first: " + s.failures.front(); }

void criterion4(const RunStats& s) {
  report(4, s.arcs > 0 && s.forward_failures == 0 && s.solution_failures == 0,
         std::to_string(s.arcs) + " arcs checked, " + std::to_string(s.forward_failures) + " forward failures, " +
             std::to_string(s.solution_failures) + " solution failures" + first_failure(s));
}

void criterion5(const RunStats& s) {
  std::ostringstream d;
  d << "max |W|/n " << s.max_ratio << " (limit 35, kappa 100), after block " << s.max_ratio_block
    << " (limit 31), after pair " << s.max_ratio_pair << " (limit 29)";
  report(5, s.max_ratio <= 35 && s.max_ratio <= 100 && s.max_ratio_block <= 31 && s.max_ratio_pair <= 29, d.str());
}

void criterion6(const std::vector<Instance>& runs, const RunStats& s) {
  std::size_t unfinished = 0;
  for (const auto& r : runs) unfinished += r.witnesses != r.solutions || !r.error.empty();
  report(6, unfinished == 0 && s.measure_failures == 0,
         std::to_string(s.runs) + " runs, " + std::to_string(unfinished) + " instances with unfinished runs, " +
             std::to_string(s.measure_failures) + " measure failures");
}

void criterion7(const std::vector<Instance>& runs) {
  struct Case {
    const char* file;
    Finiteness want;
  };
  bool pass = true;
  std::string d;
  for (const Case& c : {Case{"fm_x_ab.weq", Finiteness::Finite}, Case{"fm_commute_a.weq", Finiteness::Infinite},
                        Case{"fm_xx_a.weq", Finiteness::Empty}}) {
    Problem p = load_problem(read_file(std::string(WEQ_CORPUS_DIR) + "/" + c.file));
    SolveOptions opt;
    SolveResult r = solve_all(p, opt);
    const Finiteness got = classify(r.nfa).outputs;
    const std::size_t at6 = r.oracle.tuples.size();
    const std::size_t at5 = solve_bruteforce(p, kBound - 1).tuples.size();
    bool card = false;
    if (c.want == Finiteness::Empty) card = at6 == 0;
    if (c.want == Finiteness::Finite) card = at6 > 0 && at6 == at5;
    if (c.want == Finiteness::Infinite) card = at6 > at5;
    pass = pass && got == c.want && card;
    d += std::string(c.file) + " " + finiteness_name(got) + " (oracle " + std::to_string(at6) + "); ";
  }
  std::size_t disagree = 0;
  for (const auto& r : runs) {
    RunConfig cfg;
    cfg.command = "sat";
    std::ostringstream out, err;
    const int code = run_text(cfg, read_file(std::string(WEQ_CORPUS_DIR) + "/" + r.name), out, err);
    const bool sat = code == 0;
    disagree += sat == r.empty_nfa || sat != (r.solutions > 0);
  }
  pass = pass && disagree == 0;
  report(7, pass, d + std::to_string(disagree) + " sat/is_empty disagreements");
}

// Saturated membership, complement and intersection against brute-force images.
std::size_t benois_mismatches(const FreeProductSpec& spec, std::mt19937& rng, std::size_t image_bound) {
  std::size_t bad = 0;
  const auto geos = spec.geodesics(6);
  for (int trial = 0; trial < 10; ++trial) {
    Nfa a = oracles::random_nfa(rng, spec.letters(), 5);
    Nfa b = oracles::random_nfa(rng, spec.letters(), 5);
    const auto ia = oracles::bounded_image(a, spec, image_bound);
    const auto ib = oracles::bounded_image(b, spec, image_bound);
    Nfa sa = benois_saturate(a, spec), sb = benois_saturate(b, spec);
    Nfa ca = rat_complement(sa, spec);
    Nfa both = rat_intersect(sa, sb, spec);
    for (const Word& w : geos) {
      const bool ina = ia.count(w) > 0, inb = ib.count(w) > 0;
      bad += sa.accepts(w) != ina;
      bad += ca.accepts(w) == ina;
      bad += both.accepts(w) != (ina && inb);
    }
  }
  return bad;
}

void criterion8() {
  std::mt19937 rng(2024);
  Alphabet za;
  FreeProductSpec z;
  z.add_finite_group(za, "Z2", {"e", "s"}, {{0, 1}, {1, 0}});
  z.add_finite_group(za, "Z3", {"f", "t", "u"}, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  Alphabet fa;
  FreeProductSpec f;
  f.add_free_group(fa, {"a", "b"});
  const std::size_t bz = benois_mismatches(z, rng, 14);
  const std::size_t bf = benois_mismatches(f, rng, 10);
  report(8, bz == 0 && bf == 0,
         std::to_string(bz) + " mismatches over Z2*Z3, " + std::to_string(bf) + " over F2 (geodesics up to 6)");
}

void criterion9() {
  std::size_t checked = 0, bad = 0;
  for (const std::vector<std::string>& names :
       {std::vector<std::string>{"a"}, std::vector<std::string>{"a", "b"}}) {
    Alphabet alph;
    std::vector<Sym> letters;
    for (const auto& n : names) {
      Sym s = alph.add_pair(n, n + "'", SymKind::Constant);
      letters.push_back(s);
      letters.push_back(s + 1);
    }
    const auto rw = build_reduced_word_monoid(alph, letters);
    std::vector<Sym> with_marker = letters;
    with_marker.push_back(Alphabet::kMarker);
    for (const Word& w : oracles::all_words(with_marker, 5)) {
      ++checked;
      const bool nonzero = !rw.monoid->is_zero(rw.mu0.eval(w));
      const bool free_of_marker = std::find(w.begin(), w.end(), Alphabet::kMarker) == w.end();
      bad += nonzero != (free_of_marker && oracles::stack_reduce(alph, w) == w);
    }
  }
  report(9, bad == 0, std::to_string(checked) + " words checked, " + std::to_string(bad) + " mismatches");
}

void criterion10(const RunStats& s) {
  report(10, s.structural_violations == 0 && s.postcondition_failures == 0,
         std::to_string(s.structural_violations) + " structural violations, " +
             std::to_string(s.postcondition_failures) + " postcondition failures over " + std::to_string(s.arcs) +
             " arcs" + first_failure(s));
}

}  // namespace

int main() {
  const auto runs = run_corpus();
  for (const auto& r : runs)
    std::cerr << r.name << ": " << r.tuples << " tuples, " << r.stats.arcs << " arcs, " << r.seconds << " s"
              << (r.error.empty() ? "" : " error: " + r.error) << "\n";
  const RunStats s = merged(runs);
  criterion1(runs);
  criterion2();
  criterion3();
  criterion4(s);
  criterion5(s);
  criterion6(runs, s);
  criterion7(runs);
  criterion8();
  criterion9();
  criterion10(s);
  return failures == 0 ? 0 : 1;
}
