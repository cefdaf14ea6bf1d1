#pragma once

// Batch front-end: job configuration, command dispatch and deterministic
// text reports.  Exit status 0 on success, 1 on a property failure, 2 on a
// configuration error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "gallerysheaf/acceptance.hpp"

namespace gallerysheaf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kMaxSL2Report = 8;  // E, H, H* are printed in full

inline const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> c = {"galleries", "stats", "sl2", "gkm-check", "fibre-basis", "sheaf", "purity", "decompose", "selftest"};
  return c;
}

struct JobConfig {
  std::string type = "A";
  int rank = 1;
  std::string word;  // comma-separated, 1-based
  std::string command;
  std::optional<int> max_degree;
  std::uint64_t seed = 20240601;
  std::string out;    // report file; empty: the caller's stream
  std::string graph;  // DOT file for the sheaf command
  std::string scope = "full";  // selftest: full or quick
};

inline int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size() || v < INT32_MIN || v > INT32_MAX) throw std::invalid_argument(value);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + value + "'");
  }
}

inline void apply_setting(JobConfig& c, const std::string& key, const std::string& value) {
  if (key == "type") {
    c.type = value;
  } else if (key == "rank") {
    c.rank = parse_int(key, value);
  } else if (key == "word") {
    c.word = value;
  } else if (key == "cmd" || key == "command") {
    c.command = value;
  } else if (key == "max-degree") {
    c.max_degree = parse_int(key, value);
  } else if (key == "seed") {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(value, &used);
      if (used != value.size() || value.front() == '-') throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ConfigError("seed: not a non-negative integer: '" + value + "'");
    }
  } else if (key == "out") {
    c.out = value;
  } else if (key == "graph") {
    c.graph = value;
  } else if (key == "scope") {
    c.scope = value;
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

// Flat key=value lines; '#' starts a comment.
inline JobConfig parse_config(const std::string& text, JobConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

namespace detail {

struct Job {
  const JobConfig& config;
  RootSystem rs;
  Word word;
  std::ostream& out;
};

inline bool sheaf_level(const std::string& cmd) {
  return cmd == "gkm-check" || cmd == "fibre-basis" || cmd == "sheaf" || cmd == "purity" || cmd == "decompose";
}

inline RootSystem make_root_system(const JobConfig& c) {
  if (c.type.size() != 1) throw ConfigError("type: expected a single Cartan letter, got '" + c.type + "'");
  if (c.rank < 1) throw ConfigError("rank: must be positive");
  return RootSystem::build(c.type[0], c.rank);
}

inline std::string header(const Job& j) { return "word (" + word_to_string(j.word) + ") in " + j.rs.name() + ", r = " + std::to_string(j.word.size()); }

inline std::string graded(const std::map<int, int>& m) {
  std::string s;
  for (const auto& [d, c] : m) s += (s.empty() ? "" : " + ") + std::to_string(c) + "q^" + std::to_string(d);
  return s.empty() ? "0" : s;
}

inline std::string values_to_string(const std::vector<Polynomial>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + v[i].to_string();
  return s + "]";
}

template <class M>
void print_matrix(std::ostream& os, const std::string& name, const M& m, const std::vector<Gallery>& order) {
  os << name << " (" << m.rows() << "x" << m.cols() << ", rows and columns in lex order)\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "  " << order[i].to_string() << ":";
    for (std::size_t j = 0; j < m.cols(); ++j) os << "  " << m(i, j).to_string();
    os << "\n";
  }
}

inline int galleries(Job& j) {
  const GallerySet set(j.rs, j.word, kMaxEnumerationLength);
  j.out << header(j) << "\n" << set.size() << " galleries\n";
  j.out << std::left << std::setw(std::max<int>(8, static_cast<int>(j.word.size()) + 2)) << "gallery" << std::setw(16) << "J" << std::setw(16) << "D" << "end\n";
  for (Gallery g : set.lex_sorted()) {
    const auto& st = set.stats(g);
    j.out << std::setw(std::max<int>(8, static_cast<int>(j.word.size()) + 2)) << g.to_string() << std::setw(16) << positions_to_string(st.J)
          << std::setw(16) << positions_to_string(st.D) << j.rs.element_name(st.endpoint) << "\n";
  }
  return kExitOk;
}

inline int stats(Job& j) {
  const GallerySet set(j.rs, j.word, kMaxEnumerationLength);
  j.out << header(j) << "\n";
  j.out << "galleries: " << set.size() << " (2^r = " << (std::size_t{1} << j.word.size()) << ")\n";
  j.out << "image: " << set.endpoints().size() << " elements\n";
  for (WeylElement x : set.endpoints()) {
    std::map<int, int> d;
    for (Gallery g : set.fibre(x)) ++d[set.stats(g).num_D()];
    j.out << "  " << std::left << std::setw(12) << j.rs.element_name(x) << " length " << j.rs.length(x) << ", |fibre| = " << set.fibre(x).size()
          << ", sum q^#D = " << graded(d) << "\n";
  }
  const auto c = check_counting(j.rs, j.word);
  j.out << "counting checks (#J - #D = l(pi), alternation, J-bijection): " << (c.ok ? "PASS" : "FAIL: " + c.failure) << "\n";
  return c.ok ? kExitOk : kExitFailure;
}

inline int sl2(Job& j) {
  if (j.rs.name() != "A1") throw ConfigError("sl2: requires type A rank 1");
  const int r = static_cast<int>(j.word.size());
  if (r > kMaxSL2Report) throw ConfigError("sl2: r = " + std::to_string(r) + " exceeds the report envelope " + std::to_string(kMaxSL2Report));
  const SL2 s(r);
  j.out << "SL2, r = " << r << ", variable a1 = alpha\n";
  print_matrix(j.out, "E", s.E(), s.order());
  print_matrix(j.out, "H", s.H(), s.order());
  print_matrix(j.out, "H*", s.Hstar(), s.order());
  Report rep = sl2_matrix_suite(r);
  rep.merge(sl2_fibre_suite(r));
  j.out << "matrix identities: " << (rep.ok ? "PASS" : "FAIL") << "\n";
  for (const auto& f : rep.failures) j.out << "  " << f << "\n";
  return rep.ok ? kExitOk : kExitFailure;
}

inline int gkm_check(Job& j) {
  const GallerySet set(j.rs, j.word);
  const int top = j.config.max_degree.value_or(2);
  if (top < 0) throw ConfigError("max-degree: must be non-negative");
  Rng rng(j.config.seed);
  j.out << header(j) << "\nseed: " << j.config.seed << ", sample degrees 0.." << top << "\n";
  j.out << std::left << std::setw(12) << "x" << std::setw(6) << "root" << std::setw(10) << "classes" << std::setw(6) << "rank" << "samples\n";
  bool ok = true;
  std::vector<std::string> failures;
  for (WeylElement x : set.endpoints()) {
    const std::size_t slots = set.fibre(x).size();
    for (int k = 0; k < j.rs.num_positive_roots(); ++k) {
      const auto b = bxalpha_basis(set, x, k);
      const auto gs = b.generator_set(j.rs.rank(), slots);
      int agree = 0, total = 0;
      for (int d = 0; d <= top; ++d)
        for (int t = 0; t < 2; ++t) {
          auto f = random_combination(rng, gs, slots, d);
          const auto in = bxalpha_member(set, x, k, f);
          perturb(rng, f, j.rs.rank(), d);
          const auto maybe = bxalpha_member(set, x, k, f);
          total += 2;
          agree += (in.agree() && in.member()) + maybe.agree();
          if (!in.member() || !in.agree() || !maybe.agree())
            failures.push_back("B_x^alpha criteria at x = " + j.rs.element_name(x) + ", root " + std::to_string(k) + ", degree " + std::to_string(d));
        }
      ok = ok && agree == total;
      j.out << std::setw(12) << j.rs.element_name(x) << std::setw(6) << k << std::setw(10) << b.classes.size() << std::setw(6) << b.rank() << agree << "/"
            << total << " agree\n";
    }
  }
  // the class of a fixed point: its full Euler class there, zero elsewhere
  const auto primary = htbs1_congruences(set), dual = htbs1_dual_congruences(set);
  for (Gallery g : set.all()) {
    PointwiseFunction f(set.size(), Polynomial(j.rs.rank()));
    f[g.bits] = diag_euler(set, g).full;
    std::string which;
    const bool in = satisfies(primary, f, &which), in_dual = satisfies(dual, f);
    if (!in || !in_dual) {
      ok = false;
      failures.push_back("point class at " + g.to_string() + ": " + (in ? "HTBS1(3) fails" : which + " fails"));
    }
  }
  j.out << "point classes satisfy HTBS1(2) and HTBS1(3): " << set.size() << " checked\n";
  j.out << "gkm-check: " << (ok ? "PASS" : "FAIL") << "\n";
  for (const auto& f : failures) j.out << "  " << f << "\n";
  return ok ? kExitOk : kExitFailure;
}

inline int fibre_basis(Job& j) {
  const FibreTower tower(j.rs, j.word);
  const GallerySet& set = tower.galleries();
  j.out << header(j) << "\n";
  for (WeylElement x : set.endpoints()) {
    const FibreBasis& b = tower.basis(x);
    j.out << "x = " << j.rs.element_name(x) << ": rank " << b.rank() << ", fibre order";
    for (Gallery g : b.fibre) j.out << " " << g.to_string();
    j.out << "\n";
    for (const auto& e : b.elements) j.out << "  " << e.gallery.to_string() << "  degree " << e.degree << "  " << values_to_string(e.values) << "\n";
  }
  return kExitOk;
}

inline MomentSheaf word_sheaf(Job& j, const FibreTower& tower) {
  MomentSheaf s = build_sheaf(tower);
  if (j.config.max_degree) {
    if (*j.config.max_degree < 0) throw ConfigError("max-degree: must be non-negative");
    s.bound = *j.config.max_degree;
  }
  return s;
}

inline void write_dot(const MomentSheaf& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("graph: cannot open '" + path + "' for writing");
  const RootSystem& rs = *s.rs;
  f << "digraph bruhat {\n  rankdir=BT;\n  label=\"" << s.label << " in " << rs.name() << "\";\n";
  for (std::size_t i = 0; i < rs.order(); ++i) {
    const WeylElement x = rs.element(i);
    f << "  v" << i << " [label=\"" << rs.element_name(x) << "\\nrank " << s.stalk_rank(x.index) << "\"" << (s.stalk_rank(x.index) ? "" : ", style=dashed") << "];\n";
  }
  for (const auto& e : rs.bruhat_graph().edges)
    f << "  v" << e.to << " -> v" << e.from << " [label=\"" << root_polynomial(rs, e.root).to_string() << "\"];\n";
  f << "}\n";
}

inline int sheaf(Job& j) {
  const FibreTower tower(j.rs, j.word);
  const MomentSheaf s = word_sheaf(j, tower);
  j.out << header(j) << "\nsupport:";
  for (WeylElement x : s.support()) j.out << " " << j.rs.element_name(x);
  j.out << "\nstalks:\n";
  for (WeylElement x : s.support()) j.out << "  " << std::left << std::setw(12) << j.rs.element_name(x) << " rank " << s.stalk_rank(x.index) << ", " << graded(s.graded_rank(x.index)) << "\n";
  j.out << "edges (upper -> lower, root):\n";
  for (const auto& e : s.edges)
    j.out << "  " << j.rs.element_name({e.upper}) << " -> " << j.rs.element_name({e.lower}) << ", " << root_polynomial(j.rs, e.alpha).to_string() << "\n";
  const auto g = global_sections(s, true);
  j.out << "global sections: rank " << g.generators.size() << ", " << graded(g.generators.counts_by_degree()) << "\n";
  j.out << "sections agree with HTBS1: " << (g.report.ok ? "PASS" : "FAIL") << "\n";
  for (const auto& f : g.report.failures) j.out << "  " << f << "\n";
  if (!j.config.graph.empty()) write_dot(s, j.config.graph);
  return g.report.ok ? kExitOk : kExitFailure;
}

inline int purity(Job& j) {
  const FibreTower tower(j.rs, j.word);
  const MomentSheaf s = word_sheaf(j, tower);
  const Report rep = purity_check(s);
  j.out << header(j) << "\ndegree bound: " << s.bound << "\n";
  for (const auto& n : rep.notes) j.out << "note: " << n << "\n";
  j.out << "purity (P1, P2, P3.a, P3.b): " << (rep.ok ? "PASS" : "FAIL") << "\n";
  for (const auto& f : rep.failures) j.out << "  " << f << "\n";
  if (!j.config.graph.empty()) write_dot(s, j.config.graph);
  return rep.ok ? kExitOk : kExitFailure;
}

inline int decomposition(Job& j) {
  const FibreTower tower(j.rs, j.word);
  const MomentSheaf s = word_sheaf(j, tower);
  const auto d = decompose(s);
  j.out << header(j) << "\n";
  if (!d.ok) {
    j.out << "decomposition: FAIL: " << d.failure << "\n";
    return kExitFailure;
  }
  j.out << "decomposition: " << decomposition_string(j.rs, d) << "\n";
  for (const auto& t : d.terms) j.out << "  B(" << sheaf_name(j.rs, t.x) << ") shift " << t.shift << " multiplicity " << t.multiplicity << "\n";
  j.out << "residual: zero\n";
  return kExitOk;
}

inline int selftest(const JobConfig& c, std::ostream& out) {
  if (c.scope != "full" && c.scope != "quick") throw ConfigError("scope: expected full or quick, got '" + c.scope + "'");
  AcceptanceSuite suite({c.scope == "quick", c.seed});
  out << "selftest, scope " << c.scope << ", seed " << c.seed << "\n";
  bool ok = true;
  suite.run([&](const CriterionResult& r) {
    out << format_result(r, false) << "\n";
    ok = ok && r.ok;
  });
  out << (ok ? "all criteria pass" : "some criteria fail") << "\n";
  return ok ? kExitOk : kExitFailure;
}

}  // namespace detail

// Runs one job; the report goes to `out`, diagnostics to `err`.
inline int run(const JobConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const auto& cmds = cli_commands();
    if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) throw ConfigError("unknown command '" + c.command + "'");
    if (c.command == "selftest") return detail::selftest(c, out);
    detail::Job job{c, detail::make_root_system(c), {}, out};
    job.word = parse_word(c.word, c.rank);
    validate_word(job.rs, job.word, detail::sheaf_level(c.command) ? kMaxSheafLength : kMaxEnumerationLength);
    if (c.command == "galleries") return detail::galleries(job);
    if (c.command == "stats") return detail::stats(job);
    if (c.command == "sl2") return detail::sl2(job);
    if (c.command == "gkm-check") return detail::gkm_check(job);
    if (c.command == "fibre-basis") return detail::fibre_basis(job);
    if (c.command == "sheaf") return detail::sheaf(job);
    if (c.command == "purity") return detail::purity(job);
    return detail::decomposition(job);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvariantViolation& e) {
    err << "property failure: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace gallerysheaf
