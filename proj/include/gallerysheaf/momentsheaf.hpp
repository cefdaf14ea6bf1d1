#pragma once

// Sheaves on the Bruhat graph: the sheaf of a Bott-Samelson word, global
// sections by the edge system and by the total-space congruences, purity,
// Braden-MacPherson sheaves and greedy rank decomposition.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fibres.hpp"
#include "gkm.hpp"
#include "gradedlinalg.hpp"
#include "rootsys.hpp"
#include "symalg.hpp"
#include "threads.hpp"

namespace gallerysheaf {

// An arrow upper -> lower = s_alpha upper with both stalks nonzero.  The edge
// module is the upper stalk mod alpha; the upper map is the projection.
struct SheafEdge {
  int upper = 0;
  int lower = 0;
  int alpha = 0;
  std::vector<std::vector<Polynomial>> lower_map;  // [j][i]: image of lower basis j, coordinate i
};

struct MomentSheaf {
  const RootSystem* rs = nullptr;
  std::string label;
  int bound = 0;                           // degree bound for degreewise work
  std::map<int, std::vector<int>> stalks;  // vertex -> generator degrees (nonzero stalks only)
  std::vector<SheafEdge> edges;
  const FibreTower* tower = nullptr;  // set for the sheaf of a word

  int nvars() const { return rs->rank(); }
  std::vector<WeylElement> support() const {
    std::vector<WeylElement> v;
    for (const auto& [x, d] : stalks) v.push_back({x});
    return v;
  }
  std::size_t stalk_rank(int x) const {
    auto it = stalks.find(x);
    return it == stalks.end() ? 0 : it->second.size();
  }
  std::map<int, int> graded_rank(int x) const {
    std::map<int, int> m;
    auto it = stalks.find(x);
    if (it != stalks.end())
      for (int d : it->second) ++m[d];
    return m;
  }
  std::size_t total_rank() const {
    std::size_t n = 0;
    for (const auto& [x, d] : stalks) n += d.size();
    return n;
  }
};

// The sheaf of a word: stalks F_x on pi(Gamma), lower maps rho_fold.
inline MomentSheaf build_sheaf(const FibreTower& tower) {
  const RootSystem& rs = tower.root_system();
  MomentSheaf s{&rs, "word (" + word_to_string(tower.word()) + ")", tower.length(), {}, {}, &tower};
  const GallerySet& set = tower.galleries();
  for (WeylElement x : set.endpoints()) s.stalks[x.index] = tower.basis(x).degrees();
  for (const auto& e : rs.bruhat_graph().edges) {
    if (!set.in_image({e.from}) || !set.in_image({e.to})) continue;
    s.edges.push_back({e.from, e.to, e.root, tower.fold_matrix({e.to}, e.root).columns});
  }
  return s;
}

// Congruences for sections over `vertices` (a full subgraph) that vanish on `zero`.
struct SectionSystem {
  std::vector<int> vertices;
  std::map<int, int> first_slot;
  std::vector<int> shifts;
  std::vector<Congruence> conds;

  std::vector<int> vertex_shifts(const MomentSheaf& s, int v) const { return s.stalks.at(v); }
};

inline SectionSystem section_system(const MomentSheaf& s, const std::set<int>& vertices, const std::set<int>& zero = {}) {
  SectionSystem sys;
  const int n = s.nvars();
  for (int v : vertices) {
    auto it = s.stalks.find(v);
    if (it == s.stalks.end()) continue;
    sys.vertices.push_back(v);
    sys.first_slot[v] = static_cast<int>(sys.shifts.size());
    sys.shifts.insert(sys.shifts.end(), it->second.begin(), it->second.end());
  }
  for (const auto& e : s.edges) {
    const bool u_in = sys.first_slot.count(e.upper) != 0, l_in = sys.first_slot.count(e.lower) != 0;
    const bool u_ok = u_in || zero.count(e.upper), l_ok = l_in || zero.count(e.lower);
    if (!(u_ok && l_ok && (u_in || l_in))) continue;
    const LinearForm a = root_form(*s.rs, e.alpha);
    for (std::size_t i = 0; i < s.stalk_rank(e.upper); ++i) {
      Congruence c{{}, a, 1, "edge " + s.rs->element_name({e.upper}) + " -> " + s.rs->element_name({e.lower})};
      if (u_in) c.terms.push_back({sys.first_slot[e.upper] + static_cast<int>(i), Polynomial::constant(n, 1)});
      if (l_in)
        for (std::size_t j = 0; j < e.lower_map.size(); ++j)
          if (!e.lower_map[j][i].is_zero()) c.terms.push_back({sys.first_slot[e.lower] + static_cast<int>(j), -e.lower_map[j][i]});
      if (!c.terms.empty()) sys.conds.push_back(std::move(c));
    }
  }
  return sys;
}

inline std::set<int> all_vertices(const MomentSheaf& s) {
  std::set<int> v;
  for (const auto& [x, d] : s.stalks) v.insert(x);
  return v;
}

// Restriction of section-slice vectors to one vertex, in that stalk's slice coordinates.
inline Echelon project_to_vertex(const MomentSheaf& s, const SectionSystem& sys, const SliceBasis& slice, int v) {
  const auto& vs = s.stalks.at(v);
  const SliceIndex target(s.nvars(), vs, slice.degree());
  Echelon ech(target.size());
  const int first = sys.first_slot.at(v);
  for (const auto& vec : slice.vectors) {
    const auto f = slice.index.decode(vec);
    std::vector<Polynomial> part(f.begin() + first, f.begin() + first + static_cast<long>(vs.size()));
    ech.insert(target.encode(part));
  }
  return ech;
}

// Values on Gamma (indexed by gallery bits) of a section given by stalk coordinates.
inline PointwiseFunction section_to_galleries(const MomentSheaf& s, const SectionSystem& sys, const std::vector<Polynomial>& coords) {
  const GallerySet& set = s.tower->galleries();
  PointwiseFunction out(set.size(), Polynomial(s.nvars()));
  for (int v : sys.vertices) {
    const FibreBasis& b = s.tower->basis({v});
    const int first = sys.first_slot.at(v);
    std::vector<Polynomial> c(coords.begin() + first, coords.begin() + first + static_cast<long>(b.rank()));
    const auto f = b.combine(c);
    for (std::size_t i = 0; i < b.fibre.size(); ++i) out[b.fibre[i].bits] = f[i];
  }
  return out;
}

struct GlobalSections {
  SectionSystem system;
  GeneratorSet generators;  // in stalk coordinates
  Report report;
};

inline long long binomial(int n, int k) {
  long long c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Sections solving the edge system; for the sheaf of a word, every generator
// is checked against the total-space congruences and both solution spaces are
// compared slice by slice up to the bound.
inline GlobalSections global_sections(const MomentSheaf& s, bool cross_check = true) {
  GlobalSections out;
  out.system = section_system(s, all_vertices(s));
  const int n = s.nvars();
  const auto& sys = out.system;
  out.generators = minimal_generators(
      n, sys.shifts, [&](int d) { return solve_slice(n, sys.shifts, sys.conds, d); }, s.bound);
  if (!cross_check || !s.tower) return out;
  const GallerySet& set = s.tower->galleries();
  const int r = set.length();
  Report& rep = out.report;
  rep.require(out.generators.size() == set.size(), s.label + ": global sections have rank " + std::to_string(out.generators.size()) +
                                                       ", expected " + std::to_string(set.size()));
  std::map<int, int> binom;
  for (int d = 0; d <= r; ++d) binom[d] = static_cast<int>(binomial(r, d));
  rep.require(out.generators.counts_by_degree() == binom, s.label + ": graded rank differs from (1+q)^" + std::to_string(r));
  for (const auto& g : out.generators.generators) {
    const auto v = htbs1_member(set, section_to_galleries(s, sys, g.values));
    rep.require(v.member() && v.agree(), s.label + ": generator of degree " + std::to_string(g.degree) + " fails " + v.failed);
  }
  const auto htbs1 = htbs1_congruences(set);
  const std::vector<int> flat(set.size(), 0);
  const auto slices = parallel_map<std::string>(static_cast<std::size_t>(r + 1), [&](std::size_t d) -> std::string {
    const int deg = static_cast<int>(d);
    const SliceBasis a = solve_slice(n, sys.shifts, sys.conds, deg);
    const SliceBasis b = solve_slice(n, flat, htbs1, deg);
    if (a.dimension() != b.dimension())
      return "degree " + std::to_string(deg) + ": edge system dimension " + std::to_string(a.dimension()) + " vs congruences " +
             std::to_string(b.dimension());
    Echelon ech(b.index.size());
    for (const auto& v : b.vectors) ech.insert(v);
    for (const auto& v : a.vectors)
      if (!ech.contains(b.index.encode(section_to_galleries(s, sys, a.index.decode(v)))))
        return "degree " + std::to_string(deg) + ": an edge-system section violates HTBS1(2)";
    return {};
  });
  for (const auto& msg : slices)
    if (!msg.empty()) rep.fail(s.label + ": " + msg);
  return out;
}

// P1 and P2 structurally; P3.b as surjectivity of global sections onto each
// stalk; P3.a as condition (4) of the flabbiness lemma: sections at x killed
// by every upward edge extend by zero off {y <= x} to global sections.
inline Report purity_check(const MomentSheaf& s) {
  Report rep;
  const RootSystem& rs = *s.rs;
  const int n = s.nvars();
  for (const auto& e : s.edges) {
    const LinearForm a = root_form(rs, e.alpha);
    bool canonical = e.lower_map.size() == s.stalk_rank(e.lower);
    for (const auto& col : e.lower_map) {
      canonical = canonical && col.size() == s.stalk_rank(e.upper);
      for (const auto& p : col) canonical = canonical && reduce_mod_linear(p, a) == p;
    }
    rep.require(canonical, s.label + ": P2 edge map " + rs.element_name({e.upper}) + " -> " + rs.element_name({e.lower}) +
                               " is not a canonical map into the upper stalk mod alpha");
  }
  const std::set<int> everything = all_vertices(s);
  const SectionSystem global = section_system(s, everything);
  struct Job {
    int v, d;
  };
  std::vector<Job> jobs;
  for (int v : everything)
    for (int d = 0; d <= s.bound; ++d) jobs.push_back({v, d});
  const auto results = parallel_map<std::vector<std::string>>(jobs.size(), [&](std::size_t k) {
    std::vector<std::string> fails;
    const int v = jobs[k].v, d = jobs[k].d;
    const std::string at = s.label + " at " + rs.element_name({v}) + ", degree " + std::to_string(d);
    const auto& vs = s.stalks.at(v);
    // P3.b
    const SliceBasis all = solve_slice(n, global.shifts, global.conds, d);
    const long long want = free_slice_dimension(n, vs, d);
    if (project_to_vertex(s, global, all, v).rank() != want) fails.push_back("P3.b fails " + at + ": global sections do not surject onto the stalk");
    // P3.a
    std::set<int> below, above, upward;
    for (int y : everything) (rs.bruhat_leq({y}, {v}) ? below : above).insert(y);
    for (const auto& e : s.edges)
      if (e.lower == v) upward.insert(e.upper);
    const SectionSystem local = section_system(s, {v}, upward);
    const SliceBasis kernel = solve_slice(n, local.shifts, local.conds, d);
    const SectionSystem sup = section_system(s, below, above);
    const SliceBasis ext = solve_slice(n, sup.shifts, sup.conds, d);
    const Echelon image = project_to_vertex(s, sup, ext, v);
    bool contained = true;
    for (const auto& vec : kernel.vectors) contained = contained && image.contains(vec);
    if (!contained) fails.push_back("P3.a fails " + at + ": a section killed by the upward edges does not extend");
    return fails;
  });
  for (const auto& r : results)
    for (const auto& f : r) rep.fail(f);
  rep.notes.push_back(s.label + ": P1 stalks are free by construction (" + std::to_string(s.total_rank()) + " generators)");
  return rep;
}

// The Braden-MacPherson sheaf B(x): rank one in degree 0 at x, each lower
// stalk a minimal free cover of the image of the sections above it in the
// edge modules of its upward arrows.
inline MomentSheaf bm_sheaf(const RootSystem& rs, WeylElement x, int max_degree) {
  MomentSheaf s{&rs, "B(" + rs.element_name(x) + ")", max_degree, {}, {}, nullptr};
  s.stalks[x.index] = {0};
  const int n = rs.rank();
  const auto& graph = rs.bruhat_graph();
  for (int y = x.index - 1; y >= 0; --y) {
    if (!rs.bruhat_lt({y}, x)) continue;
    std::vector<int> ups;  // arrows into y from the current support
    for (int e : graph.in_edges[static_cast<std::size_t>(y)])
      if (s.stalks.count(graph.edges[static_cast<std::size_t>(e)].from)) ups.push_back(e);
    if (ups.empty()) continue;
    std::set<int> above;
    for (const auto& [z, d] : s.stalks)
      if (rs.bruhat_lt({y}, {z})) above.insert(z);
    const SectionSystem sys = section_system(s, above);
    std::vector<int> image_shifts;
    for (int e : ups) {
      const auto& up = s.stalks.at(graph.edges[static_cast<std::size_t>(e)].from);
      image_shifts.insert(image_shifts.end(), up.begin(), up.end());
    }
    // image of a section: its upper-stalk components reduced mod each arrow root
    auto image_of = [&](const std::vector<Polynomial>& f) {
      std::vector<Polynomial> img;
      for (int e : ups) {
        const auto& edge = graph.edges[static_cast<std::size_t>(e)];
        const LinearForm a = root_form(rs, edge.root);
        const int first = sys.first_slot.at(edge.from);
        for (std::size_t i = 0; i < s.stalks.at(edge.from).size(); ++i) img.push_back(reduce_mod_linear(f[static_cast<std::size_t>(first) + i], a));
      }
      return img;
    };
    auto reduce_image = [&](std::vector<Polynomial> img) {
      std::size_t k = 0;
      for (int e : ups) {
        const auto& edge = graph.edges[static_cast<std::size_t>(e)];
        const LinearForm a = root_form(rs, edge.root);
        for (std::size_t i = 0; i < s.stalks.at(edge.from).size(); ++i, ++k) img[k] = reduce_mod_linear(img[k], a);
      }
      return img;
    };
    std::vector<int> degrees;
    std::vector<std::vector<Polynomial>> gens;
    std::vector<std::vector<Polynomial>> previous;
    for (int d = 0; d <= max_degree + 1; ++d) {
      const SliceBasis slice = solve_slice(n, sys.shifts, sys.conds, d);
      const SliceIndex idx(n, image_shifts, d);
      Echelon ech(idx.size());
      for (const auto& p : previous)
        for (int v = 0; v < n; ++v) ech.insert(idx.encode(reduce_image(times_polynomial(p, Polynomial::variable(n, v)))));
      std::vector<std::vector<Polynomial>> current;
      for (const auto& vec : slice.vectors) {
        auto img = image_of(slice.index.decode(vec));
        if (ech.insert(idx.encode(img))) {
          if (d > max_degree) throw InvariantViolation(s.label + ": stalk generator above the degree bound at " + rs.element_name({y}));
          degrees.push_back(d);
          gens.push_back(img);
        }
        current.push_back(std::move(img));
      }
      previous = std::move(current);
    }
    if (degrees.empty()) continue;
    s.stalks[y] = degrees;
    std::size_t k = 0;
    for (int e : ups) {
      const auto& edge = graph.edges[static_cast<std::size_t>(e)];
      SheafEdge se{edge.from, y, edge.root, {}};
      const std::size_t m = s.stalks.at(edge.from).size();
      for (const auto& g : gens) se.lower_map.emplace_back(g.begin() + static_cast<long>(k), g.begin() + static_cast<long>(k + m));
      k += m;
      s.edges.push_back(std::move(se));
    }
  }
  return s;
}

struct DecompositionTerm {
  WeylElement x;
  int shift = 0;
  int multiplicity = 0;
};

struct DecompositionReport {
  std::vector<DecompositionTerm> terms;
  std::map<int, std::map<int, int>> residual;  // vertex -> degree -> rank, nonzero entries only
  bool ok = false;
  std::string failure;
};

inline std::string sheaf_name(const RootSystem& rs, WeylElement x) {
  return x == rs.longest_element() && rs.length(x) > 1 ? "w0" : rs.element_name(x);
}

inline std::string decomposition_string(const RootSystem& rs, const DecompositionReport& r) {
  std::string s;
  for (const auto& t : r.terms) {
    if (!s.empty()) s += " ⊕ ";
    s += "B(" + sheaf_name(rs, t.x) + ")";
    if (t.shift) s += "⟨" + std::to_string(t.shift) + "⟩";
    if (t.multiplicity > 1) s += "^" + std::to_string(t.multiplicity);
  }
  return s;
}

using BMCache = std::map<int, MomentSheaf>;  // B(x) by element index, for one root system

// Greedy top-down subtraction of shifted B(x) graded stalk ranks.
inline DecompositionReport decompose(const MomentSheaf& s, BMCache* shared = nullptr) {
  const RootSystem& rs = *s.rs;
  DecompositionReport rep;
  std::map<int, std::map<int, int>> res;
  for (const auto& [x, degs] : s.stalks)
    for (int d : degs) ++res[x][d];
  BMCache local;
  BMCache& cache = shared ? *shared : local;
  auto prune = [&] {
    for (auto it = res.begin(); it != res.end();) {
      for (auto jt = it->second.begin(); jt != it->second.end();) jt = jt->second == 0 ? it->second.erase(jt) : std::next(jt);
      it = it->second.empty() ? res.erase(it) : std::next(it);
    }
  };
  prune();
  while (!res.empty()) {
    int top = res.begin()->first;
    for (const auto& [x, m] : res)
      if (rs.length({x}) > rs.length({top})) top = x;
    const int shift = res[top].begin()->first;
    const int mult = res[top].begin()->second;
    if (mult < 0) {
      rep.failure = "negative residual at " + rs.element_name({top});
      rep.residual = res;
      return rep;
    }
    auto it = cache.find(top);
    if (it == cache.end()) it = cache.emplace(top, bm_sheaf(rs, {top}, rs.length({top}))).first;
    for (const auto& [y, degs] : it->second.stalks)
      for (int d : degs) res[y][d + shift] -= mult;
    rep.terms.push_back({{top}, shift, mult});
    for (const auto& [y, m] : res)
      for (const auto& [d, c] : m)
        if (c < 0) {
          rep.failure = "negative residual at " + rs.element_name({y}) + " in degree " + std::to_string(d) + " after B(" +
                        rs.element_name({top}) + ")<" + std::to_string(shift) + ">";
          rep.residual = res;
          return rep;
        }
    prune();
  }
  // accounting: the terms reproduce the stalk ranks exactly
  std::map<int, std::map<int, int>> total;
  for (const auto& t : rep.terms)
    for (const auto& [y, degs] : cache.at(t.x.index).stalks)
      for (int d : degs) total[y][d + t.shift] += t.multiplicity;
  std::map<int, std::map<int, int>> expect;
  for (const auto& [x, degs] : s.stalks)
    for (int d : degs) ++expect[x][d];
  rep.ok = total == expect;
  if (!rep.ok) rep.failure = "terms do not reproduce the stalk ranks";
  return rep;
}

}  // namespace gallerysheaf
