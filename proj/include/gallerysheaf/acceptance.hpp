#pragma once

// The acceptance suite: one verdict per criterion, shared by the acceptance
// binary and the CLI selftest.  Quick mode shrinks the word lists only.

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "gallerysheaf/momentsheaf.hpp"
#include "gallerysheaf/sampling.hpp"
#include "gallerysheaf/sl2kit.hpp"

namespace gallerysheaf {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool ok = false;
  std::string detail;
  double seconds = 0;
  double budget = 0;  // 0: no runtime bound
};

struct AcceptanceOptions {
  bool quick = false;
  std::uint64_t seed = 20240601;
};

inline std::string format_result(const CriterionResult& r, bool with_time) {
  std::ostringstream os;
  os << (r.ok ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.title << "): " << r.detail;
  if (with_time) {
    os.setf(std::ios::fixed);
    os.precision(2);
    os << " [" << r.seconds << " s";
    if (r.budget > 0) os << " of " << r.budget << " s";
    os << "]";
  }
  return os.str();
}

// All words over `rank` letters of length lo..hi, shortest first, then lexicographic.
inline std::vector<Word> all_words(int rank, int lo, int hi) {
  std::vector<Word> out;
  std::vector<Word> level{{}};
  for (int len = 0; len <= hi; ++len) {
    if (len >= lo) out.insert(out.end(), level.begin(), level.end());
    std::vector<Word> next;
    for (const Word& w : level)
      for (int s = 0; s < rank; ++s) {
        Word v = w;
        v.push_back(s);
        next.push_back(std::move(v));
      }
    level = std::move(next);
  }
  return out;
}

class AcceptanceSuite {
 public:
  explicit AcceptanceSuite(AcceptanceOptions opt) : opt_(opt) {
    for (char t : {'A', 'B', 'G'}) systems_.emplace(std::string(1, t) + "2", RootSystem::build(t, 2));
    systems_.emplace("A1", RootSystem::build('A', 1));
    systems_.emplace("A3", RootSystem::build('A', 3));
  }

  static constexpr int kCriteria = 8;

  std::vector<CriterionResult> run(const std::function<void(const CriterionResult&)>& progress = {}) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriteria; ++id) {
      out.push_back(run_one(id));
      if (progress) progress(out.back());
    }
    return out;
  }

  CriterionResult run_one(int id) {
    static const char* titles[] = {"", "gallery combinatorics", "SL2 matrix suite", "fibre bases", "rho machinery",
                                   "global sections", "purity", "decomposition", "E_y symmetry"};
    static const double budgets[] = {0, 120, 60, 300, 0, 600, 0, 0, 0};
    if (id < 1 || id > kCriteria) throw ConfigError("acceptance: no criterion " + std::to_string(id));
    CriterionResult r{id, titles[id], false, "", 0, budgets[id]};
    const auto start = std::chrono::steady_clock::now();
    Report rep;
    try {
      switch (id) {
        case 1: r.detail = gallery_combinatorics(rep); break;
        case 2: r.detail = sl2_suite(rep); break;
        case 3: r.detail = fibre_bases(rep); break;
        case 4: r.detail = rho_machinery(rep); break;
        case 5: r.detail = sections(rep); break;
        case 6: r.detail = purity(rep); break;
        case 7: r.detail = decomposition(rep); break;
        case 8: r.detail = symmetry(rep); break;
      }
    } catch (const std::exception& e) {
      rep.fail(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.ok = rep.ok;
    if (!rep.ok) r.detail = rep.first_failure() + (rep.failures.size() > 1 ? " (+" + std::to_string(rep.failures.size() - 1) + " more)" : "");
    if (r.budget > 0 && r.seconds > r.budget) {
      r.ok = false;
      r.detail += "; runtime " + std::to_string(r.seconds) + " s exceeds the budget";
    }
    return r;
  }

 private:
  struct WordSheaf {
    const RootSystem* rs;
    Word word;
    std::unique_ptr<FibreTower> tower;
    MomentSheaf sheaf;
  };

  const RootSystem& sys(const std::string& name) const { return systems_.at(name); }

  std::string gallery_combinatorics(Report& rep) {
    std::size_t words = 0, galleries = 0;
    for (const auto& [name, len] : std::vector<std::pair<std::string, int>>{{"A1", 12}, {"A2", 10}, {"A3", 10}, {"B2", 10}, {"G2", 10}}) {
      const int l = opt_.quick ? std::min(len, 6) : len;
      const auto c = check_counting_all_words(sys(name), l);
      rep.require(c.ok, name + ": " + c.failure);
      words += c.words;
      galleries += c.galleries;
    }
    return std::to_string(words) + " words, " + std::to_string(galleries) + " galleries";
  }

  std::string sl2_suite(Report& rep) {
    const int top = opt_.quick ? 5 : 8;
    for (int r = 0; r <= top; ++r) {
      rep.merge(sl2_matrix_suite(r));
      rep.merge(sl2_fibre_suite(r));
    }
    return "r = 0.." + std::to_string(top) + ", exact";
  }

  // A2 (1,2,1,2) and its truncations, B2 (1,2,1,2), G2 (1,2,1).
  const std::vector<std::unique_ptr<FibreTower>>& fibre_words() {
    if (fibre_words_.empty()) {
      const Word full{0, 1, 0, 1};
      for (int len = 1; len <= 4; ++len) fibre_words_.push_back(std::make_unique<FibreTower>(sys("A2"), Word(full.begin(), full.begin() + len)));
      fibre_words_.push_back(std::make_unique<FibreTower>(sys("B2"), Word{0, 1, 0, 1}));
      fibre_words_.push_back(std::make_unique<FibreTower>(sys("G2"), Word{0, 1, 0}));
    }
    return fibre_words_;
  }

  static std::string where(const FibreTower& tw, WeylElement x) {
    return tw.root_system().name() + " (" + word_to_string(tw.word()) + ") at " + tw.root_system().element_name(x);
  }

  std::string fibre_bases(Report& rep) {
    std::size_t bases = 0, checks = 0;
    for (const auto& tw : fibre_words()) {
      const RootSystem& rs = tw->root_system();
      const GallerySet& set = tw->galleries();
      std::size_t total = 0;
      for (WeylElement x : set.endpoints()) {
        const FibreBasis& b = tw->basis(x);
        ++bases;
        total += b.rank();
        std::map<int, int> want;
        for (Gallery g : set.fibre(x)) ++want[set.stats(g).num_D()];
        std::map<int, int> got;
        for (int d : b.degrees()) ++got[d];
        rep.require(got == want, "graded rank of F_x differs from the #D count, " + where(*tw, x));
        const FibreIndex idx(set, x);
        for (const auto& e : b.elements) {
          const int p = idx.position(e.gallery);
          for (int i = 0; i < p; ++i)
            rep.require(e.values[static_cast<std::size_t>(i)].is_zero(), "support triangularity, " + where(*tw, x) + ", element " + e.gallery.to_string());
          for (int k = 0; k < rs.num_positive_roots(); ++k) {
            const auto v = bxalpha_member(set, x, k, e.values);
            ++checks;
            rep.require(v.agree(), "membership criteria disagree, " + where(*tw, x) + ", element " + e.gallery.to_string() + ", root " + std::to_string(k));
            rep.require(v.member(), "basis element outside B_x^alpha, " + where(*tw, x) + ", element " + e.gallery.to_string() + ", root " + std::to_string(k));
          }
        }
      }
      rep.require(total == set.size(), "sum of ranks is not 2^r for " + rs.name() + " (" + word_to_string(tw->word()) + ")");
    }
    return std::to_string(bases) + " fibre bases, " + std::to_string(checks) + " triple membership checks";
  }

  std::string rho_machinery(Report& rep) {
    Rng rng(opt_.seed);
    std::size_t folds = 0, samples = 0, kernels = 0;
    for (const auto& tw : fibre_words()) {
      const RootSystem& rs = tw->root_system();
      const GallerySet& set = tw->galleries();
      for (WeylElement x : set.endpoints()) {
        const FibreBasis& b = tw->basis(x);
        const auto gs = b.generator_set();
        for (int alpha : tw->upward_roots(x)) {
          tw->fold_matrix(x, alpha);  // every column is solved twice with reversed unknown order
          ++folds;
          const LinearForm a = root_form(rs, alpha);
          for (int t = 0; t < 3; ++t) {
            const int d = static_cast<int>(rng() % 3);
            const auto f = random_combination(rng, gs, b.fibre.size(), d);
            const auto g = random_combination(rng, gs, b.fibre.size(), d);
            const Polynomial p = random_homogeneous(rng, rs.rank(), 1, 2);
            const RhoClass cf = tw->rho_fold(x, f, alpha), cg = tw->rho_fold(x, g, alpha);
            PointwiseFunction sum, scaled;
            for (std::size_t i = 0; i < f.size(); ++i) {
              sum.push_back(f[i] + g[i]);
              scaled.push_back(f[i] * p);
            }
            RhoClass want_sum = cf, want_scaled = cf;
            for (std::size_t i = 0; i < cf.coords.size(); ++i) {
              want_sum.coords[i] = reduce_mod_linear(cf.coords[i] + cg.coords[i], a);
              want_scaled.coords[i] = reduce_mod_linear(cf.coords[i] * p, a);
            }
            rep.require(tw->rho_fold(x, sum, alpha) == want_sum, "rho_fold is not additive, " + where(*tw, x));
            rep.require(tw->rho_fold(x, scaled, alpha) == want_scaled, "rho_fold is not linear, " + where(*tw, x));
            ++samples;
          }
        }
        const KernelModule up = fibre_dual_basis(*tw, x);
        rep.require(up.coordinates.counts_by_degree() == dual_degree_prediction(set, x),
                    "upward kernel degrees differ from the dual diagonal, " + where(*tw, x));
        const KernelModule down = downward_kernel(*tw, x);
        std::map<int, int> want;
        for (int d : b.degrees()) ++want[d + rs.length(x)];
        rep.require(down.coordinates.counts_by_degree() == want, "downward kernel degrees differ from d_x F_x, " + where(*tw, x));
        const Polynomial dx = d_weight(rs, x);
        for (const auto& g : down.functions.generators) {
          PointwiseFunction q;
          bool divisible = true;
          for (const auto& v : g.values) {
            auto r = exact_divide(v, dx);
            divisible = divisible && r.has_value();
            q.push_back(r ? *r : Polynomial(rs.rank()));
          }
          rep.require(divisible && tw->coordinates(tw->length(), x, q).has_value(), "downward kernel generator outside d_x F_x, " + where(*tw, x));
        }
        kernels += 2;
      }
    }
    return std::to_string(folds) + " fold maps, " + std::to_string(samples) + " linearity samples, " + std::to_string(kernels) + " kernels";
  }

  // A2/B2 words of length <= 6, A1 words of length <= 8.
  std::vector<WordSheaf>& word_sheaves() {
    if (sheaves_.empty()) {
      for (const auto& [name, len] : std::vector<std::pair<std::string, int>>{{"A1", 8}, {"A2", 6}, {"B2", 6}}) {
        const RootSystem& rs = sys(name);
        for (const Word& w : all_words(rs.rank(), 0, opt_.quick ? std::min(len, 3) : len)) {
          WordSheaf ws{&rs, w, std::make_unique<FibreTower>(rs, w), {}};
          ws.sheaf = build_sheaf(*ws.tower);
          sheaves_.push_back(std::move(ws));
        }
      }
    }
    return sheaves_;
  }

  std::string sections(Report& rep) {
    std::size_t gens = 0;
    for (const auto& ws : word_sheaves()) {
      const auto g = global_sections(ws.sheaf, true);
      rep.merge(g.report);
      gens += g.generators.size();
    }
    return std::to_string(sheaves_.size()) + " words, " + std::to_string(gens) + " section generators";
  }

  std::string purity(Report& rep) {
    for (const auto& ws : word_sheaves()) rep.merge(purity_check(ws.sheaf));
    return std::to_string(sheaves_.size()) + " sheaves pure";
  }

  std::string decomposition(Report& rep) {
    std::map<const RootSystem*, BMCache> caches;
    auto example = [&](const RootSystem& rs, const Word& w, const std::string& want) {
      FibreTower tw(rs, w);
      const auto d = decompose(build_sheaf(tw), &caches[&rs]);
      rep.require(d.ok, rs.name() + " (" + word_to_string(w) + "): " + d.failure);
      const std::string got = decomposition_string(rs, d);
      rep.require(got == want, rs.name() + " (" + word_to_string(w) + ") decomposes as " + got + ", expected " + want);
    };
    example(sys("A1"), {0, 0}, "B(s1) ⊕ B(s1)⟨1⟩");
    example(sys("A2"), {0, 1, 0}, "B(w0) ⊕ B(s1)⟨1⟩");
    std::size_t reduced = 0;
    for (const auto& ws : word_sheaves()) {
      const RootSystem& rs = *ws.rs;
      const std::string at = rs.name() + " (" + word_to_string(ws.word) + ")";
      const auto d = decompose(ws.sheaf, &caches[ws.rs]);
      rep.require(d.ok && d.residual.empty(), at + ": " + d.failure);
      const GallerySet& set = ws.tower->galleries();
      const WeylElement top = set.stats(set.gallery((std::uint32_t{1} << ws.word.size()) - 1)).endpoint;
      if (rs.length(top) != static_cast<int>(ws.word.size())) continue;
      ++reduced;
      int mult = 0;
      for (const auto& t : d.terms)
        if (t.x == top && t.shift == 0) mult += t.multiplicity;
      rep.require(mult == 1, at + ": B(" + rs.element_name(top) + ") occurs " + std::to_string(mult) + " times at shift 0");
    }
    return "examples match, " + std::to_string(sheaves_.size()) + " decompositions with zero residual, " + std::to_string(reduced) + " reduced words";
  }

  std::string symmetry(Report& rep) {
    std::size_t n = 0;
    for (const auto& tw : fibre_words())
      for (WeylElement y : tw->galleries().endpoints()) {
        const auto r = ey_symmetry_check(*tw, y);
        rep.require(r.symmetric, "E_y D_y^-1 tE_y is not symmetric, " + where(*tw, y));
        rep.require(r.polynomial, "E_y D_y^-1 tE_y has a non-polynomial entry, " + where(*tw, y));
        ++n;
      }
    return std::to_string(n) + " fibres";
  }

  AcceptanceOptions opt_;
  std::map<std::string, RootSystem> systems_;
  std::vector<std::unique_ptr<FibreTower>> fibre_words_;
  std::vector<WordSheaf> sheaves_;
};

}  // namespace gallerysheaf
