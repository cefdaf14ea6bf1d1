#pragma once

// Fibre modules F_x = intersection of the B_x^alpha: recursive bases along the
// prefixes of the word, the maps rho_x^alpha, the kernel modules and the
// symmetry of E_y D_y^{-1} tE_y.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "galleries.hpp"
#include "gkm.hpp"
#include "gradedlinalg.hpp"
#include "rootsys.hpp"
#include "symalg.hpp"

namespace gallerysheaf {

// Raised when a function is not in the span of a fibre basis.
class NotInSpan : public InvariantViolation {
 public:
  explicit NotInSpan(const std::string& what) : InvariantViolation(what) {}
};

struct FibreElement {
  Gallery gallery;
  int degree = 0;
  PointwiseFunction values;  // indexed by position in the fibre
};

struct FibreBasis {
  WeylElement x;
  int nvars = 0;
  std::vector<Gallery> fibre;  // Gamma_x in fibre order
  std::vector<FibreElement> elements;

  std::size_t rank() const { return elements.size(); }
  std::vector<int> degrees() const {
    std::vector<int> d;
    for (const auto& e : elements) d.push_back(e.degree);
    return d;
  }
  GeneratorSet generator_set() const {
    GeneratorSet gs{nvars, std::vector<int>(fibre.size(), 0), {}};
    for (const auto& e : elements) gs.generators.push_back({e.degree, e.values});
    return gs;
  }
  // Rows: galleries of the fibre; columns: basis elements.
  PolyMatrix value_matrix() const {
    PolyMatrix h(fibre.size(), elements.size(), Polynomial(nvars));
    for (std::size_t j = 0; j < elements.size(); ++j)
      for (std::size_t i = 0; i < fibre.size(); ++i) h(i, j) = elements[j].values[i];
    return h;
  }
  PointwiseFunction combine(const std::vector<Polynomial>& coords) const {
    PointwiseFunction f(fibre.size(), Polynomial(nvars));
    for (std::size_t j = 0; j < elements.size(); ++j)
      for (std::size_t i = 0; i < fibre.size(); ++i) f[i] += coords[j] * elements[j].values[i];
    return f;
  }
};

// Coordinates over a fibre basis, each reduced modulo alpha.  The module is
// F_target / alpha F_target; an empty coordinate list is the zero module.
struct RhoClass {
  int alpha = 0;
  WeylElement target;
  std::vector<Polynomial> coords;

  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Polynomial& p) { return p.is_zero(); });
  }
  friend bool operator==(const RhoClass& a, const RhoClass& b) {
    return a.alpha == b.alpha && a.target == b.target && a.coords == b.coords;
  }
};

// Columns: classes of the source basis elements in F_target / alpha F_target.
struct RhoMatrix {
  int alpha = 0;
  WeylElement source, target;
  bool target_in_image = false;
  std::vector<std::vector<Polynomial>> columns;  // columns[j][i]
};

inline std::vector<Polynomial> reduce_all(std::vector<Polynomial> v, const LinearForm& a) {
  for (auto& p : v) p = reduce_mod_linear(p, a);
  return v;
}

// The prefixes of a word with memoized fibre bases over each prefix.
class FibreTower {
 public:
  FibreTower(const RootSystem& rs, Word word, int max_length = kMaxSheafLength) : rs_(&rs), word_(std::move(word)) {
    validate_word(rs, word_, max_length);
    for (std::size_t k = 0; k <= word_.size(); ++k)
      levels_.push_back(std::make_unique<GallerySet>(rs, Word(word_.begin(), word_.begin() + static_cast<long>(k)), max_length));
  }
  FibreTower(const FibreTower&) = delete;
  FibreTower& operator=(const FibreTower&) = delete;

  const RootSystem& root_system() const { return *rs_; }
  const Word& word() const { return word_; }
  int length() const { return static_cast<int>(word_.size()); }
  const GallerySet& galleries(int k) const { return *levels_[static_cast<std::size_t>(k)]; }
  const GallerySet& galleries() const { return *levels_.back(); }

  // The root of the last wall of any gallery over x at level k >= 1.
  int recursion_root(int k, WeylElement x) const {
    return rs_->positive_part(rs_->act_root(x, rs_->simple_root(word_[static_cast<std::size_t>(k - 1)])));
  }

  const FibreBasis& basis(WeylElement x) const { return basis(length(), x); }
  const FibreBasis& basis(int k, WeylElement x) const {
    const auto key = std::make_pair(k, x.index);
    auto it = bases_.find(key);
    if (it != bases_.end()) return *it->second;
    auto b = std::make_unique<FibreBasis>(build(k, x));
    verify(k, *b);
    return *bases_.emplace(key, std::move(b)).first->second;
  }

  // A-coordinates of f in F_x, or nullopt.
  std::optional<std::vector<Polynomial>> coordinates(int k, WeylElement x, const PointwiseFunction& f, bool reverse = false) const {
    return membership(f, basis(k, x).generator_set(), reverse);
  }

  // The natural map F_x -> F_x / alpha F_x, for s_alpha x < x.
  RhoClass rho_down(WeylElement x, const PointwiseFunction& f, int alpha) const { return rho_down(length(), x, f, alpha); }
  RhoClass rho_down(int k, WeylElement x, const PointwiseFunction& f, int alpha) const {
    if (!rs_->bruhat_lt(reflect(alpha, x), x)) throw ConfigError("rho_down: s_alpha x is not below x");
    auto c = coordinates(k, x, f);
    if (!c) throw NotInSpan("rho_down: function is not in F_" + rs_->element_name(x));
    return {alpha, x, reduce_all(std::move(*c), root_form(*rs_, alpha))};
  }

  // Values on Gamma_{s_alpha L} of the folded function: fbar(delta) = f(fold(delta)),
  // zero at galleries without an alpha-wall.
  PointwiseFunction fold_function(int k, WeylElement lower, int alpha, const PointwiseFunction& f) const {
    const GallerySet& set = galleries(k);
    const FibreIndex src(set, lower);
    const WeylElement upper = reflect(alpha, lower);
    PointwiseFunction out;
    for (Gallery d : set.fibre(upper)) {
      if (set.stats(d).M[static_cast<std::size_t>(alpha)] == 0) {
        out.push_back(Polynomial(rs_->rank()));
        continue;
      }
      const int p = src.position(set.fold_end(d, alpha));
      if (p < 0) throw InvariantViolation("fold_function: folded gallery left the fibre");
      out.push_back(f[static_cast<std::size_t>(p)]);
    }
    return out;
  }

  // The map F_L -> F_U / alpha F_U (U = s_alpha L > L): fold, solve
  // fbar = g + alpha h with g in F_U and h in B_U^alpha, keep g mod alpha.
  // The class is recomputed with the reversed unknown order and must agree.
  RhoClass rho_fold(WeylElement lower, const PointwiseFunction& f, int alpha) const { return rho_fold(length(), lower, f, alpha); }
  RhoClass rho_fold(int k, WeylElement lower, const PointwiseFunction& f, int alpha) const {
    const WeylElement upper = reflect(alpha, lower);
    if (!rs_->bruhat_lt(lower, upper)) throw ConfigError("rho_fold: s_alpha x is not above x");
    const GallerySet& set = galleries(k);
    RhoClass out{alpha, upper, {}};
    if (!set.in_image(upper)) return out;
    const auto fbar = fold_function(k, lower, alpha, f);
    const LinearForm a = root_form(*rs_, alpha);
    const GeneratorSet gs = mod_alpha_generators(k, upper, alpha);
    const std::size_t n = basis(k, upper).rank();
    std::vector<Polynomial> first;
    for (bool reverse : {false, true}) {
      auto sol = membership(fbar, gs, reverse);
      if (!sol)
        throw InvariantViolation("rho_fold: folded function is not in F + alpha B at " + rs_->element_name(upper) + ", word " +
                                 word_to_string(galleries(k).word()));
      std::vector<Polynomial> c(sol->begin(), sol->begin() + static_cast<long>(n));
      c = reduce_all(std::move(c), a);
      if (!reverse) {
        first = std::move(c);
      } else if (c != first) {
        throw InvariantViolation("rho_fold: class depends on the lift at " + rs_->element_name(lower) + " -> " + rs_->element_name(upper));
      }
    }
    out.coords = std::move(first);
    return out;
  }

  // Classes of the basis of F_L under rho_fold, memoized.
  const RhoMatrix& fold_matrix(int k, WeylElement lower, int alpha) const {
    const auto key = std::make_tuple(k, lower.index, alpha);
    auto it = fold_.find(key);
    if (it != fold_.end()) return it->second;
    RhoMatrix m{alpha, lower, reflect(alpha, lower), galleries(k).in_image(reflect(alpha, lower)), {}};
    for (const auto& e : basis(k, lower).elements) m.columns.push_back(rho_fold(k, lower, e.values, alpha).coords);
    return fold_.emplace(key, std::move(m)).first->second;
  }
  const RhoMatrix& fold_matrix(WeylElement lower, int alpha) const { return fold_matrix(length(), lower, alpha); }

  // Positive roots a with s_a x above (upward) or below x.
  std::vector<int> upward_roots(WeylElement x) const { return roots_where(x, true); }
  std::vector<int> downward_roots(WeylElement x) const { return roots_where(x, false); }

  WeylElement reflect(int alpha, WeylElement x) const { return rs_->multiply(rs_->reflection(alpha), x); }

 private:
  std::vector<int> roots_where(WeylElement x, bool up) const {
    std::vector<int> out;
    for (int k = 0; k < rs_->num_positive_roots(); ++k)
      if (rs_->bruhat_lt(x, reflect(k, x)) == up) out.push_back(k);
    return out;
  }

  // Generators of F_U followed by alpha times the basis of B_U^alpha.
  GeneratorSet mod_alpha_generators(int k, WeylElement upper, int alpha) const {
    GeneratorSet gs = basis(k, upper).generator_set();
    const Polynomial a = root_polynomial(*rs_, alpha);
    const auto b = bxalpha_basis(galleries(k), upper, alpha);
    for (const auto& cls : b.elements)
      for (const auto& g : cls) gs.generators.push_back({g.degree + 1, times_polynomial(g.values, a)});
    return gs;
  }

  FibreBasis build(int k, WeylElement x) const {
    const GallerySet& set = galleries(k);
    if (!set.in_image(x))
      throw ConfigError("fibre_basis: no gallery of word (" + word_to_string(set.word()) + ") ends at " + rs_->element_name(x));
    const int n = rs_->rank();
    FibreBasis out{x, n, set.fibre(x), {}};
    const FibreIndex idx(set, x);
    if (k == 0) {
      out.elements.push_back({out.fibre[0], 0, {Polynomial::constant(n, 1)}});
      return out;
    }
    const GallerySet& prev = galleries(k - 1);
    const int alpha = recursion_root(k, x);
    const WeylElement other = rs_->right_multiply_simple(x, word_[static_cast<std::size_t>(k - 1)]);
    if (other != reflect(alpha, x)) throw InvariantViolation("fibre_basis: x s_r differs from s_alpha x");
    const bool x_is_upper = rs_->bruhat_lt(other, x);
    const WeylElement upper = x_is_upper ? x : other, lower = x_is_upper ? other : x;
    const std::uint32_t last = std::uint32_t{1} << (k - 1);
    // the gallery over x whose cut-off lies over `end`
    auto extend = [&](Gallery cut, WeylElement end) { return set.gallery(end == x ? cut.bits : cut.bits | last); };
    auto element_on = [&](const std::vector<std::pair<Gallery, Polynomial>>& vals, Gallery index, int degree) {
      FibreElement e{index, degree, PointwiseFunction(out.fibre.size(), Polynomial(n))};
      for (const auto& [g, v] : vals) e.values[static_cast<std::size_t>(idx.position(g))] = v;
      return e;
    };
    const bool have_upper = prev.in_image(upper), have_lower = prev.in_image(lower);
    if (have_lower) {
      const FibreBasis& bl = basis(k - 1, lower);
      const RhoMatrix* rho = have_upper ? &fold_matrix(k - 1, lower, alpha) : nullptr;
      for (std::size_t j = 0; j < bl.rank(); ++j) {
        std::vector<std::pair<Gallery, Polynomial>> vals;
        for (std::size_t i = 0; i < bl.fibre.size(); ++i) vals.push_back({extend(bl.fibre[i], lower), bl.elements[j].values[i]});
        if (rho) {
          const FibreBasis& bu = basis(k - 1, upper);
          const auto lift = bu.combine(rho->columns[j]);
          for (std::size_t i = 0; i < bu.fibre.size(); ++i) vals.push_back({extend(bu.fibre[i], upper), lift[i]});
        }
        out.elements.push_back(element_on(vals, extend(bl.elements[j].gallery, lower), bl.elements[j].degree));
      }
    }
    if (have_upper) {
      const FibreBasis& bu = basis(k - 1, upper);
      const Polynomial a = root_polynomial(*rs_, alpha);
      for (const auto& e : bu.elements) {
        std::vector<std::pair<Gallery, Polynomial>> vals;
        for (std::size_t i = 0; i < bu.fibre.size(); ++i) vals.push_back({extend(bu.fibre[i], upper), a * e.values[i]});
        out.elements.push_back(element_on(vals, extend(e.gallery, upper), e.degree + 1));
      }
    }
    std::stable_sort(out.elements.begin(), out.elements.end(), [&](const FibreElement& a, const FibreElement& b) {
      if (a.degree != b.degree) return a.degree < b.degree;
      return idx.position(a.gallery) < idx.position(b.gallery);
    });
    return out;
  }

  // Count, degrees, homogeneity, support and membership in every B_x^alpha.
  void verify(int k, const FibreBasis& b) const {
    const GallerySet& set = galleries(k);
    const FibreIndex idx(set, b.x);
    const std::string where = "fibre basis over " + rs_->element_name(b.x) + " for word (" + word_to_string(set.word()) + ")";
    if (b.rank() != b.fibre.size()) throw InvariantViolation(where + ": rank differs from the fibre size");
    std::vector<bool> seen(b.fibre.size(), false);
    const auto conds = fx_congruences(set, b.x);
    for (const auto& e : b.elements) {
      const int p = idx.position(e.gallery);
      if (p < 0 || seen[static_cast<std::size_t>(p)]) throw InvariantViolation(where + ": index galleries are not a bijection");
      seen[static_cast<std::size_t>(p)] = true;
      const std::string at = where + ", element " + e.gallery.to_string();
      if (e.degree != set.stats(e.gallery).num_D()) throw InvariantViolation(at + ": degree differs from #D");
      for (std::size_t i = 0; i < e.values.size(); ++i) {
        const Polynomial& v = e.values[i];
        if (!v.is_zero() && (v.degree() != e.degree || !(v.component(e.degree) == v))) throw InvariantViolation(at + ": not homogeneous");
        if (static_cast<int>(i) < p && !v.is_zero()) throw InvariantViolation(at + ": support below the index gallery");
      }
      if (e.values[static_cast<std::size_t>(p)].is_zero()) throw InvariantViolation(at + ": vanishes at its index gallery");
      std::string which;
      if (!satisfies(conds, e.values, &which)) throw InvariantViolation(at + ": violates " + which);
    }
  }

  const RootSystem* rs_;
  Word word_;
  std::vector<std::unique_ptr<GallerySet>> levels_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<FibreBasis>> bases_;
  mutable std::map<std::tuple<int, int, int>, RhoMatrix> fold_;
};

// Degree-d solutions, in the coordinates of a free module with generator
// degrees `shifts`, of the congruences sum_j c_ij p_j == 0 mod alpha.
struct KernelModule {
  WeylElement x;
  GeneratorSet coordinates;  // over the basis of F_x
  GeneratorSet functions;    // the same generators as functions on Gamma_x
};

inline KernelModule kernel_module(const FibreTower& tower, WeylElement x, const std::vector<Congruence>& conds, int max_degree) {
  const FibreBasis& b = tower.basis(x);
  const int n = tower.root_system().rank();
  const auto shifts = b.degrees();
  KernelModule out{x, minimal_generators(
                          n, shifts, [&](int d) { return solve_slice(n, shifts, conds, d); }, max_degree),
                   {n, std::vector<int>(b.fibre.size(), 0), {}}};
  for (const auto& g : out.coordinates.generators) out.functions.generators.push_back({g.degree, b.combine(g.values)});
  return out;
}

// Intersection of ker rho_x^alpha over alpha with s_alpha x > x.
inline KernelModule fibre_dual_basis(const FibreTower& tower, WeylElement x) {
  const RootSystem& rs = tower.root_system();
  std::vector<Congruence> conds;
  for (int alpha : tower.upward_roots(x)) {
    const RhoMatrix& m = tower.fold_matrix(x, alpha);
    if (!m.target_in_image) continue;
    const std::size_t rows = tower.basis(m.target).rank();
    for (std::size_t i = 0; i < rows; ++i) {
      Congruence c{{}, root_form(rs, alpha), 1, "ker rho up " + std::to_string(alpha)};
      for (std::size_t j = 0; j < m.columns.size(); ++j)
        if (!m.columns[j][i].is_zero()) c.terms.push_back({static_cast<int>(j), m.columns[j][i]});
      conds.push_back(std::move(c));
    }
  }
  return kernel_module(tower, x, conds, tower.length());
}

// Intersection of ker rho_x^alpha over alpha with s_alpha x < x.
inline KernelModule downward_kernel(const FibreTower& tower, WeylElement x) {
  const RootSystem& rs = tower.root_system();
  const int n = rs.rank();
  std::vector<Congruence> conds;
  for (int alpha : tower.downward_roots(x))
    for (std::size_t j = 0; j < tower.basis(x).rank(); ++j)
      conds.push_back({{{static_cast<int>(j), Polynomial::constant(n, 1)}}, root_form(rs, alpha), 1, "ker rho down " + std::to_string(alpha)});
  return kernel_module(tower, x, conds, tower.length() + rs.length(x));
}

// Degrees predicted for the dual module by the Poincare dual diagonal.
inline std::map<int, int> dual_degree_prediction(const GallerySet& set, WeylElement x) {
  std::map<int, int> m;
  for (Gallery g : set.fibre(x)) ++m[diag_euler(set, g).dual.degree()];
  return m;
}

struct SymmetryResult {
  bool symmetric = false;
  bool polynomial = false;
  RatFnMatrix product;  // E_y D_y^{-1} tE_y
  bool ok() const { return symmetric && polynomial; }
};

// H_y = basis value matrix, E_y = H_y^{-1}, D_y^{-1} = diag(full Euler class / d_y).
inline SymmetryResult ey_symmetry_check(const FibreTower& tower, WeylElement y) {
  const FibreBasis& b = tower.basis(y);
  const GallerySet& set = tower.galleries();
  const int n = b.nvars;
  const RatFnMatrix e = ratfn_matrix_inverse(to_ratfn(b.value_matrix()), n);
  const Polynomial dy = d_weight(tower.root_system(), y);
  RatFnMatrix dinv(b.fibre.size(), b.fibre.size(), ratfn_constant(n, 0));
  for (std::size_t i = 0; i < b.fibre.size(); ++i) dinv(i, i) = RationalFunction(diag_euler(set, b.fibre[i]).full, dy);
  SymmetryResult r;
  r.product = multiply(multiply(e, dinv, n), e.transposed(), n);
  r.symmetric = r.product == r.product.transposed();
  r.polynomial = true;
  for (std::size_t i = 0; i < r.product.rows(); ++i)
    for (std::size_t j = 0; j < r.product.cols(); ++j) r.polynomial = r.polynomial && r.product(i, j).as_polynomial().has_value();
  return r;
}

}  // namespace gallerysheaf
