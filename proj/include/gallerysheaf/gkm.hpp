#pragma once

// GKM-type congruences on galleries: diagonal Euler data, the alpha-slice
// modules B_x^alpha with explicit bases, and the membership tests for the
// total space.

#include <bit>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "galleries.hpp"
#include "gradedlinalg.hpp"
#include "rootsys.hpp"
#include "symalg.hpp"

namespace gallerysheaf {

// Values on a finite gallery set: on Gamma indexed by gallery bits, on a
// fibre Gamma_x indexed by position in GallerySet::fibre(x).
using PointwiseFunction = std::vector<Polynomial>;

inline LinearForm root_form(const RootSystem& rs, int k) { return LinearForm(rs.positive_roots()[static_cast<std::size_t>(k)]); }
inline Polynomial root_polynomial(const RootSystem& rs, int k) { return root_form(rs, k).to_polynomial(); }
inline Polynomial signed_root_polynomial(const RootSystem& rs, int idx) {
  const Polynomial p = root_polynomial(rs, rs.positive_part(idx));
  return rs.is_positive(idx) ? p : -p;
}

struct EulerDiag {
  Polynomial full;  // Euler class of the whole space at gamma
  Polynomial cell;  // diagonal of the cell basis
  Polynomial dual;  // diagonal of the Poincare dual basis
};

inline EulerDiag diag_euler(const GallerySet& set, Gallery g) {
  const RootSystem& rs = set.root_system();
  const int n = rs.rank();
  const auto& st = set.stats(g);
  EulerDiag e{Polynomial::constant(n, 1), Polynomial::constant(n, 1), Polynomial::constant(n, 1)};
  for (int k = 0; k < rs.num_positive_roots(); ++k) {
    const int m = std::popcount(st.M[static_cast<std::size_t>(k)]);
    const int j = std::popcount(st.J_alpha(k));
    if (m == 0) continue;
    const Polynomial a = root_polynomial(rs, k);
    e.full *= (-a).pow(m) * Rational(j % 2 ? -1 : 1);
    e.cell *= a.pow(j);
    e.dual *= a.pow(m - j);
  }
  return e;
}

// Product of the walls beta_i, the direct form of the full Euler class.
inline Polynomial wall_product(const GallerySet& set, Gallery g) {
  const RootSystem& rs = set.root_system();
  Polynomial p = Polynomial::constant(rs.rank(), 1);
  for (int w : set.stats(g).walls) p *= signed_root_polynomial(rs, w);
  return p;
}

// d_x: product of the positive roots a with s_a x < x.
inline Polynomial d_weight(const RootSystem& rs, WeylElement x) {
  Polynomial p = Polynomial::constant(rs.rank(), 1);
  for (int k : rs.descent_roots(x)) p *= root_polynomial(rs, k);
  return p;
}

// Position of each gallery of Gamma_x within GallerySet::fibre(x).
class FibreIndex {
 public:
  FibreIndex(const GallerySet& set, WeylElement x) : galleries_(set.fibre(x)) {
    for (std::size_t k = 0; k < galleries_.size(); ++k) pos_[galleries_[k].bits] = static_cast<int>(k);
  }
  const std::vector<Gallery>& galleries() const { return galleries_; }
  std::size_t size() const { return galleries_.size(); }
  int position(Gallery g) const {
    auto it = pos_.find(g.bits);
    return it == pos_.end() ? -1 : it->second;
  }

 private:
  std::vector<Gallery> galleries_;
  std::map<std::uint32_t, int> pos_;
};

// Whether every congruence holds for f (slot -> value).
inline bool satisfies(const std::vector<Congruence>& conds, const PointwiseFunction& f, std::string* which = nullptr) {
  for (const auto& c : conds) {
    if (c.power <= 0) continue;
    Polynomial s(f.empty() ? 0 : f.front().nvars());
    for (const auto& [slot, coeff] : c.terms) s += coeff * f[static_cast<std::size_t>(slot)];
    if (!divisible_by_power(s, c.root, c.power)) {
      if (which) *which = c.label;
      return false;
    }
  }
  return true;
}

namespace detail {

inline bool subset(std::uint32_t a, std::uint32_t b) { return (a & ~b) == 0; }

inline Polynomial sign_constant(int n, int parity) { return Polynomial::constant(n, parity % 2 ? -1 : 1); }

}  // namespace detail

// Congruences characterizing B_x^alpha on Gamma_x: sums over the ~alpha class
// of gamma with D_alpha(delta) inside D_alpha(gamma), modulo alpha^{#D_alpha(gamma)}.
inline std::vector<Congruence> bx_congruences(const GallerySet& set, WeylElement x, int alpha) {
  const RootSystem& rs = set.root_system();
  const FibreIndex idx(set, x);
  const LinearForm a = root_form(rs, alpha);
  std::vector<Congruence> out;
  for (Gallery g : idx.galleries()) {
    const auto& sg = set.stats(g);
    const std::uint32_t dg = sg.D_alpha(alpha);
    if (dg == 0) continue;
    Congruence c{{}, a, std::popcount(dg), "finBx(" + rs.element_name(x) + ", root " + std::to_string(alpha) + ", " + g.to_string() + ")"};
    for (Gallery d : set.sim_class(g, alpha)) {
      const int p = idx.position(d);
      if (p < 0) continue;
      const std::uint32_t dd = set.stats(d).D_alpha(alpha);
      if (detail::subset(dd, dg)) c.terms.push_back({p, detail::sign_constant(rs.rank(), std::popcount(dd))});
    }
    out.push_back(std::move(c));
  }
  return out;
}

// The dual family: D_alpha(delta) containing D_alpha(gamma), modulo alpha^{#M_alpha - 1 - #D_alpha(gamma)}.
inline std::vector<Congruence> bx_dual_congruences(const GallerySet& set, WeylElement x, int alpha) {
  const RootSystem& rs = set.root_system();
  const FibreIndex idx(set, x);
  const LinearForm a = root_form(rs, alpha);
  std::vector<Congruence> out;
  for (Gallery g : idx.galleries()) {
    const auto& sg = set.stats(g);
    const std::uint32_t dg = sg.D_alpha(alpha);
    const int power = std::popcount(sg.M[static_cast<std::size_t>(alpha)]) - 1 - std::popcount(dg);
    if (power <= 0) continue;
    Congruence c{{}, a, power, "finBx-dual(" + rs.element_name(x) + ", root " + std::to_string(alpha) + ", " + g.to_string() + ")"};
    for (Gallery d : set.sim_class(g, alpha)) {
      const int p = idx.position(d);
      if (p < 0) continue;
      const std::uint32_t dd = set.stats(d).D_alpha(alpha);
      if (detail::subset(dg, dd)) c.terms.push_back({p, detail::sign_constant(rs.rank(), std::popcount(dd))});
    }
    out.push_back(std::move(c));
  }
  return out;
}

struct AlphaSliceBasis {
  int alpha = 0;
  WeylElement x;
  // per ~alpha class meeting Gamma_x: the fibre positions of the class and its basis elements
  std::vector<std::vector<int>> classes;
  std::vector<std::vector<Generator>> elements;

  GeneratorSet generator_set(int nvars, std::size_t fibre_size) const {
    GeneratorSet gs{nvars, std::vector<int>(fibre_size, 0), {}};
    for (const auto& cls : elements)
      for (const auto& g : cls) gs.generators.push_back(g);
    return gs;
  }
  std::size_t rank() const {
    std::size_t n = 0;
    for (const auto& c : elements) n += c.size();
    return n;
  }
};

// b_gamma(delta) = alpha^{#D_alpha(gamma)} on the class members delta in Gamma_x
// with D_alpha(delta) containing D_alpha(gamma), zero elsewhere.
inline AlphaSliceBasis bxalpha_basis(const GallerySet& set, WeylElement x, int alpha) {
  const RootSystem& rs = set.root_system();
  const FibreIndex idx(set, x);
  if (idx.size() == 0) throw ConfigError("bxalpha_basis: empty fibre over " + rs.element_name(x));
  const int n = rs.rank();
  const Polynomial a = root_polynomial(rs, alpha);
  AlphaSliceBasis out{alpha, x, {}, {}};
  std::map<std::uint32_t, std::size_t> class_of;
  for (Gallery g : idx.galleries()) {
    const std::uint32_t key = g.bits & ~set.stats(g).M[static_cast<std::size_t>(alpha)];
    auto [it, fresh] = class_of.emplace(key, out.classes.size());
    if (fresh) {
      out.classes.emplace_back();
      out.elements.emplace_back();
    }
    out.classes[it->second].push_back(idx.position(g));
  }
  for (std::size_t c = 0; c < out.classes.size(); ++c)
    for (int pg : out.classes[c]) {
      const Gallery g = idx.galleries()[static_cast<std::size_t>(pg)];
      const std::uint32_t dg = set.stats(g).D_alpha(alpha);
      const int deg = std::popcount(dg);
      Generator b{deg, PointwiseFunction(idx.size(), Polynomial(n))};
      for (int pd : out.classes[c]) {
        const Gallery d = idx.galleries()[static_cast<std::size_t>(pd)];
        if (detail::subset(dg, set.stats(d).D_alpha(alpha))) b.values[static_cast<std::size_t>(pd)] = a.pow(deg);
      }
      out.elements[c].push_back(std::move(b));
    }
  return out;
}

struct MemberVerdict {
  bool by_congruence = false;  // the sums with D_alpha(delta) inside D_alpha(gamma)
  bool by_dual = false;        // the sums with D_alpha(delta) containing D_alpha(gamma)
  bool by_span = false;        // solvable over the explicit basis
  bool agree() const { return by_congruence == by_dual && by_congruence == by_span; }
  bool member() const { return by_congruence; }
};

inline MemberVerdict bxalpha_member(const GallerySet& set, WeylElement x, int alpha, const PointwiseFunction& f) {
  MemberVerdict v;
  v.by_congruence = satisfies(bx_congruences(set, x, alpha), f);
  v.by_dual = satisfies(bx_dual_congruences(set, x, alpha), f);
  const auto basis = bxalpha_basis(set, x, alpha);
  v.by_span = membership(f, basis.generator_set(set.root_system().rank(), f.size())).has_value();
  return v;
}

// Congruences of the total space on Gamma (slots = gallery bits), one per
// (alpha, gamma): sums over delta ~alpha gamma with J_alpha(delta) inside
// J_alpha(gamma), modulo alpha^{#J_alpha(gamma)}.
inline std::vector<Congruence> htbs1_congruences(const GallerySet& set) {
  const RootSystem& rs = set.root_system();
  std::vector<Congruence> out;
  for (int k = 0; k < rs.num_positive_roots(); ++k) {
    const LinearForm a = root_form(rs, k);
    for (Gallery g : set.all()) {
      const std::uint32_t jg = set.stats(g).J_alpha(k);
      if (jg == 0) continue;
      Congruence c{{}, a, std::popcount(jg), "HTBS1(2) at gamma=" + g.to_string() + ", root " + std::to_string(k)};
      for (Gallery d : set.sim_class(g, k)) {
        const std::uint32_t jd = set.stats(d).J_alpha(k);
        if (detail::subset(jd, jg)) c.terms.push_back({static_cast<int>(d.bits), detail::sign_constant(rs.rank(), std::popcount(jd))});
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

// The dual family: J_alpha(delta) containing J_alpha(gamma), modulo
// alpha^{#M_alpha - #J_alpha(gamma)}; an exponent of zero imposes nothing.
inline std::vector<Congruence> htbs1_dual_congruences(const GallerySet& set) {
  const RootSystem& rs = set.root_system();
  std::vector<Congruence> out;
  for (int k = 0; k < rs.num_positive_roots(); ++k) {
    const LinearForm a = root_form(rs, k);
    for (Gallery g : set.all()) {
      const auto& sg = set.stats(g);
      const std::uint32_t jg = sg.J_alpha(k);
      const int power = std::popcount(sg.M[static_cast<std::size_t>(k)]) - std::popcount(jg);
      if (power <= 0) continue;
      Congruence c{{}, a, power, "HTBS1(3) at gamma=" + g.to_string() + ", root " + std::to_string(k)};
      for (Gallery d : set.sim_class(g, k)) {
        const std::uint32_t jd = set.stats(d).J_alpha(k);
        if (detail::subset(jg, jd)) c.terms.push_back({static_cast<int>(d.bits), detail::sign_constant(rs.rank(), std::popcount(jd))});
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

struct Htbs1Verdict {
  bool by_congruence = false;
  bool by_dual = false;
  std::string failed;  // first failing congruence of the primary family
  bool agree() const { return by_congruence == by_dual; }
  bool member() const { return by_congruence; }
};

inline Htbs1Verdict htbs1_member(const GallerySet& set, const PointwiseFunction& f) {
  Htbs1Verdict v;
  v.by_congruence = satisfies(htbs1_congruences(set), f, &v.failed);
  v.by_dual = satisfies(htbs1_dual_congruences(set), f);
  return v;
}

// Congruences cutting out F_x = intersection of all B_x^alpha.
inline std::vector<Congruence> fx_congruences(const GallerySet& set, WeylElement x) {
  std::vector<Congruence> out;
  for (int k = 0; k < set.root_system().num_positive_roots(); ++k) {
    auto c = bx_congruences(set, x, k);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

// Restriction of a function on Gamma to Gamma_x.
inline PointwiseFunction restrict_to_fibre(const GallerySet& set, WeylElement x, const PointwiseFunction& f) {
  PointwiseFunction out;
  for (Gallery g : set.fibre(x)) out.push_back(f[g.bits]);
  return out;
}

}  // namespace gallerysheaf
