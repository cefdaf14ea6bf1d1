#pragma once

// The rank-one case in closed form: inverse Euler classes, restriction
// matrices of the cell basis and its Poincare dual, fibre variants, the
// membership congruences and gluing over the two fibres.

#include <array>
#include <bit>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "galleries.hpp"
#include "rootsys.hpp"
#include "symalg.hpp"

namespace gallerysheaf {

inline constexpr int kMaxSL2Length = 12;

class SL2 {
 public:
  explicit SL2(int r) : rs_(RootSystem::build('A', 1)) {
    if (r < 0 || r > kMaxSL2Length) throw ConfigError("sl2: r outside [0, " + std::to_string(kMaxSL2Length) + "]");
    set_ = std::make_unique<GallerySet>(rs_, Word(static_cast<std::size_t>(r), 0), kMaxSL2Length);
    order_ = set_->lex_sorted();
    for (std::size_t k = 0; k < order_.size(); ++k) position_[order_[k].bits] = k;
    for (int x = 0; x < 2; ++x) {
      auto v = set_->fibre(WeylElement{x});
      std::stable_sort(v.begin(), v.end(), [&](Gallery a, Gallery b) { return a != b && set_->lexleq(a, b); });
      fibre_order_[static_cast<std::size_t>(x)] = v;
    }
  }
  SL2(const SL2&) = delete;
  SL2& operator=(const SL2&) = delete;

  int r() const { return set_->length(); }
  const RootSystem& root_system() const { return rs_; }
  const GallerySet& galleries() const { return *set_; }
  // Gamma in lexleq order; matrix rows and columns follow it.
  const std::vector<Gallery>& order() const { return order_; }
  std::size_t position(Gallery g) const { return position_.at(g.bits); }
  // Gamma_x in lexleq order, x = 0 (id) or 1 (s).
  const std::vector<Gallery>& fibre(int x) const { return fibre_order_.at(static_cast<std::size_t>(x)); }

  Polynomial alpha() const { return Polynomial::variable(1, 0); }
  Polynomial minus_alpha_pow(int k) const { return (-alpha()).pow(k); }
  Polynomial alpha_pow(int k) const { return alpha().pow(k); }
  std::uint32_t J(Gallery g) const { return set_->stats(g).J; }
  std::uint32_t D(Gallery g) const { return set_->stats(g).D; }
  static int card(std::uint32_t m) { return std::popcount(m); }
  static bool subset(std::uint32_t a, std::uint32_t b) { return (a & ~b) == 0; }

  // E(gamma, delta) = (-1)^{#J(delta)} / (-alpha)^{#J(gamma)} when J(delta) is inside J(gamma).
  RatFnMatrix E() const {
    const std::size_t n = order_.size();
    RatFnMatrix m(n, n, RationalFunction(Polynomial(1)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto jg = J(order_[i]), jd = J(order_[j]);
        if (!subset(jd, jg)) continue;
        const Polynomial sign = Polynomial::constant(1, card(jd) % 2 ? -1 : 1);
        m(i, j) = RationalFunction(sign, minus_alpha_pow(card(jg)));
      }
    return m;
  }

  // H(delta, gamma) = alpha^{#J(gamma)} when J(delta) contains J(gamma).
  PolyMatrix H() const {
    const std::size_t n = order_.size();
    PolyMatrix m(n, n, Polynomial(1));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (subset(J(order_[j]), J(order_[i]))) m(i, j) = alpha_pow(card(J(order_[j])));
    return m;
  }

  // H*(delta, gamma) = (-alpha)^{r - #J(gamma)} when J(delta) is inside J(gamma).
  PolyMatrix Hstar() const {
    const std::size_t n = order_.size();
    PolyMatrix m(n, n, Polynomial(1));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (subset(J(order_[i]), J(order_[j]))) m(i, j) = minus_alpha_pow(r() - card(J(order_[j])));
    return m;
  }

  // Equivariant Euler class of the whole space at delta: (-1)^{#J} (-alpha)^r.
  Polynomial full_euler(Gallery d) const { return minus_alpha_pow(r()) * Rational(card(J(d)) % 2 ? -1 : 1); }

  // diag(full Euler class), the inverse of the pairing matrix D.
  RatFnMatrix Dinv() const {
    const std::size_t n = order_.size();
    RatFnMatrix m(n, n, RationalFunction(Polynomial(1)));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = RationalFunction(full_euler(order_[i]));
    return m;
  }

  // i in J(omega(d)) <=> r+1-i in J(d)
  Gallery omega(Gallery d) const {
    std::uint32_t j = 0;
    for (int i = 0; i < r(); ++i)
      if ((J(d) >> i) & 1U) j |= std::uint32_t{1} << (r() - 1 - i);
    for (Gallery g : order_)
      if (J(g) == j) return g;
    throw InvariantViolation("omega: J is not a bijection");
  }

  // Fibre matrices over Gamma_x in lexleq order.
  PolyMatrix fibre_H(int x) const {
    const auto& f = fibre(x);
    PolyMatrix m(f.size(), f.size(), Polynomial(1));
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j)
        if (subset(D(f[j]), D(f[i]))) m(i, j) = alpha_pow(card(D(f[j])));
    return m;
  }
  PolyMatrix fibre_Hstar(int x) const {
    const auto& f = fibre(x);
    PolyMatrix m(f.size(), f.size(), Polynomial(1));
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j)
        if (subset(D(f[i]), D(f[j]))) m(i, j) = minus_alpha_pow(r() - 1 - card(D(f[j])));
    return m;
  }

  // Functions on Gamma are indexed by gallery bits.
  using Function = std::vector<Polynomial>;

  // Coefficients over the cell basis via the alternating sums, or nullopt.
  std::optional<std::vector<Polynomial>> member_coefficients(const Function& f) const {
    std::vector<Polynomial> a;
    for (Gallery g : order_) {
      Polynomial s(1);
      for (Gallery d : order_)
        if (subset(J(d), J(g))) s += card(J(d)) % 2 ? -f[d.bits] : f[d.bits];
      auto q = exact_divide(s, minus_alpha_pow(card(J(g))));
      if (!q) return std::nullopt;
      a.push_back(*q);
    }
    return a;
  }

  // sum over J(delta) containing J(gamma) of (-1)^{r-#J(delta)} f(delta), mod alpha^{r-#J(gamma)}
  bool member_dual(const Function& f) const {
    const LinearForm a({1});
    for (Gallery g : order_) {
      Polynomial s(1);
      for (Gallery d : order_)
        if (subset(J(g), J(d))) s += (r() - card(J(d))) % 2 ? -f[d.bits] : f[d.bits];
      if (!divisible_by_power(s, a, r() - card(J(g)))) return false;
    }
    return true;
  }

  // Solvability of H a = f with polynomial a, via E = H^{-1}.
  bool member_columns(const Function& f, const RatFnMatrix& e) const {
    for (std::size_t i = 0; i < order_.size(); ++i) {
      RationalFunction s(Polynomial(1));
      for (std::size_t j = 0; j < order_.size(); ++j)
        if (!e(i, j).is_zero() && !f[order_[j].bits].is_zero()) s += e(i, j) * RationalFunction(f[order_[j].bits]);
      if (!s.as_polynomial()) return false;
    }
    return true;
  }

  // Fibre functions are indexed by position in fibre(x).
  std::optional<std::vector<Polynomial>> fibre_coefficients(int x, const std::vector<Polynomial>& f) const {
    const auto& fib = fibre(x);
    std::vector<Polynomial> b;
    for (std::size_t i = 0; i < fib.size(); ++i) {
      Polynomial s(1);
      for (std::size_t j = 0; j < fib.size(); ++j)
        if (subset(D(fib[j]), D(fib[i]))) s += card(D(fib[j])) % 2 ? -f[j] : f[j];
      auto q = exact_divide(s, minus_alpha_pow(card(D(fib[i]))));
      if (!q) return std::nullopt;
      b.push_back(*q);
    }
    return b;
  }

  // Folding the last letter, as a map between fibre positions.
  std::size_t fold_position(int x, std::size_t pos) const {
    const Gallery g = fibre(x)[pos];
    const Gallery f = g.toggled(r() - 1);
    const auto& other = fibre(1 - x);
    for (std::size_t k = 0; k < other.size(); ++k)
      if (other[k] == f) return k;
    throw InvariantViolation("fold: image not in the other fibre");
  }

  // Gluing test: a_{fold g} == b_g mod alpha for g in Gamma_s.  Throws unless
  // both inputs lie in their fibre modules.
  bool glue(const std::vector<Polynomial>& nu, const std::vector<Polynomial>& sigma) const {
    if (r() == 0) throw ConfigError("glue: needs r >= 1");
    auto a = fibre_coefficients(0, nu);
    auto b = fibre_coefficients(1, sigma);
    if (!a || !b) throw ConfigError("glue: inputs are not fibre-module members");
    const LinearForm al({1});
    for (std::size_t k = 0; k < fibre(1).size(); ++k) {
      const std::size_t kb = fold_position(1, k);
      if (!reduce_mod_linear((*a)[kb] - (*b)[k], al).is_zero()) return false;
    }
    return true;
  }

  Function assemble(const std::vector<Polynomial>& nu, const std::vector<Polynomial>& sigma) const {
    Function f(set_->size(), Polynomial(1));
    for (std::size_t k = 0; k < fibre(0).size(); ++k) f[fibre(0)[k].bits] = nu[k];
    for (std::size_t k = 0; k < fibre(1).size(); ++k) f[fibre(1)[k].bits] = sigma[k];
    return f;
  }

 private:
  RootSystem rs_;
  std::unique_ptr<GallerySet> set_;
  std::vector<Gallery> order_;
  std::map<std::uint32_t, std::size_t> position_;
  std::array<std::vector<Gallery>, 2> fibre_order_;
};

inline RatFnMatrix poly_to_ratfn(const PolyMatrix& m) { return to_ratfn(m); }

inline bool ratfn_equal(const RatFnMatrix& a, const RatFnMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!(a(i, j) == b(i, j))) return false;
  return true;
}

inline bool is_symmetric_polynomial(const RatFnMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).as_polynomial()) return false;
      if (j < i && !(m(i, j) == m(j, i))) return false;
    }
  return true;
}

// Substitutes -alpha for alpha in a one-variable polynomial.
inline Polynomial negate_variable(const Polynomial& p) {
  Polynomial out(p.nvars());
  for (const auto& [e, c] : p.terms()) out.add_term(e, total_degree(e) % 2 ? -c : c);
  return out;
}

// The matrix identities of the rank-one case for one r.
inline Report sl2_matrix_suite(int r) {
  Report rep;
  const SL2 s(r);
  const std::string tag = "r=" + std::to_string(r) + ": ";
  const RatFnMatrix e = s.E();
  const PolyMatrix h = s.H();
  const PolyMatrix hs = s.Hstar();
  const std::size_t n = s.order().size();
  const RatFnMatrix hr = to_ratfn(h);

  rep.require(is_identity(multiply(hr, e, 1)), tag + "H*E != I");
  rep.require(ratfn_equal(ratfn_matrix_inverse(e, 1), hr), tag + "inverse(E) != H");

  // lower triangular in lexleq order
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!e(i, j).is_zero() || !h(i, j).is_zero()) rep.fail(tag + "E or H not lower triangular");

  const RatFnMatrix dinv = s.Dinv();
  rep.require(ratfn_equal(multiply(dinv, e.transposed(), 1), to_ratfn(hs)), tag + "H* != D^-1 tE");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(hs(i, j) == negate_variable(h(n - 1 - i, n - 1 - j)))) {
        rep.fail(tag + "mirror property of H* fails at (" + s.order()[i].to_string() + "," + s.order()[j].to_string() + ")");
        i = n;
        break;
      }

  const RatFnMatrix sym = multiply(multiply(e, dinv, 1), e.transposed(), 1);
  rep.require(is_symmetric_polynomial(sym), tag + "E D^-1 tE not symmetric polynomial");
  rep.require(ratfn_equal(multiply(e, to_ratfn(hs), 1), sym), tag + "H^-1 H* != E D^-1 tE");

  std::vector<std::size_t> om(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Gallery d = s.order()[i];
    om[i] = s.position(s.omega(d));
    if (s.omega(s.omega(d)) != d) rep.fail(tag + "omega is not an involution");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t oi = om[i];
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t oj = om[j];
      if (!(h(oi, oj) == h(i, j)) || !(e(oi, oj) == e(i, j))) {
        rep.fail(tag + "omega-equivariance fails");
        i = n;
        break;
      }
    }
  }
  return rep;
}

// Fibre identities: d_x times the fibre matrix is the Gamma_x minor of H, the
// fibre matrix is H of the word one letter shorter, and the gluing
// proposition agrees with total membership on basis pairs.
inline Report sl2_fibre_suite(int r) {
  Report rep;
  if (r < 1) return rep;
  const SL2 s(r);
  const SL2 shorter(r - 1);
  const std::string tag = "r=" + std::to_string(r) + ": ";
  const PolyMatrix h = s.H();
  const PolyMatrix hp = shorter.H();
  const PolyMatrix hsp = shorter.Hstar();
  for (int x = 0; x < 2; ++x) {
    const auto& fib = s.fibre(x);
    const PolyMatrix fh = s.fibre_H(x);
    const PolyMatrix fhs = s.fibre_Hstar(x);
    const Polynomial dx = x ? s.alpha() : Polynomial::constant(1, 1);
    for (std::size_t i = 0; i < fib.size(); ++i)
      for (std::size_t j = 0; j < fib.size(); ++j) {
        if (!(fh(i, j) * dx == h(s.position(fib[i]), s.position(fib[j])))) rep.fail(tag + "d_x * fibre H is not the minor of H");
        if (!(fh(i, j) == hp(i, j)) || !(fhs(i, j) == hsp(i, j))) rep.fail(tag + "fibre matrices differ from the shorter word's");
      }
  }
  // unit pairs glue iff they come from a global class
  const auto& f0 = s.fibre(0);
  const auto& f1 = s.fibre(1);
  const PolyMatrix h0 = s.fibre_H(0), h1 = s.fibre_H(1);
  auto column = [](const PolyMatrix& m, std::size_t j) {
    std::vector<Polynomial> c;
    for (std::size_t i = 0; i < m.rows(); ++i) c.push_back(m(i, j));
    return c;
  };
  // all pairs for short words, a fixed window of pairs beyond
  const std::size_t window = r <= 5 ? f0.size() : 6;
  for (std::size_t i = 0; i < std::min(window, f0.size()); ++i)
    for (std::size_t j = 0; j < std::min(window, f1.size()); ++j)
      for (int scale = 0; scale < 2; ++scale) {
        const auto nu = column(h0, i);
        auto sigma = column(h1, j);
        if (scale)
          for (auto& p : sigma) p *= s.alpha();
        const bool glued = s.glue(nu, sigma);
        const bool member = s.member_coefficients(s.assemble(nu, sigma)).has_value();
        if (glued != member) rep.fail(tag + "gluing criterion disagrees with total membership");
      }
  return rep;
}

}  // namespace gallerysheaf
