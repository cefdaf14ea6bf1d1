#pragma once

// Exact sparse multivariate polynomials over Q in the simple-root variables
// a1..an, division and reduction by linear forms, gcd, rational functions and
// exact matrix inversion over the rational function field.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rootsys.hpp"

namespace gallerysheaf {

using Rational = mpq_class;
using Exponent = std::array<std::uint16_t, kMaxRank>;

inline int total_degree(const Exponent& e) {
  int d = 0;
  for (auto x : e) d += x;
  return d;
}

// Graded lex, largest first: higher total degree first, then lexicographically
// larger exponent vector (a1 > a2 > ...).
struct GrlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

inline Exponent add_exponents(const Exponent& a, const Exponent& b) {
  Exponent c{};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const unsigned s = unsigned{a[i]} + unsigned{b[i]};
    if (s > std::numeric_limits<std::uint16_t>::max()) throw InvariantViolation("polynomial exponent overflow");
    c[i] = static_cast<std::uint16_t>(s);
  }
  return c;
}

inline bool divides(const Exponent& a, const Exponent& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline std::string rational_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

class Polynomial {
 public:
  using Terms = std::map<Exponent, Rational, GrlexGreater>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_[Exponent{}] = c;
    return p;
  }
  static Polynomial variable(int nvars, int i) {
    Exponent e{};
    e[static_cast<std::size_t>(i)] = 1;
    return monomial(nvars, e, 1);
  }
  static Polynomial monomial(int nvars, const Exponent& e, const Rational& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_[e] = c;
    return p;
  }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0); }
  std::size_t num_terms() const { return terms_.size(); }
  int degree() const { return terms_.empty() ? -1 : total_degree(terms_.begin()->first); }
  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const int d = degree();
    for (const auto& [e, c] : terms_)
      if (total_degree(e) != d) return false;
    return true;
  }
  int degree_in(int var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, int{e[static_cast<std::size_t>(var)]});
    return d;
  }
  Rational coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  // Leading term in graded lex order; requires nonzero.
  const std::pair<const Exponent, Rational>& leading_term() const { return *terms_.begin(); }

  // Homogeneous component of degree d.
  Polynomial component(int d) const {
    Polynomial p(nvars_);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) == d) p.terms_.emplace_hint(p.terms_.end(), e, c);
    return p;
  }

  void add_term(const Exponent& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    adopt(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    adopt(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  Polynomial operator-() const {
    Polynomial p = *this;
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial p(std::max(a.nvars_, b.nvars_));
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) p.add_term(add_exponents(ea, eb), ca * cb);
    return p;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  // Multiply by the monomial x^e.
  Polynomial shifted(const Exponent& e) const {
    Polynomial p(nvars_);
    for (const auto& [ea, c] : terms_) p.terms_.emplace(add_exponents(ea, e), c);
    return p;
  }

  Polynomial pow(int k) const {
    Polynomial out = constant(nvars_, 1);
    for (int i = 0; i < k; ++i) out *= *this;
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  // Bit-exact text form: graded lex order, variables a1..an, rational literals.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      const bool neg = c < 0;
      const Rational a = neg ? Rational(-c) : c;
      if (first) {
        if (neg) os << "-";
      } else {
        os << (neg ? " - " : " + ");
      }
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "a" + std::to_string(i + 1);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      if (mono.empty())
        os << rational_to_string(a);
      else if (a == 1)
        os << mono;
      else
        os << rational_to_string(a) << "*" << mono;
    }
    return os.str();
  }

 private:
  void adopt(const Polynomial& o) { nvars_ = std::max(nvars_, o.nvars_); }

  int nvars_ = 0;
  Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

// A root viewed as a degree-one polynomial; primitive integer coordinates.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(std::vector<int> coords) : coords_(std::move(coords)) {
    int g = 0;
    for (int c : coords_) g = std::gcd(g, c);
    if (g != 1) throw ConfigError("linear form must be nonzero with primitive coordinates");
  }

  const std::vector<int>& coords() const { return coords_; }
  int nvars() const { return static_cast<int>(coords_.size()); }
  // Lowest-index variable with a nonzero coefficient.
  int pivot() const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] != 0) return static_cast<int>(i);
    return -1;
  }
  Polynomial to_polynomial() const {
    Polynomial p(nvars());
    for (int i = 0; i < nvars(); ++i) {
      Exponent e{};
      e[static_cast<std::size_t>(i)] = 1;
      p.add_term(e, coords_[static_cast<std::size_t>(i)]);
    }
    return p;
  }
  friend bool operator==(const LinearForm&, const LinearForm&) = default;
  friend auto operator<=>(const LinearForm&, const LinearForm&) = default;

 private:
  std::vector<int> coords_;
};

struct LinearDivision {
  Polynomial quotient;
  Polynomial remainder;  // free of the pivot variable
};

// f = a*q + r with r free of the pivot variable of a.  r is the canonical
// representative of f modulo (a).
inline LinearDivision divmod_linear(const Polynomial& f, const LinearForm& a) {
  const int p = a.pivot();
  const auto pp = static_cast<std::size_t>(p);
  const Rational lead = a.coords()[pp];
  struct PivotFirst {
    std::size_t var;
    bool operator()(const Exponent& x, const Exponent& y) const {
      if (x[var] != y[var]) return x[var] > y[var];
      return GrlexGreater{}(x, y);
    }
  };
  std::map<Exponent, Rational, PivotFirst> work(PivotFirst{pp});
  for (const auto& [e, c] : f.terms()) work.emplace(e, c);
  const int n = std::max(f.nvars(), a.nvars());
  Polynomial q(n);
  while (!work.empty() && work.begin()->first[pp] > 0) {
    Exponent m = work.begin()->first;
    const Rational c = work.begin()->second / lead;
    m[pp] -= 1;
    q.add_term(m, c);
    for (int j = 0; j < a.nvars(); ++j) {
      const int aj = a.coords()[static_cast<std::size_t>(j)];
      if (aj == 0) continue;
      Exponent t = m;
      t[static_cast<std::size_t>(j)] += 1;
      auto [it, inserted] = work.try_emplace(t, 0);
      it->second -= c * aj;
      if (it->second == 0) work.erase(it);
    }
  }
  Polynomial r(n);
  for (const auto& [e, c] : work) r.add_term(e, c);
  return {std::move(q), std::move(r)};
}

// q with f = a*q, or nullopt when a does not divide f.
inline std::optional<Polynomial> divide_by_linear(const Polynomial& f, const LinearForm& a) {
  auto d = divmod_linear(f, a);
  if (!d.remainder.is_zero()) return std::nullopt;
  return std::move(d.quotient);
}

inline Polynomial reduce_mod_linear(const Polynomial& f, const LinearForm& a) { return divmod_linear(f, a).remainder; }

// Largest k <= cap with a^k | f (cap for the zero polynomial).
inline int linear_valuation(const Polynomial& f, const LinearForm& a, int cap) {
  Polynomial g = f;
  for (int k = 0; k < cap; ++k) {
    auto q = divide_by_linear(g, a);
    if (!q) return k;
    g = std::move(*q);
  }
  return cap;
}

inline bool divisible_by_power(const Polynomial& f, const LinearForm& a, int k) { return linear_valuation(f, a, k) >= k; }

// Exact quotient f/g, or nullopt if g does not divide f.
inline std::optional<Polynomial> exact_divide(const Polynomial& f, const Polynomial& g) {
  if (g.is_zero()) throw InvariantViolation("division by zero polynomial");
  const auto& [lg, cg] = g.leading_term();
  Polynomial r = f;
  Polynomial q(std::max(f.nvars(), g.nvars()));
  while (!r.is_zero()) {
    const auto [lr, cr] = r.leading_term();
    if (!divides(lg, lr)) return std::nullopt;
    Exponent m{};
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint16_t>(lr[i] - lg[i]);
    const Rational c = cr / cg;
    q.add_term(m, c);
    Polynomial t = g.shifted(m);
    t *= c;
    r -= t;
  }
  return q;
}

namespace detail {

// Coefficients of f as a polynomial in x_var, indexed by power.
inline std::vector<Polynomial> coefficients_in(const Polynomial& f, int var) {
  const auto v = static_cast<std::size_t>(var);
  std::vector<Polynomial> out(static_cast<std::size_t>(std::max(0, f.degree_in(var) + 1)), Polynomial(f.nvars()));
  for (const auto& [e, c] : f.terms()) {
    Exponent rest = e;
    rest[v] = 0;
    out[e[v]].add_term(rest, c);
  }
  return out;
}

inline Polynomial monic(const Polynomial& f) {
  if (f.is_zero()) return f;
  Polynomial g = f;
  g *= Rational(1) / f.leading_term().second;
  return g;
}

inline int first_variable(const Polynomial& f, const Polynomial& g, int from) {
  for (int v = from; v < kMaxRank; ++v)
    if (f.degree_in(v) > 0 || g.degree_in(v) > 0) return v;
  return -1;
}

inline Polynomial gcd_from(const Polynomial& f, const Polynomial& g, int from);

inline Polynomial content_in(const Polynomial& f, int var) {
  Polynomial c(f.nvars());
  for (const auto& coeff : coefficients_in(f, var)) {
    if (coeff.is_zero()) continue;
    c = c.is_zero() ? monic(coeff) : gcd_from(c, coeff, var + 1);
    if (c.is_constant()) return Polynomial::constant(f.nvars(), 1);
  }
  return c;
}

inline Polynomial primitive_part(const Polynomial& f, int var) { return *exact_divide(f, content_in(f, var)); }

inline Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, int var) {
  const int db = b.degree_in(var);
  const Polynomial lb = coefficients_in(b, var).back();
  while (!a.is_zero() && a.degree_in(var) >= db) {
    const int da = a.degree_in(var);
    const Polynomial la = coefficients_in(a, var).back();
    Exponent shift{};
    shift[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(da - db);
    a = lb * a - la * b.shifted(shift);
  }
  return a;
}

inline Polynomial gcd_from(const Polynomial& f, const Polynomial& g, int from) {
  if (f.is_zero()) return monic(g);
  if (g.is_zero()) return monic(f);
  const int n = std::max(f.nvars(), g.nvars());
  const int v = first_variable(f, g, from);
  if (v < 0) return Polynomial::constant(n, 1);
  if (f.degree_in(v) <= 0) return gcd_from(f, content_in(g, v), v + 1);
  if (g.degree_in(v) <= 0) return gcd_from(content_in(f, v), g, v + 1);
  const Polynomial cf = content_in(f, v);
  const Polynomial cg = content_in(g, v);
  const Polynomial c = gcd_from(cf, cg, v + 1);
  Polynomial a = *exact_divide(f, cf);
  Polynomial b = *exact_divide(g, cg);
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  while (true) {
    Polynomial r = pseudo_remainder(a, b, v);
    if (r.is_zero()) break;
    if (r.degree_in(v) <= 0) {
      b = Polynomial::constant(n, 1);
      break;
    }
    a = std::move(b);
    b = primitive_part(r, v);
  }
  return monic(c * primitive_part(b, v));
}

}  // namespace detail

// Monic (graded-lex leading coefficient 1) greatest common divisor.
inline Polynomial gcd(const Polynomial& f, const Polynomial& g) {
  if (f.is_zero() && g.is_zero()) return Polynomial(std::max(f.nvars(), g.nvars()));
  auto monomial_gcd = [](const Polynomial& mono, const Polynomial& other) {
    Exponent e = mono.leading_term().first;
    for (const auto& [eo, c] : other.terms())
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::min(e[i], eo[i]);
    return Polynomial::monomial(std::max(mono.nvars(), other.nvars()), e, 1);
  };
  if (!f.is_zero() && f.num_terms() == 1 && !g.is_zero()) return monomial_gcd(f, g);
  if (!g.is_zero() && g.num_terms() == 1 && !f.is_zero()) return monomial_gcd(g, f);
  return detail::gcd_from(f, g, 0);
}

// All exponent vectors of total degree d in nvars variables, graded lex order.
inline std::vector<Exponent> graded_monomials(int nvars, int d) {
  std::vector<Exponent> out;
  if (d < 0) return out;
  Exponent e{};
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == nvars - 1) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(left);
      out.push_back(e);
      e[static_cast<std::size_t>(var)] = 0;
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(k);
      self(self, var + 1, left - k);
    }
    e[static_cast<std::size_t>(var)] = 0;
  };
  if (nvars == 0) {
    if (d == 0) out.push_back(e);
    return out;
  }
  rec(rec, 0, d);
  return out;
}

class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(Polynomial num) : num_(std::move(num)), den_(Polynomial::constant(num_.nvars(), 1)) {}
  RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  std::optional<Polynomial> as_polynomial() const {
    if (den_.is_constant()) return num_ * (Rational(1) / den_.leading_term().second);
    return exact_divide(num_, den_);
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a) {
    RationalFunction r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return RationalFunction(Polynomial(std::max(a.nvars(), b.nvars())));
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw InvariantViolation("rational function division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

  std::string to_string() const {
    if (den_.is_constant() && den_.leading_term().second == 1) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
  }

 private:
  int nvars() const { return std::max(num_.nvars(), den_.nvars()); }

  void normalize() {
    if (den_.is_zero()) throw InvariantViolation("rational function with zero denominator");
    const int n = nvars();
    if (num_.is_zero()) {
      den_ = Polynomial::constant(n, 1);
      return;
    }
    const Polynomial g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = *exact_divide(num_, g);
      den_ = *exact_divide(den_, g);
    }
    const Rational lc = den_.leading_term().second;
    if (lc != 1) {
      num_ *= Rational(1) / lc;
      den_ *= Rational(1) / lc;
    }
  }

  Polynomial num_;
  Polynomial den_;
};

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T()) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using RatFnMatrix = Matrix<RationalFunction>;
using PolyMatrix = Matrix<Polynomial>;

inline RationalFunction ratfn_constant(int nvars, const Rational& c) { return RationalFunction(Polynomial::constant(nvars, c)); }

inline RatFnMatrix identity_ratfn_matrix(std::size_t n, int nvars) {
  RatFnMatrix m(n, n, ratfn_constant(nvars, 0));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = ratfn_constant(nvars, 1);
  return m;
}

inline RatFnMatrix to_ratfn(const PolyMatrix& m) {
  RatFnMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = RationalFunction(m(i, j));
  return out;
}

// Sparse-aware product; zero entries are skipped.
inline RatFnMatrix multiply(const RatFnMatrix& a, const RatFnMatrix& b, int nvars) {
  RatFnMatrix c(a.rows(), b.cols(), ratfn_constant(nvars, 0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b(k, j).is_zero()) continue;
        c(i, j) += a(i, k) * b(k, j);
      }
    }
  return c;
}

inline bool is_identity(const RatFnMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& e = m(i, j);
      if (i == j) {
        auto p = e.as_polynomial();
        if (!p || !p->is_constant() || p->is_zero() || p->leading_term().second != 1) return false;
      } else if (!e.is_zero()) {
        return false;
      }
    }
  return true;
}

// Exact inverse by Gauss-Jordan elimination over the rational function field;
// the result is verified against the identity.  Throws on singular input.
inline RatFnMatrix ratfn_matrix_inverse(const RatFnMatrix& m, int nvars) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw InvariantViolation("matrix inverse: not square");
  RatFnMatrix a = m;
  RatFnMatrix inv = identity_ratfn_matrix(n, nvars);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n; ++i)
      if (!a(i, k).is_zero()) {
        piv = i;
        break;
      }
    if (piv == n) throw InvariantViolation("matrix inverse: singular matrix");
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    const RationalFunction p = a(k, k);
    std::vector<std::size_t> support_a, support_inv;
    for (std::size_t j = 0; j < n; ++j) {
      if (!a(k, j).is_zero()) {
        a(k, j) = a(k, j) / p;
        support_a.push_back(j);
      }
      if (!inv(k, j).is_zero()) {
        inv(k, j) = inv(k, j) / p;
        support_inv.push_back(j);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k).is_zero()) continue;
      const RationalFunction f = a(i, k);
      for (std::size_t j : support_a) a(i, j) -= f * a(k, j);
      for (std::size_t j : support_inv) inv(i, j) -= f * inv(k, j);
    }
  }
  if (!is_identity(multiply(m, inv, nvars))) throw InvariantViolation("matrix inverse: verification failed");
  return inv;
}

}  // namespace gallerysheaf
