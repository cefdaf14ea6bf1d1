#include <gtest/gtest.h>

#include <cstdlib>
#include <numeric>
#include <random>

#include "gallerysheaf/symalg.hpp"

using namespace gallerysheaf;

namespace {

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }
Polynomial cst(int n, long v) { return Polynomial::constant(n, v); }

Polynomial random_poly(std::mt19937_64& rng, int nvars, int max_deg, int terms) {
  std::uniform_int_distribution<int> coef(-5, 5), deg(0, max_deg), v(0, nvars - 1);
  Polynomial p(nvars);
  for (int t = 0; t < terms; ++t) {
    Exponent e{};
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) ++e[static_cast<std::size_t>(v(rng))];
    p.add_term(e, coef(rng));
  }
  return p;
}

std::vector<int> random_root_coords(std::mt19937_64& rng, int nvars) {
  std::uniform_int_distribution<int> c(-3, 3);
  while (true) {
    std::vector<int> v(static_cast<std::size_t>(nvars));
    int g = 0;
    for (auto& x : v) {
      x = c(rng);
      g = std::gcd(g, std::abs(x));
    }
    if (g == 1) return v;
  }
}

}  // namespace

TEST(Polynomial, Arithmetic) {
  const auto a1 = var(2, 0), a2 = var(2, 1);
  EXPECT_EQ((a1 + a1).to_string(), "2*a1");
  EXPECT_EQ(((a1 + a2) * a1).to_string(), "a1^2 + a1*a2");
  EXPECT_EQ((a1 + a2).pow(2).to_string(), "a1^2 + 2*a1*a2 + a2^2");
  EXPECT_EQ((a1 - a1).to_string(), "0");
  EXPECT_EQ((cst(2, 0) - a1 * Rational(3, 2) + a2).to_string(), "-3/2*a1 + a2");
  EXPECT_EQ((a1 - a2 * 2).to_string(), "a1 - 2*a2");
  EXPECT_EQ(((a1 + a2) * (a1 + a2)).degree(), 2);
  EXPECT_TRUE((a1 * a2 + a1 * a1).is_homogeneous());
  EXPECT_FALSE((a1 + cst(2, 1)).is_homogeneous());
}

TEST(Polynomial, DegreeOverflowDetected) {
  Exponent big{};
  big[0] = 60000;
  const auto p = Polynomial::monomial(1, big, 1);
  EXPECT_THROW(p * p, InvariantViolation);
}

TEST(LinearForms, DivideByLinear) {
  const auto a1 = var(2, 0), a2 = var(2, 1);
  EXPECT_EQ(*divide_by_linear(a1 * a1 + a1 * a2, LinearForm({1, 0})), a1 + a2);
  EXPECT_EQ(*divide_by_linear(a1 + a2, LinearForm({1, 1})), cst(2, 1));
  EXPECT_FALSE(divide_by_linear(a1, LinearForm({0, 1})).has_value());
  EXPECT_THROW(LinearForm({2, 4}), ConfigError);
  EXPECT_THROW(LinearForm({0, 0}), ConfigError);
}

TEST(LinearForms, ReduceModLinear) {
  const auto a1 = var(2, 0), a2 = var(2, 1);
  EXPECT_TRUE(reduce_mod_linear(a1, LinearForm({1, 0})).is_zero());
  EXPECT_EQ(reduce_mod_linear(a1, LinearForm({1, 1})), -a2);
  EXPECT_EQ(reduce_mod_linear(a2 * a2, LinearForm({1, 0})), a2 * a2);
}

TEST(LinearForms, RandomizedRoundTrip) {
  std::mt19937_64 rng(20240611);
  for (int nvars = 1; nvars <= 4; ++nvars)
    for (int trial = 0; trial < 1000; ++trial) {
      const LinearForm a(random_root_coords(rng, nvars));
      const Polynomial f = random_poly(rng, nvars, 4, 6);
      const Polynomial g = random_poly(rng, nvars, 3, 4);
      const Polynomial af = a.to_polynomial() * f;
      auto q = divide_by_linear(af, a);
      ASSERT_TRUE(q.has_value());
      ASSERT_EQ(*q, f);
      const Polynomial rf = reduce_mod_linear(f, a);
      ASSERT_EQ(reduce_mod_linear(rf, a), rf);
      ASSERT_EQ(rf.degree_in(a.pivot()) <= 0, true);
      ASSERT_EQ(rf.is_zero(), divide_by_linear(f, a).has_value());
      ASSERT_EQ(reduce_mod_linear(f * g, a), reduce_mod_linear(rf * reduce_mod_linear(g, a), a));
      ASSERT_TRUE(divisible_by_power(af * a.to_polynomial(), a, 2));
    }
}

TEST(LinearForms, Valuation) {
  const LinearForm a({1, -1});
  const auto p = a.to_polynomial();
  EXPECT_EQ(linear_valuation(p.pow(3) * var(2, 0), a, 10), 3);
  EXPECT_EQ(linear_valuation(cst(2, 0), a, 5), 5);
  EXPECT_TRUE(divisible_by_power(cst(2, 7), a, 0));
  EXPECT_FALSE(divisible_by_power(cst(2, 7), a, 1));
}

TEST(Monomials, GradedLex) {
  auto m = graded_monomials(1, 3);
  ASSERT_EQ(m.size(), 1U);
  EXPECT_EQ(m[0][0], 3);
  m = graded_monomials(2, 2);
  ASSERT_EQ(m.size(), 3U);
  EXPECT_EQ(Polynomial::monomial(2, m[0], 1).to_string(), "a1^2");
  EXPECT_EQ(Polynomial::monomial(2, m[1], 1).to_string(), "a1*a2");
  EXPECT_EQ(Polynomial::monomial(2, m[2], 1).to_string(), "a2^2");
  EXPECT_EQ(graded_monomials(3, 2).size(), 6U);
  EXPECT_EQ(graded_monomials(4, 3).size(), 20U);
  EXPECT_TRUE(graded_monomials(2, -1).empty());
  EXPECT_EQ(graded_monomials(3, 0).size(), 1U);
}

TEST(Gcd, Basic) {
  const auto a1 = var(2, 0), a2 = var(2, 1);
  const auto g = gcd((a1 + a2) * (a1 - a2) * a1, (a1 + a2) * a2 * 3);
  EXPECT_EQ(g, a1 + a2);
  EXPECT_EQ(gcd(a1 * a1 * a2, a1 * a2 * a2), a1 * a2);
  EXPECT_EQ(gcd(cst(2, 0), a1 * 2 + a2), a1 + a2 * Rational(1, 2));
}

TEST(RationalFunction, Normalization) {
  const auto a1 = var(2, 0), a2 = var(2, 1);
  RationalFunction f((a1 + a2) * a1, (a1 + a2) * a2 * 2);
  EXPECT_EQ(f.numerator(), a1 * Rational(1, 2));
  EXPECT_EQ(f.denominator(), a2);
  EXPECT_FALSE(f.as_polynomial().has_value());
  EXPECT_TRUE(RationalFunction(a1 * a2, a2).as_polynomial().has_value());
  EXPECT_THROW(RationalFunction(a1, cst(2, 0)), InvariantViolation);
}

TEST(RationalFunction, InverseProducts) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_poly(rng, 2, 3, 3), g = random_poly(rng, 2, 3, 3);
    if (f.is_zero() || g.is_zero()) continue;
    const RationalFunction q(f, g), p(g, f);
    EXPECT_TRUE(q * p == RationalFunction(cst(2, 1)));
    EXPECT_TRUE(q - q == RationalFunction(Polynomial(2)));
    EXPECT_TRUE((q + p) * RationalFunction(f * g) == RationalFunction(f * f + g * g));
  }
}

TEST(RatFnMatrix, Inverse) {
  const int n = 1;
  const auto a = var(n, 0);
  auto id = identity_ratfn_matrix(3, n);
  EXPECT_TRUE(is_identity(ratfn_matrix_inverse(id, n)));

  RatFnMatrix e(2, 2, RationalFunction(Polynomial(n)));
  e(0, 0) = RationalFunction(cst(n, 1));
  e(1, 0) = RationalFunction(cst(n, -1), a);
  e(1, 1) = RationalFunction(cst(n, 1), a);
  auto h = ratfn_matrix_inverse(e, n);
  EXPECT_TRUE(h(0, 0) == RationalFunction(cst(n, 1)));
  EXPECT_TRUE(h(0, 1).is_zero());
  EXPECT_TRUE(h(1, 0) == RationalFunction(cst(n, 1)));
  EXPECT_TRUE(h(1, 1) == RationalFunction(a));

  RatFnMatrix d(2, 2, RationalFunction(Polynomial(2)));
  d(0, 0) = RationalFunction(var(2, 0));
  d(1, 1) = RationalFunction(var(2, 1) + var(2, 0));
  auto di = ratfn_matrix_inverse(d, 2);
  EXPECT_TRUE(di(0, 0) == RationalFunction(cst(2, 1), var(2, 0)));
  EXPECT_TRUE(di(1, 1) == RationalFunction(cst(2, 1), var(2, 1) + var(2, 0)));

  RatFnMatrix sing(2, 2, RationalFunction(cst(1, 1)));
  EXPECT_THROW(ratfn_matrix_inverse(sing, 1), InvariantViolation);
}

TEST(ExactDivide, Multivariate) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_poly(rng, 3, 3, 4), g = random_poly(rng, 3, 2, 3);
    if (g.is_zero()) continue;
    auto q = exact_divide(f * g, g);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, f);
  }
  EXPECT_FALSE(exact_divide(var(2, 0), var(2, 1)).has_value());
}
