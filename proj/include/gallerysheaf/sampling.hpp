#pragma once

// Seeded random polynomials and functions for the randomized property suites.

#include <random>
#include <vector>

#include "gradedlinalg.hpp"
#include "symalg.hpp"

namespace gallerysheaf {

using Rng = std::mt19937_64;

// Homogeneous polynomial of degree d with up to `terms` small integer coefficients.
inline Polynomial random_homogeneous(Rng& rng, int nvars, int d, int terms = 3) {
  const auto monos = graded_monomials(nvars, d);
  if (monos.empty()) return Polynomial(nvars);
  std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
  std::uniform_int_distribution<int> coeff(-3, 3);
  Polynomial p(nvars);
  for (int t = 0; t < terms; ++t) p.add_term(monos[pick(rng)], Rational(coeff(rng)));
  return p;
}

// Combination sum_j p_j g_j of homogeneous degree d over the generators of degree <= d.
inline std::vector<Polynomial> random_combination(Rng& rng, const GeneratorSet& gs, std::size_t slots, int d) {
  std::vector<Polynomial> f(slots, Polynomial(gs.nvars));
  for (const auto& g : gs.generators) {
    if (g.degree > d) continue;
    const Polynomial p = random_homogeneous(rng, gs.nvars, d - g.degree, 2);
    for (std::size_t s = 0; s < slots; ++s) f[s] += p * g.values[s];
  }
  return f;
}

// Adds a random homogeneous degree-d polynomial at one random slot.
inline void perturb(Rng& rng, std::vector<Polynomial>& f, int nvars, int d) {
  std::uniform_int_distribution<std::size_t> pick(0, f.size() - 1);
  f[pick(rng)] += random_homogeneous(rng, nvars, d, 2);
}

}  // namespace gallerysheaf
