#pragma once

// Degreewise exact linear algebra over the graded ring A = Q[a1..an].
//
// A graded free module is described by a list of slots with shifts; a
// homogeneous element of degree d assigns to slot s a polynomial of degree
// d - shift[s].  Its degree-d slice is the Q-vector space with basis
// (slot, monomial), ordered lexicographically (slot first, monomials in graded
// lex order).  Submodules cut out by A-linear congruences are computed one
// slice at a time by exact elimination.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symalg.hpp"

namespace gallerysheaf {

using SparseVec = std::vector<std::pair<int, Rational>>;  // sorted by index, no zeros

inline bool is_zero(const SparseVec& v) { return v.empty(); }

// Reduced row echelon form built incrementally.  Pivot of a row is its
// leftmost nonzero column; the RREF of a row space is independent of the
// insertion order.
class Echelon {
 public:
  explicit Echelon(int ncols = 0) : ncols_(ncols), scratch_(static_cast<std::size_t>(ncols)) {}

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::map<int, SparseVec>& rows() const { return rows_; }
  bool is_pivot(int c) const { return rows_.count(c) != 0; }

  SparseVec reduce(const SparseVec& v) const {
    std::vector<int> touched;
    for (const auto& [c, x] : v) {
      scratch_[static_cast<std::size_t>(c)] = x;
      touched.push_back(c);
    }
    for (const auto& [c, x0] : v) {
      auto it = rows_.find(c);
      if (it == rows_.end()) continue;
      const Rational x = scratch_[static_cast<std::size_t>(c)];
      if (x == 0) continue;
      for (const auto& [cc, y] : it->second) {
        auto& s = scratch_[static_cast<std::size_t>(cc)];
        if (s == 0) touched.push_back(cc);
        s -= x * y;
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    SparseVec out;
    for (int c : touched) {
      auto& s = scratch_[static_cast<std::size_t>(c)];
      if (s != 0) out.emplace_back(c, s);
      s = 0;
    }
    return out;
  }

  bool contains(const SparseVec& v) const { return reduce(v).empty(); }

  // Adds v to the row space; returns false if v was already in it.
  bool insert(const SparseVec& v) {
    SparseVec r = reduce(v);
    if (r.empty()) return false;
    const int p = r.front().first;
    const Rational lead = r.front().second;
    if (lead != 1)
      for (auto& [c, x] : r) x /= lead;
    for (auto& [pc, row] : rows_) {
      auto it = std::lower_bound(row.begin(), row.end(), p, [](const auto& e, int c) { return e.first < c; });
      if (it == row.end() || it->first != p) continue;
      const Rational f = it->second;
      row = axpy(row, -f, r);
    }
    rows_.emplace(p, std::move(r));
    return true;
  }

  // Basis of {z : row . z = 0 for all rows}, one vector per free column.
  std::vector<SparseVec> nullspace() const {
    std::map<int, SparseVec> by_free;
    for (int c = 0; c < ncols_; ++c)
      if (!is_pivot(c)) by_free[c].emplace_back(c, Rational(1));
    for (const auto& [p, row] : rows_)
      for (const auto& [c, x] : row)
        if (c != p) by_free[c].emplace_back(p, -x);
    std::vector<SparseVec> out;
    for (auto& [c, v] : by_free) {
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      out.push_back(std::move(v));
    }
    return out;
  }

  static SparseVec axpy(const SparseVec& a, const Rational& f, const SparseVec& b) {
    SparseVec out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.emplace_back(b[j].first, f * b[j].second);
        ++j;
      } else {
        Rational s = a[i].second + f * b[j].second;
        if (s != 0) out.emplace_back(a[i].first, std::move(s));
        ++i;
        ++j;
      }
    }
    return out;
  }

 private:
  int ncols_;
  std::map<int, SparseVec> rows_;
  mutable std::vector<Rational> scratch_;
};

// Coordinates of the degree-d slice of a graded free module.
class SliceIndex {
 public:
  SliceIndex() = default;
  SliceIndex(int nvars, std::vector<int> shifts, int degree) : nvars_(nvars), shifts_(std::move(shifts)), degree_(degree) {
    int off = 0;
    for (int s : shifts_) {
      offsets_.push_back(off);
      monomials_.push_back(graded_monomials(nvars_, degree_ - s));
      off += static_cast<int>(monomials_.back().size());
    }
    size_ = off;
  }

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  int size() const { return size_; }
  int num_slots() const { return static_cast<int>(shifts_.size()); }
  const std::vector<int>& shifts() const { return shifts_; }
  const std::vector<Exponent>& monomials(int slot) const { return monomials_[static_cast<std::size_t>(slot)]; }
  int offset(int slot) const { return offsets_[static_cast<std::size_t>(slot)]; }

  int column(int slot, const Exponent& e) const {
    const auto& ms = monomials(slot);
    auto it = std::lower_bound(ms.begin(), ms.end(), e, GrlexGreater{});
    if (it == ms.end() || *it != e) return -1;
    return offset(slot) + static_cast<int>(it - ms.begin());
  }

  std::pair<int, Exponent> locate(int col) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), col);
    const int slot = static_cast<int>(it - offsets_.begin()) - 1;
    return {slot, monomials(slot)[static_cast<std::size_t>(col - offset(slot))]};
  }

  // Requires f[s] homogeneous of degree degree - shift[s] (or zero).
  SparseVec encode(const std::vector<Polynomial>& f) const {
    SparseVec v;
    for (int s = 0; s < num_slots(); ++s)
      for (const auto& [e, c] : f[static_cast<std::size_t>(s)].terms()) {
        const int col = column(s, e);
        if (col < 0) throw InvariantViolation("slice encode: value of wrong degree");
        v.emplace_back(col, c);
      }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  }

  std::vector<Polynomial> decode(const SparseVec& v) const {
    std::vector<Polynomial> f(shifts_.size(), Polynomial(nvars_));
    for (const auto& [col, c] : v) {
      auto [slot, e] = locate(col);
      f[static_cast<std::size_t>(slot)].add_term(e, c);
    }
    return f;
  }

 private:
  int nvars_ = 0;
  std::vector<int> shifts_;
  int degree_ = 0;
  std::vector<int> offsets_;
  std::vector<std::vector<Exponent>> monomials_;
  int size_ = 0;
};

// sum_s coeff_s * f[s] == 0 mod root^power
struct Congruence {
  std::vector<std::pair<int, Polynomial>> terms;
  LinearForm root;
  int power = 0;
  std::string label;
};

namespace detail {

// Image of x^m under the change of variables replacing the pivot variable of
// `root` by y = root, truncated to y-degree < power.  The result lives in the
// same variable slots, with slot `pivot` standing for y.
class RootChart {
 public:
  RootChart(const LinearForm& root, int power) : root_(root), power_(power), pivot_(root.pivot()) {
    const int n = root.nvars();
    const Rational lead = root.coords()[static_cast<std::size_t>(pivot_)];
    substitution_ = Polynomial::variable(n, pivot_) * (Rational(1) / lead);
    for (int j = 0; j < n; ++j) {
      if (j == pivot_) continue;
      const int c = root.coords()[static_cast<std::size_t>(j)];
      if (c != 0) substitution_ -= Polynomial::variable(n, j) * (Rational(c) / lead);
    }
    powers_.push_back(Polynomial::constant(n, 1));
  }

  const Polynomial& image(const Exponent& m) {
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;
    const int k = m[static_cast<std::size_t>(pivot_)];
    while (static_cast<int>(powers_.size()) <= k) powers_.push_back(truncate(powers_.back() * substitution_));
    Exponent rest = m;
    rest[static_cast<std::size_t>(pivot_)] = 0;
    return cache_.emplace(m, truncate(powers_[static_cast<std::size_t>(k)].shifted(rest))).first->second;
  }

 private:
  Polynomial truncate(const Polynomial& p) const {
    Polynomial out(p.nvars());
    for (const auto& [e, c] : p.terms())
      if (e[static_cast<std::size_t>(pivot_)] < power_) out.add_term(e, c);
    return out;
  }

  LinearForm root_;
  int power_;
  int pivot_;
  Polynomial substitution_;
  std::vector<Polynomial> powers_;
  std::map<Exponent, Polynomial, GrlexGreater> cache_;
};

}  // namespace detail

// Linear conditions on the slice expressing one congruence.
inline std::vector<SparseVec> congruence_rows(const SliceIndex& idx, const Congruence& cond) {
  if (cond.power <= 0) return {};
  detail::RootChart chart(cond.root, cond.power);
  std::map<Exponent, std::map<int, Rational>, GrlexGreater> rows;
  for (const auto& [slot, coeff] : cond.terms) {
    const auto& monos = idx.monomials(slot);
    for (std::size_t k = 0; k < monos.size(); ++k) {
      const int col = idx.offset(slot) + static_cast<int>(k);
      for (const auto& [u, c] : coeff.terms()) {
        const Polynomial& img = chart.image(add_exponents(u, monos[k]));
        for (const auto& [t, e] : img.terms()) rows[t][col] += c * e;
      }
    }
  }
  std::vector<SparseVec> out;
  for (auto& [t, row] : rows) {
    SparseVec v;
    for (auto& [col, c] : row)
      if (c != 0) v.emplace_back(col, c);
    if (!v.empty()) out.push_back(std::move(v));
  }
  return out;
}

struct SliceBasis {
  SliceIndex index;
  std::vector<SparseVec> vectors;
  int condition_rows = 0;

  int degree() const { return index.degree(); }
  int dimension() const { return static_cast<int>(vectors.size()); }
};

// Q-basis of the degree-d solutions of the congruences.
inline SliceBasis solve_slice(int nvars, const std::vector<int>& shifts, const std::vector<Congruence>& conditions, int d) {
  SliceBasis out{SliceIndex(nvars, shifts, d), {}, 0};
  Echelon ech(out.index.size());
  for (const auto& cond : conditions)
    for (const auto& row : congruence_rows(out.index, cond)) {
      ++out.condition_rows;
      ech.insert(row);
    }
  out.vectors = ech.nullspace();
  return out;
}

struct Generator {
  int degree = 0;
  std::vector<Polynomial> values;  // one polynomial per slot
};

struct GeneratorSet {
  int nvars = 0;
  std::vector<int> shifts;
  std::vector<Generator> generators;

  std::map<int, int> counts_by_degree() const {
    std::map<int, int> m;
    for (const auto& g : generators) ++m[g.degree];
    return m;
  }
  std::vector<int> degrees() const {
    std::vector<int> d;
    for (const auto& g : generators) d.push_back(g.degree);
    return d;
  }
  std::size_t size() const { return generators.size(); }
};

inline std::vector<Polynomial> times_polynomial(const std::vector<Polynomial>& f, const Polynomial& p) {
  std::vector<Polynomial> out;
  out.reserve(f.size());
  for (const auto& x : f) out.push_back(x * p);
  return out;
}

using SliceSolver = std::function<SliceBasis(int)>;

// Minimal homogeneous generators: in each degree, the slice basis vectors that
// are independent of A_1 times the previous slice.  With check_extra the slice
// at max_degree + 1 is required to contribute nothing new.
inline GeneratorSet minimal_generators(int nvars, const std::vector<int>& shifts, const SliceSolver& solver, int max_degree,
                                       bool check_extra = true) {
  GeneratorSet gs{nvars, shifts, {}};
  std::vector<std::vector<Polynomial>> previous;
  const int top = check_extra ? max_degree + 1 : max_degree;
  for (int d = 0; d <= top; ++d) {
    SliceBasis slice = solver(d);
    Echelon ech(slice.index.size());
    for (const auto& f : previous)
      for (int v = 0; v < nvars; ++v) ech.insert(slice.index.encode(times_polynomial(f, Polynomial::variable(nvars, v))));
    std::vector<std::vector<Polynomial>> current;
    for (const auto& vec : slice.vectors) {
      auto f = slice.index.decode(vec);
      if (ech.insert(vec)) {
        if (d > max_degree)
          throw InvariantViolation("minimal_generators: new generator above degree bound " + std::to_string(max_degree));
        gs.generators.push_back({d, f});
      }
      current.push_back(std::move(f));
    }
    previous = std::move(current);
  }
  return gs;
}

// Solves sum_i a_i * gens[i] = target for each target (all homogeneous of
// degree d) with a_i in A_{d - deg g_i}.  Unknown columns are ordered by
// (generator, monomial), reversed when `reverse` is set; free unknowns are set
// to zero.  Returns nullopt for inconsistent targets.
inline std::vector<std::optional<std::vector<Polynomial>>> express_many(const std::vector<Generator>& gens, int nvars, int num_slots,
                                                                        const std::vector<std::vector<Polynomial>>& targets, int d,
                                                                        bool reverse = false) {
  const SliceIndex idx(nvars, std::vector<int>(static_cast<std::size_t>(num_slots), 0), d);
  struct Unknown {
    std::size_t gen;
    Exponent mono;
  };
  std::vector<Unknown> unknowns;
  std::vector<SparseVec> columns;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (const auto& m : graded_monomials(nvars, d - gens[i].degree)) {
      std::vector<Polynomial> shifted;
      for (const auto& v : gens[i].values) shifted.push_back(v.shifted(m));
      unknowns.push_back({i, m});
      columns.push_back(idx.encode(shifted));
    }
  const int nu = static_cast<int>(unknowns.size());
  std::vector<int> order(static_cast<std::size_t>(nu));
  for (int k = 0; k < nu; ++k) order[static_cast<std::size_t>(k)] = reverse ? nu - 1 - k : k;
  // rows of the augmented system [M | targets]
  std::vector<SparseVec> rows(static_cast<std::size_t>(idx.size()));
  for (int k = 0; k < nu; ++k)
    for (const auto& [r, c] : columns[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])])
      rows[static_cast<std::size_t>(r)].emplace_back(k, c);
  for (std::size_t t = 0; t < targets.size(); ++t)
    for (const auto& [r, c] : idx.encode(targets[t])) rows[static_cast<std::size_t>(r)].emplace_back(nu + static_cast<int>(t), c);
  Echelon ech(nu + static_cast<int>(targets.size()));
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    ech.insert(row);
  }
  std::vector<bool> consistent(targets.size(), true);
  for (const auto& [p, row] : ech.rows())
    if (p >= nu)
      for (const auto& [c, x] : row) consistent[static_cast<std::size_t>(c - nu)] = false;
  std::vector<std::optional<std::vector<Polynomial>>> out(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (!consistent[t]) continue;
    std::vector<Polynomial> coeffs(gens.size(), Polynomial(nvars));
    const int col = nu + static_cast<int>(t);
    for (const auto& [p, row] : ech.rows()) {
      if (p >= nu) continue;
      auto it = std::lower_bound(row.begin(), row.end(), col, [](const auto& e, int c) { return e.first < c; });
      if (it == row.end() || it->first != col) continue;
      const auto& u = unknowns[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];
      coeffs[u.gen].add_term(u.mono, it->second);
    }
    out[t] = std::move(coeffs);
  }
  return out;
}

// Degree-d homogeneous part of each slot.
inline std::vector<Polynomial> homogeneous_part(const std::vector<Polynomial>& f, int d) {
  std::vector<Polynomial> out;
  for (const auto& p : f) out.push_back(p.component(d));
  return out;
}

// A-coordinates of f (any degrees) over the generators, or nullopt.
inline std::optional<std::vector<Polynomial>> membership(const std::vector<Polynomial>& f, const GeneratorSet& gs, bool reverse = false) {
  const int nvars = gs.nvars;
  int top = -1;
  for (const auto& p : f) top = std::max(top, p.degree());
  std::vector<Polynomial> coeffs(gs.generators.size(), Polynomial(nvars));
  for (int d = 0; d <= top; ++d) {
    auto part = homogeneous_part(f, d);
    bool zero = std::all_of(part.begin(), part.end(), [](const Polynomial& p) { return p.is_zero(); });
    if (zero) continue;
    auto sol = express_many(gs.generators, nvars, static_cast<int>(f.size()), {part}, d, reverse);
    if (!sol[0]) return std::nullopt;
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += (*sol[0])[i];
  }
  return coeffs;
}

// Dimension of the degree-d slice of a free module with the given generator degrees.
inline long long free_slice_dimension(int nvars, const std::vector<int>& generator_degrees, int d) {
  long long n = 0;
  for (int g : generator_degrees) n += static_cast<long long>(graded_monomials(nvars, d - g).size());
  return n;
}

}  // namespace gallerysheaf
