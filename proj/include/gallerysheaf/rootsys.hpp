#pragma once

// Finite root systems of rank <= 4, their Weyl groups as integer matrices on
// the root lattice, the Bruhat order and the Bruhat graph.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace gallerysheaf {

inline constexpr int kMaxRank = 4;
inline constexpr std::size_t kMaxWeylOrder = 1152;

// Coordinates in the basis of simple roots.
using RootVector = std::vector<int>;

// Square integer matrix acting on root-lattice coordinates (column vectors).
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n * n), 0) {}

  static IntMatrix identity(int n) {
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int size() const { return n_; }
  int& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  int operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

  IntMatrix operator*(const IntMatrix& o) const {
    IntMatrix m(n_);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        const int v = (*this)(i, k);
        if (v == 0) continue;
        for (int j = 0; j < n_; ++j) m(i, j) += v * o(k, j);
      }
    return m;
  }

  RootVector apply(const RootVector& v) const {
    RootVector out(static_cast<std::size_t>(n_), 0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(i)] += (*this)(i, j) * v[static_cast<std::size_t>(j)];
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
  friend auto operator<=>(const IntMatrix& a, const IntMatrix& b) { return a.a_ <=> b.a_; }

 private:
  int n_ = 0;
  std::vector<int> a_;
};

// Handle to an element of a RootSystem's Weyl group.  Two handles of the same
// group are equal iff their matrices are equal.
struct WeylElement {
  int index = 0;
  friend auto operator<=>(const WeylElement&, const WeylElement&) = default;
};

struct BruhatEdge {
  int from = 0;  // upper vertex x
  int to = 0;    // lower vertex y = s_root x, l(y) < l(x)
  int root = 0;  // positive root index
};

struct BruhatGraph {
  int num_vertices = 0;
  std::vector<BruhatEdge> edges;
  std::vector<std::vector<int>> out_edges;  // D_x: arrows starting at x
  std::vector<std::vector<int>> in_edges;   // U_x: arrows ending at x
};

// Roots are indexed 0..2N-1: index k < N is the k-th positive root, k + N its
// negative.
class RootSystem {
 public:
  static RootSystem build(char cartan_type, int rank) { return RootSystem(cartan_type, rank); }

  char cartan_type() const { return type_; }
  int rank() const { return rank_; }
  std::string name() const { return std::string(1, type_) + std::to_string(rank_); }
  const std::vector<std::vector<int>>& cartan_matrix() const { return cartan_; }
  const std::vector<std::vector<int>>& gram_matrix() const { return gram_; }

  int num_positive_roots() const { return static_cast<int>(positive_.size()); }
  int num_roots() const { return 2 * num_positive_roots(); }
  const std::vector<RootVector>& positive_roots() const { return positive_; }
  RootVector root(int idx) const {
    const int n = num_positive_roots();
    if (idx < n) return positive_[static_cast<std::size_t>(idx)];
    RootVector v = positive_[static_cast<std::size_t>(idx - n)];
    for (int& c : v) c = -c;
    return v;
  }
  bool is_positive(int idx) const { return idx < num_positive_roots(); }
  int negate(int idx) const { return is_positive(idx) ? idx + num_positive_roots() : idx - num_positive_roots(); }
  int positive_part(int idx) const { return is_positive(idx) ? idx : idx - num_positive_roots(); }
  int simple_root(int i) const { return simple_index_[static_cast<std::size_t>(i)]; }
  std::optional<int> find_root(const RootVector& v) const {
    auto it = root_lookup_.find(v);
    if (it == root_lookup_.end()) return std::nullopt;
    return it->second;
  }
  int height(int idx) const {
    const RootVector v = root(idx);
    return std::accumulate(v.begin(), v.end(), 0);
  }

  // Weyl group.
  std::size_t order() const { return matrices_.size(); }
  WeylElement identity() const { return {0}; }
  WeylElement element(std::size_t i) const { return {static_cast<int>(i)}; }
  WeylElement simple_reflection(int i) const { return {right_[static_cast<std::size_t>(i)]}; }
  const IntMatrix& matrix(WeylElement w) const { return matrices_[idx(w)]; }
  int length(WeylElement w) const { return length_[idx(w)]; }
  const std::vector<int>& reduced_word(WeylElement w) const { return reduced_word_[idx(w)]; }
  WeylElement inverse(WeylElement w) const { return {inverse_[idx(w)]}; }
  WeylElement right_multiply_simple(WeylElement w, int i) const {
    return {right_[idx(w) * static_cast<std::size_t>(rank_) + static_cast<std::size_t>(i)]};
  }
  WeylElement multiply(WeylElement a, WeylElement b) const {
    WeylElement out = a;
    for (int i : reduced_word(b)) out = right_multiply_simple(out, i);
    return out;
  }
  std::optional<WeylElement> find_element(const IntMatrix& m) const {
    auto it = element_lookup_.find(m);
    if (it == element_lookup_.end()) return std::nullopt;
    return WeylElement{it->second};
  }
  WeylElement longest_element() const { return {static_cast<int>(order()) - 1}; }

  RootVector act(WeylElement w, const RootVector& v) const {
    if (v.size() != static_cast<std::size_t>(rank_)) throw ConfigError("weyl_act: dimension mismatch");
    return matrix(w).apply(v);
  }
  int act_root(WeylElement w, int root_idx) const {
    return root_action_[idx(w) * static_cast<std::size_t>(num_roots()) + static_cast<std::size_t>(root_idx)];
  }

  WeylElement reflection(int root_idx) const { return {reflection_[static_cast<std::size_t>(positive_part(root_idx))]}; }
  WeylElement reflection(const RootVector& v) const {
    auto r = find_root(v);
    if (!r) throw ConfigError("reflection: input is not a root");
    return reflection(*r);
  }

  // Positive roots a with s_a x < x, i.e. x^{-1}(a) < 0.
  std::vector<int> descent_roots(WeylElement x) const {
    std::vector<int> out;
    const WeylElement xi = inverse(x);
    for (int k = 0; k < num_positive_roots(); ++k)
      if (!is_positive(act_root(xi, k))) out.push_back(k);
    return out;
  }

  bool bruhat_leq(WeylElement x, WeylElement y) const {
    const auto& row = below_[idx(y)];
    const auto i = idx(x);
    return (row[i / 64] >> (i % 64)) & 1U;
  }
  bool bruhat_lt(WeylElement x, WeylElement y) const { return x != y && bruhat_leq(x, y); }

  const BruhatGraph& bruhat_graph() const { return graph_; }

  std::string element_name(WeylElement w) const {
    const auto& word = reduced_word(w);
    if (word.empty()) return "e";
    std::string s;
    for (int i : word) s += "s" + std::to_string(i + 1);
    return s;
  }

 private:
  static std::size_t idx(WeylElement w) { return static_cast<std::size_t>(w.index); }

  RootSystem(char type, int rank) : type_(type), rank_(rank) {
    build_gram();
    build_roots();
    build_group();
    build_bruhat();
  }

  void build_gram() {
    const char t = type_;
    const int n = rank_;
    auto bad = [&] { return ConfigError("unsupported root system " + std::string(1, t) + std::to_string(n)); };
    if (n < 1 || n > kMaxRank) throw bad();
    gram_.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    auto set = [&](int i, int j, int v) {
      gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      gram_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    };
    switch (t) {
      case 'A':
        for (int i = 0; i < n; ++i) set(i, i, 2);
        for (int i = 0; i + 1 < n; ++i) set(i, i + 1, -1);
        break;
      case 'B':  // alpha_n short
        if (n < 2) throw bad();
        for (int i = 0; i < n - 1; ++i) set(i, i, 4);
        set(n - 1, n - 1, 2);
        for (int i = 0; i + 1 < n; ++i) set(i, i + 1, -2);
        break;
      case 'C':  // alpha_n long
        if (n < 2) throw bad();
        for (int i = 0; i < n - 1; ++i) set(i, i, 2);
        set(n - 1, n - 1, 4);
        for (int i = 0; i + 2 < n; ++i) set(i, i + 1, -1);
        set(n - 2, n - 1, -2);
        break;
      case 'D':
        if (n != 4) throw bad();
        for (int i = 0; i < 4; ++i) set(i, i, 2);
        set(0, 1, -1);
        set(1, 2, -1);
        set(1, 3, -1);
        break;
      case 'F':
        if (n != 4) throw bad();
        set(0, 0, 4);
        set(1, 1, 4);
        set(2, 2, 2);
        set(3, 3, 2);
        set(0, 1, -2);
        set(1, 2, -2);
        set(2, 3, -1);
        break;
      case 'G':  // alpha_1 short
        if (n != 2) throw bad();
        set(0, 0, 2);
        set(1, 1, 6);
        set(0, 1, -3);
        break;
      default:
        throw bad();
    }
    cartan_.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        cartan_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            2 * gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  }

  int pairing(const RootVector& u, const RootVector& v) const {
    int s = 0;
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j)
        s += u[static_cast<std::size_t>(i)] * gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
    return s;
  }

  IntMatrix reflection_matrix(const RootVector& a) const {
    const int aa = pairing(a, a);
    IntMatrix m(rank_);
    for (int j = 0; j < rank_; ++j) {
      RootVector e(static_cast<std::size_t>(rank_), 0);
      e[static_cast<std::size_t>(j)] = 1;
      const int c = 2 * pairing(e, a) / aa;
      for (int i = 0; i < rank_; ++i) m(i, j) = e[static_cast<std::size_t>(i)] - c * a[static_cast<std::size_t>(i)];
    }
    return m;
  }

  void build_roots() {
    std::vector<IntMatrix> simple;
    for (int i = 0; i < rank_; ++i) {
      RootVector a(static_cast<std::size_t>(rank_), 0);
      a[static_cast<std::size_t>(i)] = 1;
      simple.push_back(reflection_matrix(a));
    }
    // closure of the simple roots under simple reflections
    std::vector<RootVector> all;
    std::map<RootVector, int> seen;
    for (int i = 0; i < rank_; ++i) {
      RootVector a(static_cast<std::size_t>(rank_), 0);
      a[static_cast<std::size_t>(i)] = 1;
      seen[a] = 1;
      all.push_back(a);
    }
    for (std::size_t k = 0; k < all.size(); ++k)
      for (const auto& s : simple) {
        RootVector v = s.apply(all[k]);
        if (seen.emplace(v, 1).second) all.push_back(v);
      }
    for (const auto& v : all)
      if (std::all_of(v.begin(), v.end(), [](int c) { return c >= 0; })) positive_.push_back(v);
    std::sort(positive_.begin(), positive_.end(), [](const RootVector& a, const RootVector& b) {
      const int ha = std::accumulate(a.begin(), a.end(), 0);
      const int hb = std::accumulate(b.begin(), b.end(), 0);
      if (ha != hb) return ha < hb;
      return a > b;
    });
    if (all.size() != 2 * positive_.size()) throw InvariantViolation("root closure is not symmetric");
    for (int k = 0; k < num_roots(); ++k) root_lookup_[root(k)] = k;
    for (int i = 0; i < rank_; ++i) {
      RootVector a(static_cast<std::size_t>(rank_), 0);
      a[static_cast<std::size_t>(i)] = 1;
      simple_index_.push_back(root_lookup_.at(a));
    }
    simple_matrices_ = simple;
  }

  void build_group() {
    matrices_.push_back(IntMatrix::identity(rank_));
    length_.push_back(0);
    reduced_word_.emplace_back();
    element_lookup_[matrices_[0]] = 0;
    std::vector<int> right;
    for (std::size_t k = 0; k < matrices_.size(); ++k) {
      for (int i = 0; i < rank_; ++i) {
        IntMatrix m = matrices_[k] * simple_matrices_[static_cast<std::size_t>(i)];
        auto it = element_lookup_.find(m);
        int j;
        if (it == element_lookup_.end()) {
          j = static_cast<int>(matrices_.size());
          if (matrices_.size() >= kMaxWeylOrder) throw ConfigError("Weyl group exceeds the supported envelope");
          element_lookup_.emplace(m, j);
          matrices_.push_back(m);
          length_.push_back(length_[k] + 1);
          auto w = reduced_word_[k];
          w.push_back(i);
          reduced_word_.push_back(w);
        } else {
          j = it->second;
        }
        right.push_back(j);
      }
    }
    right_ = std::move(right);
    // right_ is indexed by element*rank + i; simple reflections are identity*s_i.
    const std::size_t n = matrices_.size();
    inverse_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      WeylElement w{0};
      const auto& word = reduced_word_[k];
      for (auto it = word.rbegin(); it != word.rend(); ++it) w = right_multiply_simple(w, *it);
      inverse_[k] = w.index;
    }
    root_action_.resize(n * static_cast<std::size_t>(num_roots()));
    for (std::size_t k = 0; k < n; ++k)
      for (int r = 0; r < num_roots(); ++r)
        root_action_[k * static_cast<std::size_t>(num_roots()) + static_cast<std::size_t>(r)] =
            root_lookup_.at(matrices_[k].apply(root(r)));
    for (int k = 0; k < num_positive_roots(); ++k)
      reflection_.push_back(element_lookup_.at(reflection_matrix(positive_[static_cast<std::size_t>(k)])));
  }

  void build_bruhat() {
    const std::size_t n = order();
    graph_.num_vertices = static_cast<int>(n);
    graph_.out_edges.assign(n, {});
    graph_.in_edges.assign(n, {});
    for (std::size_t x = 0; x < n; ++x)
      for (int k = 0; k < num_positive_roots(); ++k) {
        const WeylElement y = multiply(reflection(k), element(x));
        if (length(y) < length(element(x))) {
          const int e = static_cast<int>(graph_.edges.size());
          graph_.edges.push_back({static_cast<int>(x), y.index, k});
          graph_.out_edges[x].push_back(e);
          graph_.in_edges[static_cast<std::size_t>(y.index)].push_back(e);
        }
      }
    const std::size_t words = (n + 63) / 64;
    below_.assign(n, std::vector<std::uint64_t>(words, 0));
    // elements are stored with nondecreasing length
    for (std::size_t x = 0; x < n; ++x) {
      auto& row = below_[x];
      row[x / 64] |= std::uint64_t{1} << (x % 64);
      for (int e : graph_.out_edges[x]) {
        const auto& lower = below_[static_cast<std::size_t>(graph_.edges[static_cast<std::size_t>(e)].to)];
        for (std::size_t w = 0; w < words; ++w) row[w] |= lower[w];
      }
    }
  }

  char type_;
  int rank_;
  std::vector<std::vector<int>> gram_;
  std::vector<std::vector<int>> cartan_;
  std::vector<RootVector> positive_;
  std::map<RootVector, int> root_lookup_;
  std::vector<int> simple_index_;
  std::vector<IntMatrix> simple_matrices_;

  std::vector<IntMatrix> matrices_;
  std::map<IntMatrix, int> element_lookup_;
  std::vector<int> length_;
  std::vector<std::vector<int>> reduced_word_;
  std::vector<int> right_;
  std::vector<int> inverse_;
  std::vector<int> root_action_;
  std::vector<int> reflection_;

  BruhatGraph graph_;
  std::vector<std::vector<std::uint64_t>> below_;
};

}  // namespace gallerysheaf
