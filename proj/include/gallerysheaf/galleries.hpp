#pragma once

// Combinatorial galleries for a word in the simple reflections.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rootsys.hpp"

namespace gallerysheaf {

inline constexpr int kMaxEnumerationLength = 20;
inline constexpr int kMaxSheafLength = 12;

// Simple-reflection indices, 0-based internally.
using Word = std::vector<int>;

inline Word parse_word(const std::string& text, int rank) {
  Word w;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("word: not an integer: '" + item + "'");
    }
    if (v < 1 || v > rank) throw ConfigError("word: index " + item + " outside [1, " + std::to_string(rank) + "]");
    w.push_back(v - 1);
  }
  return w;
}

inline std::string word_to_string(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i] + 1);
  return s;
}

inline void validate_word(const RootSystem& rs, const Word& w, int max_length = kMaxEnumerationLength) {
  if (static_cast<int>(w.size()) > max_length)
    throw ConfigError("word length " + std::to_string(w.size()) + " exceeds the supported envelope " + std::to_string(max_length));
  for (int i : w)
    if (i < 0 || i >= rs.rank()) throw ConfigError("word: simple reflection index out of range");
}

// Bit i set <=> letter i+1 is a crossing.
struct Gallery {
  std::uint32_t bits = 0;
  int length = 0;

  bool crossing(int i) const { return (bits >> i) & 1U; }
  Gallery toggled(int i) const { return {bits ^ (std::uint32_t{1} << i), length}; }
  std::string to_string() const {
    std::string s;
    for (int i = 0; i < length; ++i) s += crossing(i) ? 'c' : 'b';
    return s;
  }
  friend bool operator==(const Gallery&, const Gallery&) = default;
};

inline std::string positions_to_string(std::uint32_t mask) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i)
    if ((mask >> i) & 1U) {
      s += (first ? "" : ",") + std::to_string(i + 1);
      first = false;
    }
  return s + "}";
}

// Positions are 0-based bit positions in the masks.
struct GalleryStats {
  std::vector<WeylElement> prefixes;  // gamma^0 .. gamma^r
  std::vector<int> walls;             // beta_i as root index
  std::vector<int> tilde_walls;       // beta~_i as root index
  WeylElement endpoint;
  std::uint32_t J = 0;
  std::uint32_t D = 0;
  std::vector<std::uint32_t> M;  // per positive root

  std::uint32_t J_alpha(int a) const { return J & M[static_cast<std::size_t>(a)]; }
  std::uint32_t D_alpha(int a) const { return D & M[static_cast<std::size_t>(a)]; }
  int num_J() const { return std::popcount(J); }
  int num_D() const { return std::popcount(D); }
};

inline GalleryStats gallery_stats(const RootSystem& rs, const Word& word, Gallery g) {
  const int r = static_cast<int>(word.size());
  if (g.length != r) throw ConfigError("gallery_stats: gallery length does not match the word");
  GalleryStats st;
  st.M.assign(static_cast<std::size_t>(rs.num_positive_roots()), 0);
  st.prefixes.push_back(rs.identity());
  for (int i = 0; i < r; ++i) {
    const WeylElement prev = st.prefixes.back();
    const WeylElement cur = g.crossing(i) ? rs.right_multiply_simple(prev, word[static_cast<std::size_t>(i)]) : prev;
    st.prefixes.push_back(cur);
    const int neg = rs.negate(rs.simple_root(word[static_cast<std::size_t>(i)]));
    const int beta = rs.act_root(cur, neg);
    const int tilde = rs.act_root(prev, neg);
    st.walls.push_back(beta);
    st.tilde_walls.push_back(tilde);
    if (rs.is_positive(beta)) st.J |= std::uint32_t{1} << i;
    if (rs.is_positive(tilde)) st.D |= std::uint32_t{1} << i;
    st.M[static_cast<std::size_t>(rs.positive_part(beta))] |= std::uint32_t{1} << i;
  }
  st.endpoint = st.prefixes.back();
  return st;
}

// All 2^r galleries of a word with their statistics.
class GallerySet {
 public:
  GallerySet(const RootSystem& rs, Word word, int max_length = kMaxSheafLength) : rs_(&rs), word_(std::move(word)) {
    validate_word(rs, word_, max_length);
    const std::uint32_t n = std::uint32_t{1} << word_.size();
    stats_.reserve(n);
    for (std::uint32_t b = 0; b < n; ++b) stats_.push_back(gallery_stats(rs, word_, {b, length()}));
    for (std::uint32_t b = 0; b < n; ++b) fibres_[stats_[b].endpoint.index].push_back({b, length()});
    for (auto& [x, gs] : fibres_) std::sort(gs.begin(), gs.end(), [&](Gallery a, Gallery b) { return fibre_less(a, b); });
  }

  const RootSystem& root_system() const { return *rs_; }
  const Word& word() const { return word_; }
  int length() const { return static_cast<int>(word_.size()); }
  std::size_t size() const { return stats_.size(); }
  Gallery gallery(std::uint32_t bits) const { return {bits, length()}; }
  const GalleryStats& stats(Gallery g) const { return stats_[g.bits]; }
  std::vector<Gallery> all() const {
    std::vector<Gallery> v;
    for (std::uint32_t b = 0; b < size(); ++b) v.push_back(gallery(b));
    return v;
  }

  // pi(Gamma), in group enumeration order (nondecreasing length).
  std::vector<WeylElement> endpoints() const {
    std::vector<WeylElement> v;
    for (const auto& [x, gs] : fibres_) v.push_back({x});
    return v;
  }
  bool in_image(WeylElement x) const { return fibres_.count(x.index) != 0; }
  // Gamma_x sorted by the fibre order (a total order on each fibre).
  const std::vector<Gallery>& fibre(WeylElement x) const {
    static const std::vector<Gallery> empty;
    auto it = fibres_.find(x.index);
    return it == fibres_.end() ? empty : it->second;
  }

  // delta lexleq gamma: at the first differing prefix delta's is Bruhat-smaller.
  bool lexleq(Gallery d, Gallery g) const {
    const auto& pd = stats(d).prefixes;
    const auto& pg = stats(g).prefixes;
    for (int i = 1; i <= length(); ++i)
      if (pd[static_cast<std::size_t>(i)] != pg[static_cast<std::size_t>(i)])
        return rs_->bruhat_lt(pd[static_cast<std::size_t>(i)], pg[static_cast<std::size_t>(i)]);
    return true;
  }

  // delta < gamma: some prefix of delta is Bruhat-smaller and all later prefixes agree.
  bool fibre_less(Gallery d, Gallery g) const {
    const auto& pd = stats(d).prefixes;
    const auto& pg = stats(g).prefixes;
    for (int i = length(); i >= 0; --i)
      if (pd[static_cast<std::size_t>(i)] != pg[static_cast<std::size_t>(i)])
        return rs_->bruhat_lt(pd[static_cast<std::size_t>(i)], pg[static_cast<std::size_t>(i)]);
    return false;
  }

  std::vector<Gallery> lex_sorted() const {
    auto v = all();
    std::stable_sort(v.begin(), v.end(), [&](Gallery a, Gallery b) { return a != b && lexleq(a, b); });
    return v;
  }

  // Partition of Gamma into ~_alpha classes, each sorted by bits.
  std::vector<std::vector<Gallery>> sim_classes(int alpha) const {
    std::map<std::uint32_t, std::vector<Gallery>> classes;
    for (std::uint32_t b = 0; b < size(); ++b) {
      const std::uint32_t m = stats_[b].M[static_cast<std::size_t>(alpha)];
      classes[b & ~m].push_back(gallery(b));
    }
    std::vector<std::vector<Gallery>> out;
    for (auto& [key, cls] : classes) {
      const std::uint32_t m = stats(cls.front()).M[static_cast<std::size_t>(alpha)];
      for (Gallery g : cls)
        if (stats(g).M[static_cast<std::size_t>(alpha)] != m)
          throw InvariantViolation("M_alpha not constant on a ~alpha class at " + g.to_string());
      if (cls.size() != (std::size_t{1} << std::popcount(m)))
        throw InvariantViolation("~alpha class has wrong size at " + cls.front().to_string());
      out.push_back(std::move(cls));
    }
    return out;
  }

  // The ~_alpha class of g.
  std::vector<Gallery> sim_class(Gallery g, int alpha) const {
    const std::uint32_t m = stats(g).M[static_cast<std::size_t>(alpha)];
    std::vector<Gallery> out;
    for (std::uint32_t sub = m;; sub = (sub - 1) & m) {
      out.push_back(gallery((g.bits & ~m) | sub));
      if (sub == 0) break;
    }
    std::sort(out.begin(), out.end(), [](Gallery a, Gallery b) { return a.bits < b.bits; });
    return out;
  }

  // Toggles the last alpha-wall; the endpoint moves to s_alpha pi(g).
  Gallery fold_end(Gallery g, int alpha) const {
    const std::uint32_t m = stats(g).M[static_cast<std::size_t>(alpha)];
    if (m == 0) throw ConfigError("fold_end: gallery " + g.to_string() + " has no wall on the given root");
    const int top = 31 - std::countl_zero(m);
    Gallery f = g.toggled(top);
    const WeylElement expect = rs_->multiply(rs_->reflection(alpha), stats(g).endpoint);
    if (stats(f).endpoint != expect) throw InvariantViolation("fold_end: endpoint is not s_alpha pi at " + g.to_string());
    if (stats(f).M[static_cast<std::size_t>(alpha)] != m) throw InvariantViolation("fold_end: M_alpha changed at " + g.to_string());
    return f;
  }

 private:
  const RootSystem* rs_;
  Word word_;
  std::vector<GalleryStats> stats_;
  std::map<int, std::vector<Gallery>> fibres_;
};

struct CountingReport {
  bool ok = true;
  std::size_t words = 0;
  std::size_t galleries = 0;
  std::string failure;
};

namespace detail {

// Depth-first check over a trie of words: every node is a word, and carries
// the incremental state of all its galleries.
struct CountingState {
  int elem = 0;
  std::uint32_t J = 0;
  int j_minus_d = 0;
  std::uint32_t seen = 0;     // per root: some alpha-wall occurred
  std::uint32_t last_j = 0;   // per root: the latest alpha-wall was load-bearing
};

class CountingChecker {
 public:
  CountingChecker(const RootSystem& rs, CountingReport& report) : rs_(rs), report_(report) {
    if (rs.num_positive_roots() > 32) throw ConfigError("check_counting: too many roots");
  }

  // Extends each state by letter s; returns false on failure.
  bool extend(const std::vector<CountingState>& in, int s, int pos, const Word& word, std::vector<CountingState>& out) {
    out.clear();
    out.reserve(in.size() * 2);
    const int neg = rs_.negate(rs_.simple_root(s));
    for (int c = 0; c < 2; ++c)
      for (std::size_t g = 0; g < in.size(); ++g) {
        CountingState st = in[g];
        const WeylElement prev{st.elem};
        const WeylElement cur = c ? rs_.right_multiply_simple(prev, s) : prev;
        const int beta = rs_.act_root(cur, neg);
        const int tilde = rs_.act_root(prev, neg);
        const bool in_j = rs_.is_positive(beta);
        const bool in_d = rs_.is_positive(tilde);
        if ((tilde == beta) == static_cast<bool>(c))
          return fail(word, g | (std::size_t(c) << pos), "tilde wall sign rule", -1);
        const std::uint32_t a = std::uint32_t{1} << rs_.positive_part(beta);
        if ((st.seen & a) && static_cast<bool>(st.last_j & a) != in_d)
          return fail(word, g | (std::size_t(c) << pos), "alternation of alpha-walls", rs_.positive_part(beta));
        st.seen |= a;
        st.last_j = in_j ? (st.last_j | a) : (st.last_j & ~a);
        st.elem = cur.index;
        if (in_j) st.J |= std::uint32_t{1} << pos;
        st.j_minus_d += int(in_j) - int(in_d);
        out.push_back(st);
      }
    return true;
  }

  bool check_level(const std::vector<CountingState>& states, const Word& word) {
    ++report_.words;
    report_.galleries += states.size();
    std::vector<bool> hit(states.size(), false);
    for (std::size_t g = 0; g < states.size(); ++g) {
      const auto& st = states[g];
      const WeylElement x{st.elem};
      if (st.j_minus_d != rs_.length(x)) return fail(word, g, "#J - #D = l(pi)", -1);
      if (st.J >= states.size() || hit[st.J]) return fail(word, g, "J is a bijection onto subsets", -1);
      hit[st.J] = true;
      const WeylElement xi = rs_.inverse(x);
      for (int k = 0; k < rs_.num_positive_roots(); ++k) {
        if (!(st.seen >> k & 1U)) continue;
        const bool down = !rs_.is_positive(rs_.act_root(xi, k));  // s_a x < x
        if (static_cast<bool>(st.last_j >> k & 1U) != down) return fail(word, g, "last alpha-wall load-bearing iff s_alpha pi < pi", k);
      }
    }
    return true;
  }

  bool fail(const Word& word, std::size_t bits, const std::string& what, int root) {
    report_.ok = false;
    Gallery g{static_cast<std::uint32_t>(bits), static_cast<int>(word.size())};
    report_.failure = what + " failed for word (" + word_to_string(word) + "), gallery " + g.to_string();
    if (root >= 0) report_.failure += ", root index " + std::to_string(root);
    return false;
  }

 private:
  const RootSystem& rs_;
  CountingReport& report_;
};

}  // namespace detail

// #J - #D = l(pi), alternation along alpha-walls, last-wall rule and the
// J-bijection, for all galleries of one word.
inline CountingReport check_counting(const RootSystem& rs, const Word& word) {
  validate_word(rs, word);
  CountingReport rep;
  detail::CountingChecker chk(rs, rep);
  std::vector<detail::CountingState> cur(1), next;
  Word prefix;
  for (std::size_t i = 0; i < word.size(); ++i) {
    prefix.push_back(word[i]);
    if (!chk.extend(cur, word[i], static_cast<int>(i), prefix, next)) return rep;
    cur.swap(next);
  }
  rep.words = 0;
  chk.check_level(cur, word);
  return rep;
}

// The same checks for every word of length <= max_length.
inline CountingReport check_counting_all_words(const RootSystem& rs, int max_length) {
  if (max_length > kMaxEnumerationLength) throw ConfigError("check_counting_all_words: length exceeds envelope");
  CountingReport rep;
  detail::CountingChecker chk(rs, rep);
  std::vector<std::vector<detail::CountingState>> levels(static_cast<std::size_t>(max_length) + 1);
  levels[0].resize(1);
  Word word;
  auto rec = [&](auto&& self, int depth) -> bool {
    if (!chk.check_level(levels[static_cast<std::size_t>(depth)], word)) return false;
    if (depth == max_length) return true;
    for (int s = 0; s < rs.rank(); ++s) {
      word.push_back(s);
      if (!chk.extend(levels[static_cast<std::size_t>(depth)], s, depth, word, levels[static_cast<std::size_t>(depth) + 1])) return false;
      if (!self(self, depth + 1)) return false;
      word.pop_back();
    }
    return true;
  };
  rec(rec, 0);
  return rep;
}

}  // namespace gallerysheaf
