#include <gtest/gtest.h>

#include "gallerysheaf/momentsheaf.hpp"

using namespace gallerysheaf;

namespace {

std::vector<std::string> names(const RootSystem& rs, const std::vector<WeylElement>& v) {
  std::vector<std::string> out;
  for (WeylElement x : v) out.push_back(rs.element_name(x));
  return out;
}

// Single edge s -> e on A1 with the given stalk degrees and lower map.
MomentSheaf a1_sheaf(const RootSystem& rs, std::vector<int> top, std::vector<int> bottom, std::vector<std::vector<Polynomial>> map) {
  MomentSheaf s{&rs, "test sheaf", 2, {}, {}, nullptr};
  const int e = rs.identity().index, sx = rs.simple_reflection(0).index;
  if (!top.empty()) s.stalks[sx] = std::move(top);
  if (!bottom.empty()) s.stalks[e] = std::move(bottom);
  if (s.stalks.size() == 2) s.edges.push_back({sx, e, 0, std::move(map)});
  return s;
}

}  // namespace

TEST(BuildSheaf, SupportsAndStalks) {
  auto a1 = RootSystem::build('A', 1);
  FibreTower t1(a1, {0});
  auto s1 = build_sheaf(t1);
  EXPECT_EQ(names(a1, s1.support()), (std::vector<std::string>{"e", "s1"}));
  EXPECT_EQ(s1.edges.size(), 1u);
  EXPECT_EQ(s1.total_rank(), 2u);

  auto a2 = RootSystem::build('A', 2);
  FibreTower t2(a2, {0, 1});
  auto s2 = build_sheaf(t2);
  EXPECT_EQ(names(a2, s2.support()), (std::vector<std::string>{"e", "s1", "s2", "s1s2"}));
  for (WeylElement x : s2.support()) EXPECT_EQ(s2.stalk_rank(x.index), 1u);

  FibreTower t3(a2, {0, 1, 0});
  auto s3 = build_sheaf(t3);
  std::vector<std::size_t> ranks;
  for (WeylElement x : s3.support()) ranks.push_back(s3.stalk_rank(x.index));
  EXPECT_EQ(ranks, (std::vector<std::size_t>{2, 2, 1, 1, 1, 1}));
  EXPECT_EQ(s3.stalk_rank(a2.simple_reflection(0).index), 2u);
}

TEST(GlobalSections, SmallWords) {
  auto a1 = RootSystem::build('A', 1);
  FibreTower t1(a1, {0});
  auto g1 = global_sections(build_sheaf(t1));
  EXPECT_TRUE(g1.report.ok) << g1.report.first_failure();
  EXPECT_EQ(g1.generators.degrees(), (std::vector<int>{0, 1}));

  auto a2 = RootSystem::build('A', 2);
  FibreTower t2(a2, {0, 1, 0});
  auto g2 = global_sections(build_sheaf(t2));
  EXPECT_TRUE(g2.report.ok) << g2.report.first_failure();
  EXPECT_EQ(g2.generators.size(), 8u);
  EXPECT_EQ(g2.generators.counts_by_degree(), (std::map<int, int>{{0, 1}, {1, 3}, {2, 3}, {3, 1}}));
}

TEST(GlobalSections, AgreeWithCongruencesOnSeveralTypes) {
  struct Case {
    char type;
    int rank;
    Word word;
  };
  for (const auto& c : std::vector<Case>{{'A', 1, {0, 0, 0, 0}}, {'B', 2, {0, 1, 0, 1}}, {'G', 2, {0, 1, 0}}, {'A', 2, {1, 1, 0, 1}}, {'A', 3, {0, 2, 1}}}) {
    auto rs = RootSystem::build(c.type, c.rank);
    FibreTower tw(rs, c.word);
    auto g = global_sections(build_sheaf(tw));
    EXPECT_TRUE(g.report.ok) << rs.name() << " " << g.report.first_failure();
  }
}

TEST(Purity, WordSheavesArePure) {
  struct Case {
    char type;
    int rank;
    Word word;
  };
  for (const auto& c : std::vector<Case>{{'A', 1, {0}}, {'A', 2, {0, 1, 0}}, {'B', 2, {0, 1, 0, 1}}, {'A', 2, {0, 0, 1}}}) {
    auto rs = RootSystem::build(c.type, c.rank);
    FibreTower tw(rs, c.word);
    const auto r = purity_check(build_sheaf(tw));
    EXPECT_TRUE(r.ok) << rs.name() << " " << r.first_failure();
  }
}

TEST(Purity, DetectsAMissingEdgeMap) {
  auto rs = RootSystem::build('A', 1);
  const auto bad = a1_sheaf(rs, {0}, {0}, {{Polynomial(1)}});
  const auto r = purity_check(bad);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.first_failure().find("P3.b"), std::string::npos) << r.first_failure();
  const auto good = a1_sheaf(rs, {0}, {0}, {{Polynomial::constant(1, 1)}});
  EXPECT_TRUE(purity_check(good).ok);
}

TEST(Purity, DetectsANonCanonicalEdgeMap) {
  auto rs = RootSystem::build('A', 1);
  const auto bad = a1_sheaf(rs, {0}, {1}, {{Polynomial::variable(1, 0)}});
  const auto r = purity_check(bad);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.first_failure().find("P2"), std::string::npos);
}

TEST(BMSheaf, SmallCases) {
  auto a1 = RootSystem::build('A', 1);
  auto be = bm_sheaf(a1, a1.identity(), 0);
  EXPECT_EQ(names(a1, be.support()), (std::vector<std::string>{"e"}));
  auto bs = bm_sheaf(a1, a1.simple_reflection(0), 1);
  EXPECT_EQ(bs.graded_rank(0), (std::map<int, int>{{0, 1}}));
  EXPECT_EQ(bs.graded_rank(1), (std::map<int, int>{{0, 1}}));
  auto a2 = RootSystem::build('A', 2);
  auto bw = bm_sheaf(a2, a2.longest_element(), 3);
  EXPECT_EQ(bw.support().size(), 6u);
  for (WeylElement x : bw.support()) EXPECT_EQ(bw.stalk_rank(x.index), 1u);
}

TEST(BMSheaf, PureWithSupportBelowTopAndFullSections) {
  for (char t : {'A', 'B', 'G'}) {
    auto rs = RootSystem::build(t, 2);
    for (std::size_t i = 0; i < rs.order(); ++i) {
      const WeylElement x = rs.element(i);
      auto b = bm_sheaf(rs, x, rs.length(x));
      EXPECT_EQ(b.graded_rank(x.index), (std::map<int, int>{{0, 1}}));
      for (WeylElement y : b.support()) EXPECT_TRUE(rs.bruhat_leq(y, x));
      const auto r = purity_check(b);
      EXPECT_TRUE(r.ok) << b.label << " " << r.first_failure();
      EXPECT_EQ(global_sections(b).generators.size(), b.total_rank()) << b.label;
    }
  }
}

// s2 s1 s3 s2 in A3 has a singular Schubert variety with KL polynomial 1 + q at e.
TEST(BMSheaf, SingularSchubertVariety) {
  auto a3 = RootSystem::build('A', 3);
  WeylElement x = a3.identity();
  for (int i : {1, 0, 2, 1}) x = a3.right_multiply_simple(x, i);
  auto b = bm_sheaf(a3, x, a3.length(x));
  EXPECT_EQ(b.graded_rank(a3.identity().index), (std::map<int, int>{{0, 1}, {1, 1}}));
  EXPECT_TRUE(purity_check(b).ok);
}

TEST(Decompose, SmallWords) {
  auto a1 = RootSystem::build('A', 1);
  FibreTower t1(a1, {0});
  auto d1 = decompose(build_sheaf(t1));
  EXPECT_TRUE(d1.ok);
  EXPECT_EQ(decomposition_string(a1, d1), "B(s1)");
  FibreTower t2(a1, {0, 0});
  auto d2 = decompose(build_sheaf(t2));
  EXPECT_TRUE(d2.ok);
  EXPECT_EQ(decomposition_string(a1, d2), "B(s1) ⊕ B(s1)⟨1⟩");
  auto a2 = RootSystem::build('A', 2);
  FibreTower t3(a2, {0, 1, 0});
  auto d3 = decompose(build_sheaf(t3));
  EXPECT_TRUE(d3.ok);
  EXPECT_TRUE(d3.residual.empty());
  EXPECT_EQ(decomposition_string(a2, d3), "B(w0) ⊕ B(s1)⟨1⟩");
}

TEST(Decompose, ReportsNegativeResidual) {
  auto rs = RootSystem::build('A', 1);
  const auto s = a1_sheaf(rs, {0}, {}, {});
  const auto d = decompose(s);
  EXPECT_FALSE(d.ok);
  EXPECT_NE(d.failure.find("negative"), std::string::npos);
}

TEST(Decompose, ReducedWordsContainTheirSchubertSheafOnce) {
  struct Case {
    char type;
    int rank;
    Word word;
  };
  for (const auto& c : std::vector<Case>{{'A', 2, {0, 1}}, {'A', 2, {1, 0, 1}}, {'B', 2, {0, 1, 0, 1}}, {'G', 2, {0, 1, 0, 1}}, {'A', 3, {0, 1, 2, 1}}}) {
    auto rs = RootSystem::build(c.type, c.rank);
    FibreTower tw(rs, c.word);
    const auto d = decompose(build_sheaf(tw));
    ASSERT_TRUE(d.ok) << d.failure;
    const WeylElement top = tw.galleries().stats(tw.galleries().gallery((1u << c.word.size()) - 1)).endpoint;
    ASSERT_EQ(rs.length(top), static_cast<int>(c.word.size()));
    int mult = 0;
    for (const auto& t : d.terms)
      if (t.x == top && t.shift == 0) mult += t.multiplicity;
    EXPECT_EQ(mult, 1) << rs.name() << " " << word_to_string(c.word);
  }
}
