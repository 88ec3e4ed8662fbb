#include <gtest/gtest.h>

#include <random>

#include "legevo/analysis.hpp"
#include "oracles.hpp"

using namespace legevo;

namespace {

std::vector<double> draw(std::mt19937_64& rng, std::size_t n, bool ties) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_int_distribution<int> k(0, 3);
  std::vector<double> v(n);
  for (auto& x : v) x = ties ? k(rng) : z(rng);
  return v;
}

GroupSample cloud(std::mt19937_64& rng, const Eigen::Vector2d& mean, const Eigen::Vector2d& spread,
                  int n) {
  std::normal_distribution<double> z(0.0, 1.0);
  GroupSample g;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v(2);
    v << mean.x() + spread.x() * z(rng), mean.y() + spread.y() * z(rng);
    g.vectors.push_back(v);
  }
  return g;
}

}  // namespace

TEST(Lda, SeparatesAlongTheInformativeAxis) {
  std::mt19937_64 rng(1);
  // Groups differ in x only; y has large shared noise.
  const auto a = cloud(rng, {0.0, 0.0}, {0.1, 1.0}, 50);
  const auto b = cloud(rng, {1.0, 0.0}, {0.1, 1.0}, 50);
  const auto r = lda_project(a, b);
  EXPECT_NEAR(r.direction.norm(), 1.0, 1e-12);
  EXPECT_GT(std::abs(r.direction[0]), 0.99);
  ASSERT_EQ(r.projected_a.size(), 50u);
  ASSERT_EQ(r.projected_b.size(), 50u);
  EXPECT_LT(mann_whitney_u(r.projected_a, r.projected_b).p, 1e-6);
}

TEST(Lda, IdenticalGroupsFallBackToFirstAxis) {
  GroupSample a;
  for (double v : {0.0, 1.0, 2.0}) a.vectors.push_back(Eigen::Vector2d(v, 2 * v));
  const auto r = lda_project(a, a);
  EXPECT_EQ(r.direction, Eigen::VectorXd(Eigen::Vector2d(1.0, 0.0)));
  EXPECT_EQ(r.projected_a, r.projected_b);
}

TEST(Lda, DegenerateScatterStillGivesADirection) {
  // Every sample equal within its group: zero scatter, epsilon keeps it solvable.
  GroupSample a, b;
  for (int i = 0; i < 4; ++i) {
    a.vectors.push_back(Eigen::Vector2d(0.0, 0.0));
    b.vectors.push_back(Eigen::Vector2d(0.0, 1.0));
  }
  const auto r = lda_project(a, b);
  EXPECT_NEAR(std::abs(r.direction[1]), 1.0, 1e-9);
}

TEST(Lda, RejectsTinyGroups) {
  GroupSample a, b;
  a.vectors.push_back(Eigen::Vector2d(0.0, 0.0));
  b.vectors = {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(2.0, 0.0)};
  EXPECT_THROW(lda_project(a, b), std::domain_error);
}

TEST(MannWhitney, CompleteSeparation) {
  const std::vector<double> x{1, 2, 3}, y{4, 5, 6};
  const auto r = mann_whitney_u(x, y);
  EXPECT_EQ(r.u, 0.0);
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.p, 0.1, 1e-12);  // 2 of the 20 splits are as extreme
}

TEST(MannWhitney, IdenticalMultisets) {
  const std::vector<double> x{1, 2, 2, 3, 5};
  const auto r = mann_whitney_u(x, x);
  EXPECT_DOUBLE_EQ(r.u, 12.5);
  EXPECT_NEAR(r.p, 1.0, 1e-12);
}

TEST(MannWhitney, LargeSamplesUseNormalApproximation) {
  std::mt19937_64 rng(2);
  const auto x = draw(rng, 30, false);
  const auto y = draw(rng, 30, false);
  const auto r = mann_whitney_u(x, y);
  EXPECT_FALSE(r.exact);
  EXPECT_GE(r.p, 0.0);
  EXPECT_LE(r.p, 1.0);
  const double ux = oracle::u_by_pairs(x, y);
  EXPECT_DOUBLE_EQ(r.u, std::min(ux, 900.0 - ux));
}

TEST(MannWhitney, NormalApproximationOnShiftedSamples) {
  std::mt19937_64 rng(3);
  auto x = draw(rng, 40, false);
  auto y = draw(rng, 40, false);
  for (auto& v : y) v += 2.0;
  EXPECT_LT(mann_whitney_u(x, y).p, 1e-8);
}

TEST(MannWhitney, ExactMatchesEnumerationOracle) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> n(1, 7);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = draw(rng, n(rng), trial % 3 == 0);
    const auto y = draw(rng, n(rng), trial % 3 == 0);
    const auto r = mann_whitney_u(x, y);
    ASSERT_TRUE(r.exact);
    const double ux = oracle::u_by_pairs(x, y);
    ASSERT_DOUBLE_EQ(r.u, std::min(ux, x.size() * y.size() - ux)) << trial;
    ASSERT_NEAR(r.p, oracle::permutation_p(x, y), 1e-12) << trial;
  }
}

TEST(MannWhitney, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = draw(rng, 10, false);
    auto y = draw(rng, 12, false);
    const auto before = mann_whitney_u(x, y);
    for (auto* v : {&x, &y})
      for (auto& e : *v) e = std::exp(3.0 * e) + 7.0;
    const auto after = mann_whitney_u(x, y);
    EXPECT_DOUBLE_EQ(before.u, after.u);
    EXPECT_DOUBLE_EQ(before.p, after.p);
  }
}

TEST(MannWhitney, RejectsEmptySamples) {
  const std::vector<double> x{1.0}, none;
  EXPECT_THROW(mann_whitney_u(x, none), std::domain_error);
}

TEST(CliffsDelta, Examples) {
  const std::vector<double> a{1, 3}, b{2, 4}, c{5, 6};
  EXPECT_DOUBLE_EQ(cliffs_delta(a, b), -0.5);
  EXPECT_DOUBLE_EQ(cliffs_delta(c, a), 1.0);
  EXPECT_DOUBLE_EQ(cliffs_delta(a, c), -1.0);
  EXPECT_DOUBLE_EQ(cliffs_delta(a, a), 0.0);
}

TEST(CliffsDelta, MatchesPairCountAndIsAntisymmetric) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = draw(rng, 1 + trial % 9, trial % 2 == 0);
    const auto y = draw(rng, 1 + trial % 7, trial % 2 == 0);
    EXPECT_DOUBLE_EQ(cliffs_delta(x, y), oracle::cliffs_by_pairs(x, y));
    EXPECT_DOUBLE_EQ(cliffs_delta(x, y), -cliffs_delta(y, x));
  }
}

TEST(Holm, TwoTests) {
  const std::vector<double> p{0.01, 0.04};
  const auto adj = holm_correction(p);
  EXPECT_DOUBLE_EQ(adj[0], 0.02);
  EXPECT_DOUBLE_EQ(adj[1], 0.04);
}

TEST(Holm, KeepsInputOrderAndMonotonicity) {
  // Sorted: 0.01*3, max(0.02*2, 0.03), max(0.03, 0.04) -> 0.03, 0.04, 0.04.
  const std::vector<double> p{0.04, 0.01, 0.02};
  const auto adj = holm_correction(p);
  EXPECT_DOUBLE_EQ(adj[1], 0.03);
  EXPECT_DOUBLE_EQ(adj[2], 0.04);
  EXPECT_DOUBLE_EQ(adj[0], 0.04);
}

TEST(Holm, SingleValueUnchanged) {
  const std::vector<double> p{0.3};
  EXPECT_EQ(holm_correction(p), p);
}

TEST(Holm, AdjustedNeverBelowRawAndCappedAtOne) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(1 + trial % 10);
    for (auto& v : p) v = u(rng);
    const auto adj = holm_correction(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_GE(adj[i], p[i]);
      EXPECT_LE(adj[i], 1.0);
    }
  }
}

TEST(Holm, RejectsOutOfRange) {
  const std::vector<double> p{0.5, 1.5};
  EXPECT_THROW(holm_correction(p), std::domain_error);
}
