#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "legevo/kinematics.hpp"

using namespace legevo;

namespace {

LegGeometry shortest() { return LegGeometry::from_extensions(0.0, 0.0); }
LegGeometry longest() { return LegGeometry::from_extensions(0.025, 0.095); }

// Uniform point in the reach shell, slightly inside both boundaries.
Eigen::Vector3d reachable_point(const LegGeometry& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Vector3d dir(n(rng), n(rng), n(rng));
  dir.normalize();
  const double lo = min_reach(g) + 1e-6, hi = max_reach(g) - 1e-6;
  return dir * (lo + u(rng) * (hi - lo));
}

}  // namespace

TEST(Kinematics, FullExtensionLengths) {
  EXPECT_EQ(forward(shortest(), {}), Eigen::Vector3d(0, 0, -0.550));
  EXPECT_EQ(forward(longest(), {}), Eigen::Vector3d(0, 0, -0.670));
}

TEST(Kinematics, PositiveRollSwingsTowardPlusY) {
  const Eigen::Vector3d f = forward(shortest(), {std::numbers::pi / 2, 0, 0});
  EXPECT_NEAR(f.x(), 0.0, 1e-12);
  EXPECT_NEAR(f.y(), 0.550, 1e-12);
  EXPECT_NEAR(f.z(), 0.0, 1e-12);
}

TEST(Kinematics, ExtensionsOutsideTravelRejected) {
  EXPECT_THROW(LegGeometry::from_extensions(0.026, 0.0), std::domain_error);
  EXPECT_THROW(LegGeometry::from_extensions(0.0, -0.001), std::domain_error);
}

TEST(Kinematics, StraightDownInvertsToZero) {
  const LegGeometry g = LegGeometry::from_extensions(0.01, 0.05);
  const JointAngles q = inverse(g, {0, 0, -g.total()});
  EXPECT_NEAR(q.hip_roll, 0.0, 1e-9);
  EXPECT_NEAR(q.hip_pitch, 0.0, 1e-6);
  EXPECT_NEAR(q.knee_pitch, 0.0, 1e-6);
}

TEST(Kinematics, RoundTripOverSeededMorphologies) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> fe(0.0, 0.025), te(0.0, 0.095);
  double worst = 0.0;
  for (int m = 0; m < 50; ++m) {
    const LegGeometry g = LegGeometry::from_extensions(fe(rng), te(rng));
    for (int i = 0; i < 1000; ++i) {
      const Eigen::Vector3d target = reachable_point(g, rng);
      const JointAngles q = inverse(g, target);
      EXPECT_LE(q.knee_pitch, 0.0);
      worst = std::max(worst, (forward(g, q) - target).norm());
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Kinematics, BeyondReachThrowsWithNearestDistance) {
  const LegGeometry g = shortest();
  try {
    inverse(g, {0, 0, -(g.total() + 0.01)});
    FAIL() << "expected a reachability error";
  } catch (const ReachabilityError& e) {
    EXPECT_NEAR(e.distance(), g.total() + 0.01, 1e-12);
    EXPECT_NEAR(e.nearest_reachable(), g.total(), 1e-12);
  }
}

TEST(Kinematics, ReachableCases) {
  const LegGeometry g = shortest();
  EXPECT_FALSE(reachable(g, Eigen::Vector3d::Zero()));
  EXPECT_TRUE(reachable(g, {0, 0, -g.total()}));
}

TEST(Kinematics, ReachableAgreesWithInverse) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  const LegGeometry g = LegGeometry::from_extensions(0.012, 0.04);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d t(u(rng), u(rng), u(rng));
    bool solved = true;
    try {
      inverse(g, t);
    } catch (const ReachabilityError&) {
      solved = false;
    }
    EXPECT_EQ(reachable(g, t), solved);
  }
}

TEST(Kinematics, ReachShellMatchesDenseForwardSampling) {
  const LegGeometry g = LegGeometry::from_extensions(0.02, 0.03);
  double lo = 1e9, hi = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double knee = -kKneeLimit * i / 2000.0;
    const double d = forward(g, {0.1, 0.3, knee}).norm();
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  EXPECT_NEAR(lo, min_reach(g), 1e-9);
  EXPECT_NEAR(hi, max_reach(g), 1e-9);
}

TEST(Kinematics, ClampProjectsRadially) {
  const LegGeometry g = shortest();
  const Eigen::Vector3d far(0.3, 0.2, -0.9);
  const Eigen::Vector3d c = clamp_to_reach(g, far);
  EXPECT_NEAR(c.norm(), max_reach(g), 1e-12);
  EXPECT_NEAR(c.normalized().dot(far.normalized()), 1.0, 1e-12);
  const Eigen::Vector3d inside(0.05, 0.0, -0.4);
  EXPECT_EQ(clamp_to_reach(g, inside), inside);
}

TEST(Kinematics, ReconfigurationRunsSegmentsInParallel) {
  EXPECT_EQ(reconfigure_duration(shortest(), shortest()), 0.0);
  EXPECT_NEAR(reconfigure_duration(shortest(), longest()), 95.0, 1e-9);
  EXPECT_NEAR(reconfigure_duration(shortest(), LegGeometry::from_extensions(0.010, 0.0)), 10.0, 1e-9);
}
