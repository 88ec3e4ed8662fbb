#include <gtest/gtest.h>

#include <cmath>

#include "legevo/actuation.hpp"

using namespace legevo;

TEST(Actuation, DatasheetEndpoints) {
  const ServoSpec hi = spec_for_voltage(14.8);
  EXPECT_NEAR(hi.no_load_speed, 8.168, 1e-3);
  EXPECT_DOUBLE_EQ(hi.stall_torque, 7.3);
  const ServoSpec lo = spec_for_voltage(12.0);
  EXPECT_NEAR(lo.no_load_speed, 6.597, 1e-3);
  EXPECT_DOUBLE_EQ(lo.stall_torque, 6.0);
}

TEST(Actuation, MidpointInterpolation) {
  const ServoSpec mid = spec_for_voltage(13.4);
  EXPECT_NEAR(mid.no_load_speed, 7.383, 1e-3);
  EXPECT_NEAR(mid.stall_torque, 6.65, 1e-12);
}

TEST(Actuation, VoltageOutsideDatasheetRejected) {
  EXPECT_THROW(spec_for_voltage(11.9), std::domain_error);
  EXPECT_THROW(spec_for_voltage(15.0), std::domain_error);
}

TEST(Actuation, MonotoneInVoltage) {
  ServoSpec prev = spec_for_voltage(12.0);
  for (double v = 12.1; v <= 14.8; v += 0.1) {
    const ServoSpec s = spec_for_voltage(v);
    EXPECT_GT(s.no_load_speed, prev.no_load_speed);
    EXPECT_GT(s.stall_torque, prev.stall_torque);
    prev = s;
  }
}

TEST(Actuation, SpeedTorqueLine) {
  const ServoSpec hi = spec_for_voltage(14.8);
  EXPECT_DOUBLE_EQ(max_speed(hi, 0.0), hi.no_load_speed);
  EXPECT_EQ(max_speed(hi, hi.stall_torque), 0.0);
  EXPECT_EQ(max_speed(hi, 2 * hi.stall_torque), 0.0);
  const ServoSpec lo = spec_for_voltage(12.0);
  EXPECT_NEAR(max_speed(lo, 3.0), 3.299, 1e-3);
  double prev = max_speed(lo, 0.0);
  for (double load = 0.1; load < 8.0; load += 0.1) {
    EXPECT_LE(max_speed(lo, load), prev);
    prev = max_speed(lo, load);
  }
}

TEST(Actuation, TrackingSaturatesWithoutOvershoot) {
  ServoState s{0.0, 0.0};
  EXPECT_EQ(step_tracking(s, 0.0, 0.01, 2.0).angle, 0.0);
  s = step_tracking({0.0, 0.0}, 0.1, 0.01, 2.0);
  EXPECT_NEAR(0.1 - s.angle, 0.08, 1e-15);
  s = step_tracking({0.0, 0.0}, 0.01, 0.01, 2.0);
  EXPECT_EQ(s.angle, 0.01);
  s = step_tracking({0.0, 0.0}, -0.5, 0.01, 2.0);
  EXPECT_NEAR(s.angle, -0.02, 1e-15);
}

TEST(Actuation, TrackingIsTimeConsistent) {
  const ServoState one = step_tracking({0.2, 0.0}, 1.0, 0.02, 3.0);
  const ServoState two = step_tracking(step_tracking({0.2, 0.0}, 1.0, 0.01, 3.0), 1.0, 0.01, 3.0);
  EXPECT_NEAR(one.angle, two.angle, 1e-15);
}

TEST(Actuation, SlowTriangleIsFollowedExactly) {
  // Command slope 1 rad/s against a 6.6 rad/s limit.
  ServoState s{0.0, 0.0};
  const double dt = 0.001;
  for (int i = 1; i <= 4000; ++i) {
    const double t = i * dt;
    const double cmd = std::fmod(t, 2.0) < 1.0 ? std::fmod(t, 2.0) : 2.0 - std::fmod(t, 2.0);
    s = step_tracking(s, cmd, dt, max_speed(spec_for_voltage(12.0), 0.0));
    ASSERT_NEAR(s.angle, cmd, 1e-12) << "t = " << t;
  }
}

TEST(Actuation, StanceLoadShare) {
  EXPECT_EQ(stance_load_torque(5.5, 4, 0.0), 0.0);
  EXPECT_NEAR(stance_load_torque(5.5, 4, 0.1), 1.349, 1e-3);
  EXPECT_NEAR(stance_load_torque(5.5, 3, 0.1), 1.799, 1e-3);
  EXPECT_THROW(stance_load_torque(5.5, 0, 0.1), std::domain_error);
}
