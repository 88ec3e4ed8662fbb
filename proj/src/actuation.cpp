#include "legevo/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace legevo {

namespace {

constexpr double rpm_to_rad_s(double rpm) { return rpm * 2.0 * std::numbers::pi / 60.0; }

// MX-64AT datasheet rows.
constexpr ServoSpec kLow{kLowVoltage, rpm_to_rad_s(63.0), 6.0};
constexpr ServoSpec kHigh{kHighVoltage, rpm_to_rad_s(78.0), 7.3};

}  // namespace

ServoSpec spec_for_voltage(double voltage) {
  if (!(voltage >= kLowVoltage && voltage <= kHighVoltage)) {
    throw std::domain_error("servo voltage must lie in [12.0, 14.8] V");
  }
  if (voltage == kLowVoltage) return kLow;
  if (voltage == kHighVoltage) return kHigh;
  const double w = (voltage - kLowVoltage) / (kHighVoltage - kLowVoltage);
  return {voltage, kLow.no_load_speed + w * (kHigh.no_load_speed - kLow.no_load_speed),
          kLow.stall_torque + w * (kHigh.stall_torque - kLow.stall_torque)};
}

double max_speed(const ServoSpec& spec, double load) {
  return spec.no_load_speed * std::max(0.0, 1.0 - load / spec.stall_torque);
}

ServoState step_tracking(const ServoState& state, double commanded, double dt, double available) {
  const double reach = available * dt;
  const double gap = commanded - state.angle;
  ServoState next{state.angle, commanded};
  if (std::abs(gap) <= reach) {
    next.angle = commanded;
  } else {
    next.angle += std::copysign(reach, gap);
  }
  return next;
}

double stance_load_torque(double total_mass, int n_stance, double lever_arm) {
  if (n_stance < 1) throw std::domain_error("stance load needs at least one supporting leg");
  return total_mass * kGravity / static_cast<double>(n_stance) * lever_arm;
}

}  // namespace legevo
