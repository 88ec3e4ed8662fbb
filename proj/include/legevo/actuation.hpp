#pragma once

namespace legevo {

inline constexpr double kGravity = 9.81;

inline constexpr double kLowVoltage = 12.0;
inline constexpr double kHighVoltage = 14.8;

/// Operating line of one servo at a given supply voltage.
struct ServoSpec {
  double voltage = kHighVoltage;
  double no_load_speed = 0.0;  // rad/s
  double stall_torque = 0.0;   // N*m
};

struct ServoState {
  double angle = 0.0;      // achieved
  double commanded = 0.0;  // last command
};

/// Interpolates linearly between the 12 V and 14.8 V rows of the datasheet.
/// Throws std::domain_error outside that range.
ServoSpec spec_for_voltage(double voltage);

/// Speed-torque line: no_load_speed * max(0, 1 - load / stall_torque).
double max_speed(const ServoSpec& spec, double load);

/// Moves toward `commanded` by at most available * dt without overshoot.
ServoState step_tracking(const ServoState& state, double commanded, double dt, double available);

/// Quasi-static joint torque of a stance leg: its share of the body weight
/// times the horizontal lever arm. Throws std::domain_error for n_stance < 1.
double stance_load_torque(double total_mass, int n_stance, double lever_arm);

}  // namespace legevo
