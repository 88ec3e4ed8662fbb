#pragma once

// Seeded gait generators shared by the unit tests and the acceptance suite.

#include <random>

#include "legevo/genome.hpp"
#include "legevo/kinematics.hpp"

namespace fixtures {

/// Uniform feasible gait.
inline legevo::GaitParams random_gait(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    std::array<double, legevo::kGeneCount> g;
    for (auto& v : g) v = u(rng);
    const legevo::GaitParams p = legevo::decode(legevo::Genotype(g));
    if (legevo::is_feasible(p)) return p;
  }
}

/// Slow gait without wag: every servo stays far below its speed limit and the
/// body moves in a straight line at constant speed.
inline legevo::GaitParams perfect_tracking_gait(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  legevo::GaitParams p = random_gait(rng);
  p.step_length = 0.02 + 0.13 * u(rng);
  p.gait_frequency = 0.2 + 0.3 * u(rng);
  p.wag_x_amp = 0.0;
  p.wag_y_amp = 0.0;
  return p;
}

inline legevo::LegGeometry geometry(const legevo::GaitParams& p) {
  return legevo::LegGeometry::from_extensions(p.femur_ext, p.tibia_ext);
}

/// Closed-form crawl speed in m/min: stance feet cover step_length in
/// (1 - lift_duration) of each period.
inline double crawl_speed(const legevo::GaitParams& p) {
  return 60.0 * p.step_length * p.gait_frequency / (1.0 - p.lift_duration);
}

}  // namespace fixtures
