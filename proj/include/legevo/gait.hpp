#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "legevo/genome.hpp"

namespace legevo {

/// Leg indices. The order is also the order of LegSchedule::phase_offsets.
enum Leg : int { kFrontLeft = 0, kFrontRight = 1, kHindLeft = 2, kHindRight = 3 };
inline constexpr int kLegCount = 4;

/// Sagittal-plane foot path of one leg: x forward, z up, ground at z = 0.
struct FootPath {
  Eigen::Vector2d stance_start;  // (+L/2, 0), touch-down point
  Eigen::Vector2d stance_end;    // (-L/2, 0), lift-off point
  std::vector<Eigen::Vector2d> swing_controls;
};

struct LegSchedule {
  std::array<double, kLegCount> phase_offsets{};
  double lift_duration = 0.0;
};

/// Where the gait places the feet relative to each hip. Shared by every
/// morphology, so requested foot positions never depend on leg lengths.
struct GaitFrame {
  double standing_height = 0.36;  // m, hip axis above ground
  double lateral_offset = 0.0;
};

FootPath build_foot_path(const GaitParams& p);

/// Uniform Catmull-Rom interpolation through `controls`. Open ends use phantom
/// points reflected about the first and last control point. u in [0, 1].
Eigen::Vector2d catmull_rom(std::span<const Eigen::Vector2d> controls, double u);

/// Crawl sequence FL -> HR -> FR -> HL, one quarter period apart.
LegSchedule crawl_schedule(double lift_duration);

/// Phase of one leg within its own cycle; swing occupies [0, lift_duration).
double leg_phase(double global_phase, int leg_index, const LegSchedule& schedule);

/// Body sway at global_phase: x at twice the gait frequency, y at the gait
/// frequency, both shifted by wag_phase.
Eigen::Vector2d wag_offset(const GaitParams& p, double global_phase);

/// Foot position relative to its hip, in body-aligned axes. The body is
/// displaced by the wag, so the foot moves by the negated wag offset.
Eigen::Vector3d sample_foot_position(const FootPath& path, const GaitParams& p, double leg_phase,
                                     double global_phase, const GaitFrame& frame = {});

}  // namespace legevo
