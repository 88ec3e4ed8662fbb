#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "legevo/actuation.hpp"
#include "legevo/fitness.hpp"
#include "legevo/gait.hpp"
#include "legevo/genome.hpp"
#include "legevo/kinematics.hpp"
#include "legevo/trace.hpp"

namespace legevo {

/// Rigid body layout of the robot: hip mounts on a 480 x 300 mm frame.
struct BodyLayout {
  std::array<Eigen::Vector3d, kLegCount> hips{{
      {0.24, 0.15, 0.0},    // front left
      {0.24, -0.15, 0.0},   // front right
      {-0.24, 0.15, 0.0},   // hind left
      {-0.24, -0.15, 0.0},  // hind right
  }};
  double mass = 5.5;  // kg
};

struct EvalConfig {
  double voltage = kHighVoltage;
  double control_rate = 100.0;  // Hz
  double trace_rate = 100.0;    // Hz, must divide control_rate
  double target_distance = 1.5;  // m per direction
  double timeout = 15.0;         // s per direction
  double actuation_noise_std = 0.002;  // rad, per joint, stationary std
  /// Time constant of the smooth joint noise; 0 gives white noise.
  double noise_correlation_time = 0.25;  // s
  double slip_threshold = 0.005;       // m
  /// A scheduled-stance foot counts as landed once it is this close to the ground.
  double contact_tolerance = 0.005;
  /// Stability assigned to a direction in which the robot fell.
  double fall_penalty = 0.5;
  std::uint64_t seed = 0;
  StabilityWeights weights{};
  GaitFrame frame{};
  BodyLayout body{};

  void validate() const;
};

struct EvaluationResult {
  double speed = 0.0;      // m/min
  double stability = 0.0;  // <= 0
  double distance_forward = 0.0;
  double distance_back = 0.0;
  double duration_forward = 0.0;
  double duration_back = 0.0;
  bool fell = false;
  int slip_count = 0;
};

class ConstraintError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Walks one pass. direction = +1 walks forward, -1 replays the same path
/// mirrored front-to-back. Ends at target_distance of net progress, at the
/// timeout, or once fewer than three feet support the body (trace.fell).
Trace simulate_pass(const GaitParams& p, const LegGeometry& geom, const EvalConfig& cfg,
                    int direction);

/// Forward pass then reverse pass; the result averages both directions.
/// Throws ConstraintError for gaits above the speed cap.
EvaluationResult evaluate(const GaitParams& p, const LegGeometry& geom, const EvalConfig& cfg);

/// n evaluations with seeds cfg.seed + i.
std::vector<EvaluationResult> reevaluate(const GaitParams& p, const LegGeometry& geom,
                                         const EvalConfig& cfg, int n = 10);

/// Vertical forces on the supporting feet that hold `weight` in static
/// equilibrium with the centre of mass at `com` (horizontal coordinates).
/// Minimum-norm solution restricted to non-negative forces; when the centre of
/// mass lies outside the support, the nearest edge or foot carries the load.
std::vector<double> distribute_weight(const std::vector<Eigen::Vector2d>& feet,
                                      const Eigen::Vector2d& com, double weight);

/// Net progress of a pass along its walking direction, in metres.
double pass_progress(const Trace& trace, int direction);

}  // namespace legevo
