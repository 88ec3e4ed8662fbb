#pragma once

#include <stdexcept>

#include <Eigen/Core>

namespace legevo {

inline constexpr double kFixedOffset = 0.110;
inline constexpr double kFemurMin = 0.185;
inline constexpr double kFemurMax = 0.210;
inline constexpr double kTibiaMin = 0.255;
inline constexpr double kTibiaMax = 0.350;
/// Largest knee bend, radians (150 degrees).
inline constexpr double kKneeLimit = 2.6179938779914944;
/// Lead-screw speed of the length actuators, m/s.
inline constexpr double kReconfigureSpeed = 0.001;

/// Segment lengths of one leg. The fixed proximal offset is rigid with the
/// femur, so the chain behaves as two links: (fixed_offset + femur) and tibia.
struct LegGeometry {
  double fixed_offset = kFixedOffset;
  double femur = kFemurMin;
  double tibia = kTibiaMin;

  /// Validates the extensions against the actuator travel.
  static LegGeometry from_extensions(double femur_ext, double tibia_ext);

  double upper() const { return fixed_offset + femur; }
  /// Snapped to whole micrometres when within rounding error, so decimal
  /// segment lengths add up to their decimal total.
  double total() const;
};

/// Hip roll about the fore-aft axis (outermost), hip pitch about the lateral
/// axis, knee pitch about the lateral axis. All zero is the leg hanging
/// straight down. knee_pitch <= 0 swings the tibia forward, so the knee
/// points backward. Positive hip_roll swings the foot toward +y.
struct JointAngles {
  double hip_roll = 0.0;
  double hip_pitch = 0.0;
  double knee_pitch = 0.0;
};

class ReachabilityError : public std::domain_error {
 public:
  ReachabilityError(double distance, double nearest)
      : std::domain_error("target unreachable"), distance_(distance), nearest_(nearest) {}
  double distance() const { return distance_; }
  /// Closest distance from the hip the leg can reach along the same ray.
  double nearest_reachable() const { return nearest_; }

 private:
  double distance_;
  double nearest_;
};

Eigen::Vector3d forward(const LegGeometry& geom, const JointAngles& q);
/// Knee joint position in the hip frame.
Eigen::Vector3d knee_position(const LegGeometry& geom, const JointAngles& q);

double min_reach(const LegGeometry& geom);
double max_reach(const LegGeometry& geom);

bool reachable(const LegGeometry& geom, const Eigen::Vector3d& target);

/// Throws ReachabilityError outside the reach annulus.
JointAngles inverse(const LegGeometry& geom, const Eigen::Vector3d& target);

/// Projects target radially onto the reach annulus. Returns target unchanged
/// when it is already reachable.
Eigen::Vector3d clamp_to_reach(const LegGeometry& geom, const Eigen::Vector3d& target);

/// Seconds to move the lead screws between two geometries; both segments
/// travel at the same time.
double reconfigure_duration(const LegGeometry& from, const LegGeometry& to);

}  // namespace legevo
