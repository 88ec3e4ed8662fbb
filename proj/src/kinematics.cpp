#include "legevo/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace legevo {

namespace {

// Boundary slack for reach tests; keeps FK outputs of limit poses reachable.
constexpr double kReachSlack = 1e-12;

// Rotation about y applied to a vector in the x-z plane.
Eigen::Vector3d rot_y(double a, const Eigen::Vector3d& v) {
  const double c = std::cos(a), s = std::sin(a);
  return {c * v.x() + s * v.z(), v.y(), -s * v.x() + c * v.z()};
}

Eigen::Vector3d rot_x(double a, const Eigen::Vector3d& v) {
  const double c = std::cos(a), s = std::sin(a);
  return {v.x(), c * v.y() - s * v.z(), s * v.y() + c * v.z()};
}

}  // namespace

LegGeometry LegGeometry::from_extensions(double femur_ext, double tibia_ext) {
  if (!(femur_ext >= 0.0 && femur_ext <= kFemurMax - kFemurMin + 1e-12) ||
      !(tibia_ext >= 0.0 && tibia_ext <= kTibiaMax - kTibiaMin + 1e-12)) {
    throw std::domain_error("segment extension outside actuator travel");
  }
  return LegGeometry{kFixedOffset, kFemurMin + femur_ext, kTibiaMin + tibia_ext};
}

Eigen::Vector3d knee_position(const LegGeometry& geom, const JointAngles& q) {
  return rot_x(q.hip_roll, rot_y(q.hip_pitch, {0.0, 0.0, -geom.upper()}));
}

double LegGeometry::total() const {
  const double sum = fixed_offset + femur + tibia;
  const double snapped = std::round(sum * 1e6) / 1e6;
  return std::abs(snapped - sum) < 1e-15 ? snapped : sum;
}

Eigen::Vector3d forward(const LegGeometry& geom, const JointAngles& q) {
  // Straight leg plus the knee's displacement of the foot; exact at q = 0.
  const Eigen::Vector3d tibia(0.0, 0.0, -geom.tibia);
  const Eigen::Vector3d bend = rot_y(q.knee_pitch, tibia) - tibia;
  const Eigen::Vector3d planar = Eigen::Vector3d(0.0, 0.0, -geom.total()) + bend;
  return rot_x(q.hip_roll, rot_y(q.hip_pitch, planar));
}

double min_reach(const LegGeometry& geom) {
  const double a = geom.upper(), b = geom.tibia;
  return std::sqrt(std::max(0.0, a * a + b * b + 2.0 * a * b * std::cos(kKneeLimit)));
}

double max_reach(const LegGeometry& geom) { return geom.total(); }

bool reachable(const LegGeometry& geom, const Eigen::Vector3d& target) {
  const double d = target.norm();
  return d >= min_reach(geom) - kReachSlack && d <= max_reach(geom) + kReachSlack;
}

JointAngles inverse(const LegGeometry& geom, const Eigen::Vector3d& target) {
  const double d = target.norm();
  if (!reachable(geom, target)) {
    throw ReachabilityError(d, std::clamp(d, min_reach(geom), max_reach(geom)));
  }
  const double a = geom.upper(), b = geom.tibia;

  JointAngles q;
  // Roll brings the target into the leg's pitch plane, below the hip.
  const double rho = std::hypot(target.y(), target.z());
  q.hip_roll = rho > 0.0 ? std::atan2(target.y(), -target.z()) : 0.0;
  const double px = target.x();
  const double pz = -rho;

  const double cos_knee = std::clamp((d * d - a * a - b * b) / (2.0 * a * b), -1.0, 1.0);
  q.knee_pitch = -std::acos(cos_knee);

  // Chain direction before hip pitch, measured from -z toward +x.
  const double vx = -b * std::sin(q.knee_pitch);
  const double vz = -a - b * std::cos(q.knee_pitch);
  const double chain_angle = std::atan2(vx, -vz);
  const double target_angle = std::atan2(px, -pz);
  q.hip_pitch = chain_angle - target_angle;
  return q;
}

Eigen::Vector3d clamp_to_reach(const LegGeometry& geom, const Eigen::Vector3d& target) {
  const double d = target.norm();
  const double lo = min_reach(geom), hi = max_reach(geom);
  if (d >= lo && d <= hi) return target;
  if (d == 0.0) return {0.0, 0.0, -lo};
  return target * (std::clamp(d, lo, hi) / d);
}

double reconfigure_duration(const LegGeometry& from, const LegGeometry& to) {
  const double travel = std::max(std::abs(to.femur - from.femur), std::abs(to.tibia - from.tibia));
  return travel / kReconfigureSpeed;
}

}  // namespace legevo
