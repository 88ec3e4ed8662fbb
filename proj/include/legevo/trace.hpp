#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace legevo {

struct TraceSample {
  double t = 0.0;
  Eigen::Vector3d body_position = Eigen::Vector3d::Zero();       // world, m
  Eigen::Vector3d orientation = Eigen::Vector3d::Zero();         // roll, pitch, yaw (rad)
  Eigen::Vector3d linear_acceleration = Eigen::Vector3d::Zero();  // m/s^2
};

struct SlipEvent {
  double t = 0.0;
  int leg = 0;
  double magnitude = 0.0;  // m the anchor slid
};

/// Body motion sampled at a fixed rate during one walking pass.
struct Trace {
  std::vector<TraceSample> samples;
  std::vector<SlipEvent> slip_events;
  bool fell = false;
};

/// Fills linear_acceleration with the second central difference of
/// body_position; the two end samples copy their interior neighbour.
void differentiate_acceleration(Trace& trace, double dt);

/// One row per sample: t, position, orientation, acceleration.
void write_trace_csv(std::ostream& os, const Trace& trace);

}  // namespace legevo
