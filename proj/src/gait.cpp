#include "legevo/gait.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace legevo {

namespace {

double wrap_unit(double x) {
  double r = x - std::floor(x);
  // floor can round a tiny negative value up to exactly 1.0
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

FootPath build_foot_path(const GaitParams& p) {
  const double l = p.step_length;
  const double h = p.step_height;
  const double s = p.step_smoothing;
  FootPath path;
  path.stance_start = {l / 2.0, 0.0};
  path.stance_end = {-l / 2.0, 0.0};
  path.swing_controls = {
      path.stance_end,
      {-l / 4.0, h},
      {l / 2.0 + s, 0.1 * h},
      path.stance_start,
  };
  return path;
}

Eigen::Vector2d catmull_rom(std::span<const Eigen::Vector2d> controls, double u) {
  const std::size_t n = controls.size();
  if (n < 2) throw std::domain_error("catmull_rom needs at least two control points");
  u = std::clamp(u, 0.0, 1.0);
  if (u == 1.0) return controls[n - 1];

  const double segments = static_cast<double>(n - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(u * segments), n - 2);
  const double s = u * segments - static_cast<double>(i);

  auto point = [&](std::ptrdiff_t k) -> Eigen::Vector2d {
    if (k < 0) return 2.0 * controls[0] - controls[1];
    if (k >= static_cast<std::ptrdiff_t>(n)) return 2.0 * controls[n - 1] - controls[n - 2];
    return controls[static_cast<std::size_t>(k)];
  };
  const auto ii = static_cast<std::ptrdiff_t>(i);
  const Eigen::Vector2d p0 = point(ii);
  const Eigen::Vector2d p1 = point(ii + 1);
  const Eigen::Vector2d m0 = 0.5 * (p1 - point(ii - 1));
  const Eigen::Vector2d m1 = 0.5 * (point(ii + 2) - p0);

  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 +
         (s3 - s2) * m1;
}

LegSchedule crawl_schedule(double lift_duration) {
  LegSchedule sched;
  sched.phase_offsets[kFrontLeft] = 0.0;
  sched.phase_offsets[kFrontRight] = 0.5;
  sched.phase_offsets[kHindLeft] = 0.75;
  sched.phase_offsets[kHindRight] = 0.25;
  sched.lift_duration = lift_duration;
  return sched;
}

double leg_phase(double global_phase, int leg_index, const LegSchedule& schedule) {
  if (leg_index < 0 || leg_index >= kLegCount) throw std::out_of_range("leg index");
  return wrap_unit(global_phase - schedule.phase_offsets[static_cast<std::size_t>(leg_index)]);
}

Eigen::Vector2d wag_offset(const GaitParams& p, double global_phase) {
  const double arg = 2.0 * std::numbers::pi * (global_phase + p.wag_phase);
  return {p.wag_x_amp * std::sin(2.0 * arg), p.wag_y_amp * std::sin(arg)};
}

Eigen::Vector3d sample_foot_position(const FootPath& path, const GaitParams& p, double phase,
                                     double global_phase, const GaitFrame& frame) {
  Eigen::Vector2d xz;
  if (phase < p.lift_duration) {
    xz = catmull_rom(path.swing_controls, phase / p.lift_duration);
  } else {
    const double s = (phase - p.lift_duration) / (1.0 - p.lift_duration);
    xz = path.stance_start + s * (path.stance_end - path.stance_start);
  }
  const Eigen::Vector2d wag = wag_offset(p, global_phase);
  return {xz.x() - wag.x(), frame.lateral_offset - wag.y(), xz.y() - frame.standing_height};
}

}  // namespace legevo
