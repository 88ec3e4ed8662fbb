#include "legevo/simbench.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "legevo/seeding.hpp"

namespace legevo {

namespace {

constexpr double kContactWeightFloor = 0.02;

struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
};

// Weighted least-squares rigid transform taking body-frame points onto world
// anchors.
Pose fit_rigid(const std::vector<Eigen::Vector3d>& body, const std::vector<Eigen::Vector3d>& world,
               const std::vector<double>& weight) {
  double total = 0.0;
  Eigen::Vector3d cb = Eigen::Vector3d::Zero(), cw = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < body.size(); ++i) {
    cb += weight[i] * body[i];
    cw += weight[i] * world[i];
    total += weight[i];
  }
  cb /= total;
  cw /= total;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < body.size(); ++i) {
    h += weight[i] * (body[i] - cb) * (world[i] - cw).transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  Pose pose;
  pose.rotation = svd.matrixV() * d * svd.matrixU().transpose();
  pose.translation = cw - pose.rotation * cb;
  return pose;
}

Eigen::Vector3d roll_pitch_yaw(const Eigen::Matrix3d& r) {
  return {std::atan2(r(2, 1), r(2, 2)), -std::asin(std::clamp(r(2, 0), -1.0, 1.0)),
          std::atan2(r(1, 0), r(0, 0))};
}

// Second-order Gauss-Markov process: unit white noise through two equal
// first-order lags, scaled so the stationary marginal is N(0, std). Smooth
// enough that it does not dominate finite-difference accelerations.
struct NoiseShape {
  double decay = 0.0;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();  // stationary (drive, output)

  NoiseShape(double dt, double correlation_time) {
    decay = correlation_time > 0.0 ? std::exp(-dt / correlation_time) : 0.0;
    Eigen::Matrix2d a;
    a << decay, 0.0, (1.0 - decay) * decay, decay;
    Eigen::Vector2d b(1.0, 1.0 - decay);
    for (int i = 0; i < 100000; ++i) {
      const Eigen::Matrix2d next = a * cov * a.transpose() + b * b.transpose();
      const double change = (next - cov).cwiseAbs().maxCoeff();
      cov = next;
      if (change < 1e-15 * cov.cwiseAbs().maxCoeff()) break;
    }
  }
};

class JointNoise {
 public:
  JointNoise() = default;
  JointNoise(const NoiseShape& shape, double std, std::mt19937_64& rng)
      : decay_(shape.decay), scale_(std / std::sqrt(shape.cov(1, 1))) {
    std::normal_distribution<double> unit;
    const Eigen::Matrix2d l = shape.cov.llt().matrixL();
    state_ = l * Eigen::Vector2d(unit(rng), unit(rng));
  }

  double step(std::mt19937_64& rng) {
    std::normal_distribution<double> unit;
    state_.x() = decay_ * state_.x() + unit(rng);
    state_.y() = decay_ * state_.y() + (1.0 - decay_) * state_.x();
    return scale_ * state_.y();
  }

 private:
  double decay_ = 0.0;
  double scale_ = 0.0;
  Eigen::Vector2d state_ = Eigen::Vector2d::Zero();
};

struct LegState {
  std::array<ServoState, 3> servo{};  // roll, pitch, knee
  Eigen::Vector3d foot_hip = Eigen::Vector3d::Zero();  // achieved, hip frame
  std::optional<Eigen::Vector3d> anchor;               // world contact point
  std::array<JointNoise, 3> noise{};

  JointAngles angles() const { return {servo[0].angle, servo[1].angle, servo[2].angle}; }
};

class PassRunner {
 public:
  PassRunner(const GaitParams& p, const LegGeometry& geom, const EvalConfig& cfg, int direction)
      : p_(p),
        geom_(geom),
        cfg_(cfg),
        direction_(direction >= 0 ? 1.0 : -1.0),
        path_(build_foot_path(p)),
        schedule_(crawl_schedule(p.lift_duration)),
        servo_spec_(spec_for_voltage(cfg.voltage)),
        rng_(derive_seed({cfg.seed, direction >= 0 ? 0u : 1u})),
        noise_shape_(1.0 / cfg.control_rate, cfg.noise_correlation_time) {}

  Trace run() {
    const double dt = 1.0 / cfg_.control_rate;
    const auto steps_per_sample =
        std::max<long>(1, std::lround(cfg_.control_rate / cfg_.trace_rate));
    const auto max_steps = static_cast<long>(std::ceil(cfg_.timeout * cfg_.control_rate - 1e-9));

    initialise();
    record(0.0);
    const double x0 = pose_.translation.x();

    bool reached = false;
    for (long k = 1; k <= max_steps; ++k) {
      const double t = static_cast<double>(k) * dt;
      const double phase = std::fmod(p_.gait_frequency * t, 1.0);
      actuate(phase, dt);
      if (!update_contacts(phase)) {
        trace_.fell = true;
        break;
      }
      solve_pose(t);
      reached = reached || direction_ * (pose_.translation.x() - x0) >= cfg_.target_distance;
      if (k % steps_per_sample == 0) {
        record(t);
        if (reached) break;
      }
    }
    differentiate_acceleration(trace_, 1.0 / cfg_.trace_rate);
    return std::move(trace_);
  }

 private:
  Eigen::Vector3d commanded_foot(int leg, double phase) const {
    Eigen::Vector3d f =
        sample_foot_position(path_, p_, leg_phase(phase, leg, schedule_), phase, cfg_.frame);
    f.x() *= direction_;
    return f;
  }

  bool in_swing(int leg, double phase) const {
    return leg_phase(phase, leg, schedule_) < p_.lift_duration;
  }

  Eigen::Vector3d body_point(int leg) const {
    return cfg_.body.hips[static_cast<std::size_t>(leg)] + legs_[static_cast<std::size_t>(leg)].foot_hip;
  }

  void initialise() {
    for (int leg = 0; leg < kLegCount; ++leg) {
      auto& s = legs_[static_cast<std::size_t>(leg)];
      const JointAngles q = inverse(geom_, clamp_to_reach(geom_, commanded_foot(leg, 0.0)));
      s.servo = {ServoState{q.hip_roll, q.hip_roll}, ServoState{q.hip_pitch, q.hip_pitch},
                 ServoState{q.knee_pitch, q.knee_pitch}};
      s.foot_hip = forward(geom_, q);
      if (cfg_.actuation_noise_std > 0.0) {
        for (auto& n : s.noise) n = JointNoise(noise_shape_, cfg_.actuation_noise_std, rng_);
      }
    }
    pose_.rotation.setIdentity();
    pose_.translation = {0.0, 0.0, cfg_.frame.standing_height};
    for (int leg = 0; leg < kLegCount; ++leg) {
      if (in_swing(leg, 0.0)) continue;
      Eigen::Vector3d w = pose_.apply(body_point(leg));
      w.z() = 0.0;
      legs_[static_cast<std::size_t>(leg)].anchor = w;
    }
  }

  void actuate(double phase, double dt) {
    const auto force = support_forces();

    for (int leg = 0; leg < kLegCount; ++leg) {
      auto& s = legs_[static_cast<std::size_t>(leg)];
      JointAngles cmd = inverse(geom_, clamp_to_reach(geom_, commanded_foot(leg, phase)));
      if (cfg_.actuation_noise_std > 0.0) {
        cmd.hip_roll += s.noise[0].step(rng_);
        cmd.hip_pitch += s.noise[1].step(rng_);
        cmd.knee_pitch += s.noise[2].step(rng_);
      }

      // Vertical contact force times the horizontal lever about each axis.
      const double fz = force[static_cast<std::size_t>(leg)];
      const Eigen::Vector3d knee = knee_position(geom_, s.angles());
      const double roll_load = fz * std::abs(s.foot_hip.y());
      const double hip_load = fz * std::abs(s.foot_hip.x());
      const double knee_load = fz * std::abs(s.foot_hip.x() - knee.x());
      s.servo[0] = step_tracking(s.servo[0], cmd.hip_roll, dt, max_speed(servo_spec_, roll_load));
      s.servo[1] = step_tracking(s.servo[1], cmd.hip_pitch, dt, max_speed(servo_spec_, hip_load));
      s.servo[2] = step_tracking(s.servo[2], cmd.knee_pitch, dt, max_speed(servo_spec_, knee_load));
      s.foot_hip = forward(geom_, s.angles());
    }
  }

  int anchor_count() const {
    int n = 0;
    for (const auto& s : legs_) n += s.anchor ? 1 : 0;
    return n;
  }

  // Lift-off follows the schedule; touch-down waits for ground contact,
  // judged against the pose the already-pinned feet imply. Returns false
  // when the body loses its three-point support.
  bool update_contacts(double phase) {
    for (int leg = 0; leg < kLegCount; ++leg) {
      if (in_swing(leg, phase)) legs_[static_cast<std::size_t>(leg)].anchor.reset();
    }
    if (anchor_count() >= 3) pose_ = fit_anchors();
    for (int leg = 0; leg < kLegCount; ++leg) {
      auto& s = legs_[static_cast<std::size_t>(leg)];
      if (s.anchor || in_swing(leg, phase)) continue;
      Eigen::Vector3d w = pose_.apply(body_point(leg));
      if (w.z() <= cfg_.contact_tolerance) {
        w.z() = 0.0;
        s.anchor = w;
      }
    }
    return anchor_count() >= 3;
  }

  // Feet hold the ground in proportion to the weight they carry; a floor on
  // the weight keeps unloaded feet from leaving the fit degenerate.
  Pose fit_anchors() const {
    std::vector<Eigen::Vector3d> body, world;
    std::vector<double> weight;
    const auto force = support_forces();
    const double floor = kContactWeightFloor * cfg_.body.mass * kGravity;
    for (int leg = 0; leg < kLegCount; ++leg) {
      const auto& s = legs_[static_cast<std::size_t>(leg)];
      if (!s.anchor) continue;
      body.push_back(body_point(leg));
      world.push_back(*s.anchor);
      weight.push_back(force[static_cast<std::size_t>(leg)] + floor);
    }
    return fit_rigid(body, world, weight);
  }

  std::array<double, kLegCount> support_forces() const {
    std::vector<Eigen::Vector2d> feet;
    std::vector<int> owner;
    for (int leg = 0; leg < kLegCount; ++leg) {
      if (!legs_[static_cast<std::size_t>(leg)].anchor) continue;
      const Eigen::Vector3d b = body_point(leg);
      feet.emplace_back(b.x(), b.y());
      owner.push_back(leg);
    }
    std::array<double, kLegCount> force{};
    if (feet.empty()) return force;
    const auto share = distribute_weight(feet, Eigen::Vector2d::Zero(), cfg_.body.mass * kGravity);
    for (std::size_t i = 0; i < owner.size(); ++i) force[static_cast<std::size_t>(owner[i])] = share[i];
    return force;
  }

  // Anchors slide horizontally when the fitted foot strays beyond the slip
  // threshold; the pose is then refitted to the moved anchors.
  void solve_pose(double t) {
    pose_ = fit_anchors();
    bool slid = false;
    for (int leg = 0; leg < kLegCount; ++leg) {
      const auto li = static_cast<std::size_t>(leg);
      auto& s = legs_[li];
      const bool was_slipping = slipping_[li];
      slipping_[li] = false;
      if (!s.anchor) continue;
      const Eigen::Vector3d r = pose_.apply(body_point(leg)) - *s.anchor;
      const Eigen::Vector2d rh(r.x(), r.y());
      const double m = rh.norm();
      if (m <= cfg_.slip_threshold) continue;
      const Eigen::Vector2d slide = rh * (1.0 - cfg_.slip_threshold / m);
      s.anchor->x() += slide.x();
      s.anchor->y() += slide.y();
      // Consecutive steps of sliding on one foot form a single event.
      if (was_slipping) {
        trace_.slip_events[open_event_[li]].magnitude += slide.norm();
      } else {
        open_event_[li] = trace_.slip_events.size();
        trace_.slip_events.push_back({t, leg, slide.norm()});
      }
      slipping_[li] = true;
      slid = true;
    }
    if (slid) pose_ = fit_anchors();
  }

  void record(double t) {
    TraceSample s;
    s.t = t;
    s.body_position = pose_.translation;
    s.orientation = roll_pitch_yaw(pose_.rotation);
    trace_.samples.push_back(s);
  }

  const GaitParams& p_;
  const LegGeometry& geom_;
  const EvalConfig& cfg_;
  double direction_;
  FootPath path_;
  LegSchedule schedule_;
  ServoSpec servo_spec_;
  std::mt19937_64 rng_;
  NoiseShape noise_shape_;
  std::array<LegState, kLegCount> legs_{};
  std::array<bool, kLegCount> slipping_{};
  std::array<std::size_t, kLegCount> open_event_{};
  Pose pose_{};
  Trace trace_{};
};

struct DirectionFitness {
  double speed = 0.0;
  double stability = 0.0;
  double distance = 0.0;
  double duration = 0.0;
  bool fell = false;
  int slips = 0;
};

DirectionFitness score_pass(const Trace& trace, const EvalConfig& cfg, int direction) {
  DirectionFitness f;
  f.slips = static_cast<int>(trace.slip_events.size());
  f.duration = trace.samples.back().t - trace.samples.front().t;
  f.distance = pass_progress(trace, direction);
  f.fell = trace.fell;
  if (trace.fell || trace.samples.size() < 2) {
    f.speed = 0.0;
    f.stability = -cfg.fall_penalty;
  } else {
    f.speed = speed_fitness(trace);
    f.stability = stability_fitness(trace, cfg.weights);
  }
  return f;
}

}  // namespace

void EvalConfig::validate() const {
  if (!(control_rate > 0.0) || !(trace_rate > 0.0) || trace_rate > control_rate) {
    throw std::domain_error("rates must be positive with trace_rate <= control_rate");
  }
  const double ratio = control_rate / trace_rate;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw std::domain_error("control_rate must be a whole multiple of trace_rate");
  }
  if (!(timeout > 0.0) || !(target_distance > 0.0)) {
    throw std::domain_error("timeout and target distance must be positive");
  }
  if (!(actuation_noise_std >= 0.0) || !(noise_correlation_time >= 0.0) || !(slip_threshold > 0.0) ||
      !(contact_tolerance >= 0.0)) {
    throw std::domain_error("noise, slip threshold and contact tolerance must be non-negative");
  }
  spec_for_voltage(voltage);
}

double pass_progress(const Trace& trace, int direction) {
  if (trace.samples.empty()) return 0.0;
  const double dx = trace.samples.back().body_position.x() - trace.samples.front().body_position.x();
  return direction >= 0 ? dx : -dx;
}

std::vector<double> distribute_weight(const std::vector<Eigen::Vector2d>& feet,
                                      const Eigen::Vector2d& com, double weight) {
  const std::size_t n = feet.size();
  if (n == 0) throw std::domain_error("no supporting feet");
  std::vector<double> out(n, 0.0);
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;

  while (active.size() >= 3) {
    Eigen::MatrixXd a(3, static_cast<Eigen::Index>(active.size()));
    for (std::size_t j = 0; j < active.size(); ++j) {
      const auto c = static_cast<Eigen::Index>(j);
      a(0, c) = 1.0;
      a(1, c) = feet[active[j]].x();
      a(2, c) = feet[active[j]].y();
    }
    const Eigen::Vector3d b(weight, weight * com.x(), weight * com.y());
    // Minimum-norm solution of the three equilibrium equations.
    const Eigen::VectorXd f = a.transpose() * (a * a.transpose()).ldlt().solve(b);
    Eigen::Index worst = 0;
    if (f.minCoeff(&worst) >= 0.0) {
      for (std::size_t j = 0; j < active.size(); ++j) out[active[j]] = f(static_cast<Eigen::Index>(j));
      return out;
    }
    active.erase(active.begin() + worst);
  }

  if (active.size() == 1) {
    out[active[0]] = weight;
    return out;
  }
  // Two feet: the weight rests on the support edge at the projection of the
  // centre of mass.
  const Eigen::Vector2d e = feet[active[1]] - feet[active[0]];
  const double len2 = e.squaredNorm();
  const double u = len2 > 0.0 ? std::clamp((com - feet[active[0]]).dot(e) / len2, 0.0, 1.0) : 0.5;
  out[active[0]] = weight * (1.0 - u);
  out[active[1]] = weight * u;
  return out;
}

Trace simulate_pass(const GaitParams& p, const LegGeometry& geom, const EvalConfig& cfg,
                    int direction) {
  cfg.validate();
  PassRunner runner(p, geom, cfg, direction);
  return runner.run();
}

EvaluationResult evaluate(const GaitParams& p, const LegGeometry& geom, const EvalConfig& cfg) {
  if (!is_feasible(p)) {
    throw ConstraintError("gait exceeds the 10 m/min speed product");
  }
  const DirectionFitness fwd = score_pass(simulate_pass(p, geom, cfg, +1), cfg, +1);
  const DirectionFitness back = score_pass(simulate_pass(p, geom, cfg, -1), cfg, -1);
  EvaluationResult r;
  r.speed = 0.5 * (fwd.speed + back.speed);
  r.stability = 0.5 * (fwd.stability + back.stability);
  r.distance_forward = fwd.distance;
  r.distance_back = back.distance;
  r.duration_forward = fwd.duration;
  r.duration_back = back.duration;
  r.fell = fwd.fell || back.fell;
  r.slip_count = fwd.slips + back.slips;
  return r;
}

std::vector<EvaluationResult> reevaluate(const GaitParams& p, const LegGeometry& geom,
                                         const EvalConfig& cfg, int n) {
  if (n < 1) throw std::domain_error("reevaluate needs n >= 1");
  std::vector<EvaluationResult> out;
  out.reserve(static_cast<std::size_t>(n));
  EvalConfig c = cfg;
  for (int i = 0; i < n; ++i) {
    c.seed = cfg.seed + static_cast<std::uint64_t>(i);
    out.push_back(evaluate(p, geom, c));
  }
  return out;
}

}  // namespace legevo
