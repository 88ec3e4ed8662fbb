#include "legevo/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace legevo {

void differentiate_acceleration(Trace& trace, double dt) {
  auto& s = trace.samples;
  const std::size_t n = s.size();
  if (n < 3) {
    for (auto& x : s) x.linear_acceleration.setZero();
    return;
  }
  const double inv = 1.0 / (dt * dt);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    s[i].linear_acceleration =
        (s[i + 1].body_position - 2.0 * s[i].body_position + s[i - 1].body_position) * inv;
  }
  s[0].linear_acceleration = s[1].linear_acceleration;
  s[n - 1].linear_acceleration = s[n - 2].linear_acceleration;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "t,x,y,z,roll,pitch,yaw,ax,ay,az\n";
  for (const auto& s : trace.samples) {
    os << s.t << ',' << s.body_position.x() << ',' << s.body_position.y() << ','
       << s.body_position.z() << ',' << s.orientation.x() << ',' << s.orientation.y() << ','
       << s.orientation.z() << ',' << s.linear_acceleration.x() << ','
       << s.linear_acceleration.y() << ',' << s.linear_acceleration.z() << '\n';
  }
}

double speed_fitness(const Trace& trace) {
  if (trace.samples.size() < 2) throw std::domain_error("speed needs at least two samples");
  const auto& a = trace.samples.front();
  const auto& b = trace.samples.back();
  const double duration = b.t - a.t;
  if (!(duration > 0.0)) throw std::domain_error("trace has zero duration");
  return 60.0 * (b.body_position - a.body_position).norm() / duration;
}

double population_std(std::span<const double> samples) {
  if (samples.empty()) throw std::domain_error("population_std of empty sample");
  // Shifting by the first sample leaves the value unchanged and makes a
  // constant stream exactly zero.
  const double shift = samples.front();
  double sum = 0.0, sum_sq = 0.0;
  for (double x : samples) {
    sum += x - shift;
    sum_sq += (x - shift) * (x - shift);
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  return std::sqrt(std::max(0.0, sum_sq / n - mean * mean));
}

double stability_fitness(const Trace& trace, const StabilityWeights& w) {
  if (trace.samples.empty()) throw std::domain_error("stability of empty trace");
  std::vector<double> buf(trace.samples.size());
  auto axis_std = [&](auto pick) {
    std::transform(trace.samples.begin(), trace.samples.end(), buf.begin(), pick);
    return population_std(buf);
  };
  double acc = 0.0, ang = 0.0;
  for (int k = 0; k < 3; ++k) {
    acc += axis_std([k](const TraceSample& s) { return s.linear_acceleration[k]; });
    ang += axis_std([k](const TraceSample& s) { return s.orientation[k]; });
  }
  return -(w.alpha * acc + ang);
}

}  // namespace legevo
