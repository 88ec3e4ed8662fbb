#pragma once

#include <span>

#include "legevo/trace.hpp"

namespace legevo {

struct StabilityWeights {
  double alpha = 0.02;  // weight of the acceleration term
};

/// Straight-line distance between first and last sample, in m/min.
double speed_fitness(const Trace& trace);

/// sqrt(max(0, mean(x^2) - mean(x)^2)). Throws on empty input.
double population_std(std::span<const double> samples);

/// -(alpha * sum of accel stds + sum of orientation stds). Zero is a
/// perfectly still body.
double stability_fitness(const Trace& trace, const StabilityWeights& w = {});

}  // namespace legevo
