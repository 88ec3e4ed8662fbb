#include "legevo/genome.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace legevo {

namespace {

void check_unit(double v, std::size_t i) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("gene " + std::string(kParamRanges[i].name) +
                            " outside [0,1]: " + std::to_string(v));
  }
}

}  // namespace

Genotype::Genotype(const std::array<double, kGeneCount>& genes) : genes_(genes) {
  for (std::size_t i = 0; i < kGeneCount; ++i) check_unit(genes_[i], i);
}

double& GaitParams::field(Gene g) {
  switch (g) {
    case Gene::kStepLength: return step_length;
    case Gene::kStepHeight: return step_height;
    case Gene::kStepSmoothing: return step_smoothing;
    case Gene::kGaitFrequency: return gait_frequency;
    case Gene::kLiftDuration: return lift_duration;
    case Gene::kWagPhase: return wag_phase;
    case Gene::kWagXAmp: return wag_x_amp;
    case Gene::kWagYAmp: return wag_y_amp;
    case Gene::kFemurLength: return femur_ext;
    case Gene::kTibiaLength: return tibia_ext;
  }
  throw std::out_of_range("bad gene index");
}

double GaitParams::field(Gene g) const { return const_cast<GaitParams*>(this)->field(g); }

GaitParams decode(const Genotype& g) {
  GaitParams p;
  for (std::size_t i = 0; i < kGeneCount; ++i) {
    const auto& r = kParamRanges[i];
    check_unit(g[i], i);
    p.field(static_cast<Gene>(i)) = r.lower + g[i] * (r.upper - r.lower);
  }
  return p;
}

Genotype encode(const GaitParams& p) {
  std::array<double, kGeneCount> genes{};
  for (std::size_t i = 0; i < kGeneCount; ++i) {
    const auto& r = kParamRanges[i];
    const double v = p.field(static_cast<Gene>(i));
    if (!(v >= r.lower && v <= r.upper)) {
      throw std::domain_error(std::string(r.name) + " outside its range: " + std::to_string(v));
    }
    // Clamp only guards the last ulp of the division.
    genes[i] = std::clamp((v - r.lower) / (r.upper - r.lower), 0.0, 1.0);
  }
  return Genotype(genes);
}

double speed_product(const GaitParams& p) { return p.step_length * p.gait_frequency * 60.0; }

bool is_feasible(const GaitParams& p) { return speed_product(p) <= kMaxSpeedProduct; }

void to_json(nlohmann::json& j, const Genotype& g) { j = g.genes(); }

void from_json(const nlohmann::json& j, Genotype& g) {
  if (!j.is_array() || j.size() != kGeneCount) {
    throw std::domain_error("genotype must be an array of 10 numbers");
  }
  g = Genotype(j.get<std::array<double, kGeneCount>>());
}

void to_json(nlohmann::json& j, const GaitParams& p) {
  j = nlohmann::json::object();
  for (std::size_t i = 0; i < kGeneCount; ++i) {
    j[std::string(kParamRanges[i].name)] = p.field(static_cast<Gene>(i));
  }
}

void from_json(const nlohmann::json& j, GaitParams& p) {
  for (std::size_t i = 0; i < kGeneCount; ++i) {
    p.field(static_cast<Gene>(i)) = j.at(std::string(kParamRanges[i].name)).get<double>();
  }
}

}  // namespace legevo
