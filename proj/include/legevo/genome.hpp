#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "json.hpp"

namespace legevo {

inline constexpr std::size_t kGeneCount = 10;

/// Gene slots, in serialization order.
enum class Gene : std::size_t {
  kStepLength = 0,
  kStepHeight,
  kStepSmoothing,
  kGaitFrequency,
  kLiftDuration,
  kWagPhase,
  kWagXAmp,
  kWagYAmp,
  kFemurLength,
  kTibiaLength,
};

struct ParamRange {
  std::string_view name;
  double lower;
  double upper;
};

/// Physical range of every gene, indexed by Gene. Lengths in metres,
/// frequency in Hz, lift duration and wag phase as fractions of the period.
inline constexpr std::array<ParamRange, kGeneCount> kParamRanges{{
    {"step_length", 0.005, 0.300},
    {"step_height", 0.025, 0.075},
    {"step_smoothing", 0.0, 0.050},
    {"gait_frequency", 0.2, 2.0},
    {"lift_duration", 0.05, 0.20},
    {"wag_phase", -0.2, 0.2},
    {"wag_x_amp", 0.0, 0.050},
    {"wag_y_amp", 0.0, 0.050},
    {"femur_length", 0.0, 0.025},
    {"tibia_length", 0.0, 0.095},
}};

/// Cap on step_length * gait_frequency, in m/min.
inline constexpr double kMaxSpeedProduct = 10.0;

/// Ten normalized genes in [0, 1]. Construction validates the bounds.
class Genotype {
 public:
  Genotype() { genes_.fill(0.5); }
  explicit Genotype(const std::array<double, kGeneCount>& genes);

  double operator[](std::size_t i) const { return genes_[i]; }
  double operator[](Gene g) const { return genes_[static_cast<std::size_t>(g)]; }
  const std::array<double, kGeneCount>& genes() const { return genes_; }

  friend bool operator==(const Genotype&, const Genotype&) = default;

 private:
  std::array<double, kGeneCount> genes_{};
};

/// Decoded gait and morphology parameters in physical units.
/// femur_ext and tibia_ext are extensions above the minimum segment lengths.
struct GaitParams {
  double step_length = 0.0;
  double step_height = 0.0;
  double step_smoothing = 0.0;
  double gait_frequency = 0.0;
  double lift_duration = 0.0;
  double wag_phase = 0.0;
  double wag_x_amp = 0.0;
  double wag_y_amp = 0.0;
  double femur_ext = 0.0;
  double tibia_ext = 0.0;

  double& field(Gene g);
  double field(Gene g) const;

  friend bool operator==(const GaitParams&, const GaitParams&) = default;
};

GaitParams decode(const Genotype& g);
Genotype encode(const GaitParams& p);

/// step_length * gait_frequency in m/min.
double speed_product(const GaitParams& p);
/// True iff the speed product does not exceed the 10 m/min cap.
bool is_feasible(const GaitParams& p);

void to_json(nlohmann::json& j, const Genotype& g);
void from_json(const nlohmann::json& j, Genotype& g);
void to_json(nlohmann::json& j, const GaitParams& p);
void from_json(const nlohmann::json& j, GaitParams& p);

}  // namespace legevo
