#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "legevo/nsga2.hpp"
#include "legevo/simbench.hpp"

namespace legevo {

namespace fs = std::filesystem;

/// Bad configuration value or key. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file. Maps to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitNothingToDo = 1;  // warning: no archives found
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

struct ExperimentConfig {
  std::vector<double> voltages{kHighVoltage, kLowVoltage};
  int runs_per_voltage = 3;
  std::uint64_t seed = 1;
  EvoConfig evo{};
  EvalConfig eval{};
  int reevaluation_count = 10;
  int selection_count = 5;
  fs::path output_dir = "out";

  void validate() const;
};

/// Reads `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed values throw ConfigError. Keys not present keep their defaults.
void apply_config(std::istream& in, ExperimentConfig& cfg);
ExperimentConfig load_config(const fs::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Seed of run `run`; shared by all voltages so the voltage is the only
/// difference between paired runs.
std::uint64_t run_seed(std::uint64_t experiment_seed, int run);

/// Simulator-backed evaluator at the given voltage.
Evaluator make_evaluator(const EvalConfig& base, double voltage);

/// One evolutionary run loaded back from disk.
struct RunArchive {
  fs::path dir;
  double voltage = 0.0;
  int run = 0;
  std::uint64_t seed = 0;
  std::vector<nlohmann::json> records;                  // evaluation log lines
  std::vector<std::vector<Individual>> survivors;        // per generation
  const std::vector<Individual>& final_population() const { return survivors.back(); }
};

/// Name of the archive directory of one run, below <out>/runs.
std::string archive_name(double voltage, int run);

/// Runs every (voltage, run) pair and writes one archive per run.
/// Checks that the output directory is writable before any evaluation.
std::vector<fs::path> cmd_evolve(const ExperimentConfig& cfg);

/// Loads all archives below <dir>/runs, sorted by (voltage desc, run).
std::vector<RunArchive> load_archives(const fs::path& experiment_dir);

/// Candidates at speed quantiles {0, 1/(k-1), ..., 1} of the non-dominated
/// set of the pooled final populations, slowest first, duplicates dropped.
struct Candidate {
  Individual individual;
  int run = 0;  // archive it came from
};
std::vector<Candidate> select_candidates(const std::vector<RunArchive>& archives,
                                          double voltage, int count);

/// Re-evaluates the candidates of the `original` voltage n times there and
/// n times at `reduced`. Writes reevaluation.json and reevaluation.csv to out.
nlohmann::json cmd_reevaluate(const std::vector<RunArchive>& archives, const ExperimentConfig& cfg,
                              double original, double reduced, const fs::path& out);

/// Morphology and control gene comparison between the highest and lowest
/// voltage groups. Writes analysis.json to out.
nlohmann::json cmd_analyze(const std::vector<RunArchive>& archives, const fs::path& out);

/// SVG figures and their CSV data. Returns the files written.
std::vector<fs::path> cmd_plot(const std::vector<RunArchive>& archives, const fs::path& out);

}  // namespace legevo
