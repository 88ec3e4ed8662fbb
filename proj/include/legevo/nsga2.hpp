#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "legevo/genome.hpp"

namespace legevo {

/// Both objectives are maximized.
struct Fitness {
  double speed = 0.0;      // m/min
  double stability = 0.0;  // <= 0

  friend bool operator==(const Fitness&, const Fitness&) = default;
};

/// What an evaluator reports for one genotype.
struct Evaluation {
  Fitness fitness;
  int slip_count = 0;
  bool fell = false;
};

struct Individual {
  Genotype genotype;
  std::optional<Fitness> fitness;  // empty until evaluated
  int rank = -1;                   // front index
  double crowding = 0.0;           // may be infinite
  int slip_count = 0;
  bool fell = false;
  int generation = 0;  // where this individual was born
  int index = 0;
};

struct EvoConfig {
  int population = 8;
  /// Generations including the random initial one, unless
  /// initial_counts_as_generation is false.
  int generations = 8;
  bool initial_counts_as_generation = true;
  double mutation_probability = 1.0;
  double sigma_initial = 1.0 / 6.0;
  double sigma_decay = 0.05;  // subtracted per generation
  double sigma_min = 0.05;
  int max_remutation_attempts = 100;

  /// Offspring generations that follow the initial population.
  int offspring_generations() const {
    return initial_counts_as_generation ? generations - 1 : generations;
  }
  void validate() const;
};

/// a is at least as good in both objectives and strictly better in one.
bool dominates(const Fitness& a, const Fitness& b);

/// Fronts of indices into `fits`; front 0 is the non-dominated set.
std::vector<std::vector<std::size_t>> fast_non_dominated_sort(std::span<const Fitness> fits);

/// Crowding distance of every member of one front, aligned with `front`.
std::vector<double> crowding_distance(std::span<const Fitness> fits,
                                      std::span<const std::size_t> front);

/// Assigns rank and crowding in place. All individuals must be evaluated.
void assign_rank_and_crowding(std::vector<Individual>& pop);

/// Crowded comparison: lower rank wins, then larger crowding distance.
bool crowded_less(const Individual& a, const Individual& b);

/// max(sigma_initial - sigma_decay * generation, sigma_min). Offspring of
/// generation k (k >= 1) are mutated with sigma_schedule(k - 1), so the first
/// offspring use sigma_initial.
double sigma_schedule(int generation, const EvoConfig& cfg = {});

/// Gaussian mutation of every gene (with mutation_probability), clamped to
/// [0, 1]. Infeasible children are redrawn from the parent; after the attempt
/// budget the last child's step_length is cut to the largest feasible value.
Genotype mutate(const Genotype& parent, double sigma, std::mt19937_64& rng,
                const EvoConfig& cfg = {});

/// Sets the step_length gene to the largest value that keeps g feasible,
/// if it is not feasible already.
Genotype clamp_to_speed_cap(const Genotype& g);

/// Uniform genotype, redrawn until feasible.
Genotype random_feasible(std::mt19937_64& rng);

/// Area dominated by the points above the reference (speed 0, stability -1).
double hypervolume(std::span<const Fitness> fits, Fitness reference = {0.0, -1.0});

/// One evaluated individual as logged.
struct EvaluationRecord {
  int generation = 0;
  int index = 0;
  Genotype genotype;
  Evaluation evaluation;
  std::optional<double> sigma;  // mutation sigma; empty for the initial population
  std::optional<int> parent;    // position in the previous survivor list
  std::uint64_t eval_seed = 0;
};

struct RunHistory {
  std::vector<EvaluationRecord> records;
  /// Survivors after each generation; entry 0 is the initial population.
  std::vector<std::vector<Individual>> survivors;

  const std::vector<Individual>& final_population() const { return survivors.back(); }
};

/// Thrown by run() when the evaluator fails. Carries everything evaluated so far.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(const std::string& what, RunHistory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const RunHistory& partial() const { return partial_; }

 private:
  RunHistory partial_;
};

using Evaluator = std::function<Evaluation(const Genotype&, std::uint64_t seed)>;

/// Called after every evaluation; lets callers stream records to disk.
using RecordSink = std::function<void(const EvaluationRecord&)>;

/// NSGA-II with mutation only and (mu + lambda) survival. Every random draw
/// comes from a stream derived from (seed, generation, index).
RunHistory run(const Evaluator& evaluator, const EvoConfig& cfg, std::uint64_t seed,
               const RecordSink& sink = {});

}  // namespace legevo
