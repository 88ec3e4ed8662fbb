#include "legevo/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "legevo/seeding.hpp"

namespace legevo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream tags mixed into derived seeds so the variation and evaluation
// streams of one individual never coincide.
constexpr std::uint64_t kVariationStream = 0;
constexpr std::uint64_t kEvaluationStream = 1;

double objective(const Fitness& f, int k) { return k == 0 ? f.speed : f.stability; }

std::vector<Fitness> fitnesses(const std::vector<Individual>& pop) {
  std::vector<Fitness> out;
  out.reserve(pop.size());
  for (const auto& ind : pop) {
    if (!ind.fitness) throw std::logic_error("individual not evaluated");
    out.push_back(*ind.fitness);
  }
  return out;
}

std::size_t step_index() { return static_cast<std::size_t>(Gene::kStepLength); }

}  // namespace

void EvoConfig::validate() const {
  if (population < 1) throw std::invalid_argument("population must be positive");
  if (generations < 1) throw std::invalid_argument("generations must be positive");
  if (!(mutation_probability >= 0.0 && mutation_probability <= 1.0))
    throw std::invalid_argument("mutation_probability must lie in [0, 1]");
  if (!(sigma_initial > 0.0) || !(sigma_min > 0.0) || sigma_decay < 0.0)
    throw std::invalid_argument("sigma schedule must be positive");
  if (max_remutation_attempts < 1)
    throw std::invalid_argument("max_remutation_attempts must be positive");
}

bool dominates(const Fitness& a, const Fitness& b) {
  return a.speed >= b.speed && a.stability >= b.stability &&
         (a.speed > b.speed || a.stability > b.stability);
}

std::vector<std::vector<std::size_t>> fast_non_dominated_sort(std::span<const Fitness> fits) {
  const std::size_t n = fits.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> dom_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (dominates(fits[p], fits[q]))
        dominated[p].push_back(q);
      else if (dominates(fits[q], fits[p]))
        ++dom_count[p];
    }
    if (dom_count[p] == 0) fronts[0].push_back(p);
  }
  if (n == 0) return {};
  for (std::size_t i = 0; !fronts[i].empty(); ++i) {
    std::vector<std::size_t> next;
    for (auto p : fronts[i])
      for (auto q : dominated[p])
        if (--dom_count[q] == 0) next.push_back(q);
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> crowding_distance(std::span<const Fitness> fits,
                                      std::span<const std::size_t> front) {
  const std::size_t m = front.size();
  std::vector<double> dist(m, 0.0);
  if (m <= 2) {
    std::fill(dist.begin(), dist.end(), kInf);
    return dist;
  }
  std::vector<std::size_t> order(m);
  for (int k = 0; k < 2; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return objective(fits[front[a]], k) < objective(fits[front[b]], k);
    });
    const double lo = objective(fits[front[order.front()]], k);
    const double hi = objective(fits[front[order.back()]], k);
    dist[order.front()] = kInf;
    dist[order.back()] = kInf;
    if (hi == lo) continue;
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double gap =
          objective(fits[front[order[i + 1]]], k) - objective(fits[front[order[i - 1]]], k);
      dist[order[i]] += gap / (hi - lo);
    }
  }
  return dist;
}

void assign_rank_and_crowding(std::vector<Individual>& pop) {
  const auto fits = fitnesses(pop);
  const auto fronts = fast_non_dominated_sort(fits);
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    const auto d = crowding_distance(fits, fronts[r]);
    for (std::size_t i = 0; i < fronts[r].size(); ++i) {
      pop[fronts[r][i]].rank = static_cast<int>(r);
      pop[fronts[r][i]].crowding = d[i];
    }
  }
}

bool crowded_less(const Individual& a, const Individual& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.crowding > b.crowding;
}

double sigma_schedule(int generation, const EvoConfig& cfg) {
  if (generation < 0) throw std::invalid_argument("generation must be non-negative");
  return std::max(cfg.sigma_initial - cfg.sigma_decay * generation, cfg.sigma_min);
}

Genotype clamp_to_speed_cap(const Genotype& g) {
  if (is_feasible(decode(g))) return g;
  const auto& range = kParamRanges[step_index()];
  const double freq = decode(g).gait_frequency;
  auto genes = g.genes();
  const double max_step = kMaxSpeedProduct / (60.0 * freq);
  double gene = std::clamp((max_step - range.lower) / (range.upper - range.lower), 0.0, 1.0);
  // Rounding can leave the decoded product a hair above the cap.
  for (;;) {
    genes[step_index()] = gene;
    if (is_feasible(decode(Genotype(genes))) || gene == 0.0) break;
    gene = std::nextafter(gene, 0.0);
  }
  return Genotype(genes);
}

Genotype mutate(const Genotype& parent, double sigma, std::mt19937_64& rng,
                const EvoConfig& cfg) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  std::normal_distribution<double> step(0.0, sigma);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::array<double, kGeneCount> genes{};
  for (int attempt = 0; attempt < cfg.max_remutation_attempts; ++attempt) {
    genes = parent.genes();
    for (auto& v : genes) {
      // Probability 1 skips the coin so the stream matches a plain per-gene draw.
      if (cfg.mutation_probability < 1.0 && coin(rng) >= cfg.mutation_probability) continue;
      v = std::clamp(v + step(rng), 0.0, 1.0);
    }
    Genotype child(genes);
    if (is_feasible(decode(child))) return child;
  }
  return clamp_to_speed_cap(Genotype(genes));
}

Genotype random_feasible(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    std::array<double, kGeneCount> genes{};
    for (auto& v : genes) v = u(rng);
    Genotype g(genes);
    if (is_feasible(decode(g))) return g;
  }
}

double hypervolume(std::span<const Fitness> fits, Fitness reference) {
  std::vector<Fitness> pts;
  for (const auto& f : fits)
    if (f.speed > reference.speed && f.stability > reference.stability) pts.push_back(f);
  // Sweep from the fastest point; each adds the strip above the best stability so far.
  std::sort(pts.begin(), pts.end(),
            [](const Fitness& a, const Fitness& b) { return a.speed > b.speed; });
  double area = 0.0;
  double covered = reference.stability;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].stability <= covered) continue;
    area += (pts[i].speed - reference.speed) * (pts[i].stability - covered);
    covered = pts[i].stability;
  }
  return area;
}

namespace {

class Runner {
 public:
  Runner(const Evaluator& evaluator, const EvoConfig& cfg, std::uint64_t seed,
         const RecordSink& sink)
      : evaluator_(evaluator), cfg_(cfg), seed_(seed), sink_(sink) {}

  RunHistory run() {
    std::vector<Individual> pop;
    for (int i = 0; i < cfg_.population; ++i) {
      auto rng = stream(0, i);
      pop.push_back(evaluate(random_feasible(rng), 0, i, std::nullopt, std::nullopt));
    }
    assign_rank_and_crowding(pop);
    history_.survivors.push_back(pop);

    for (int g = 1; g <= cfg_.offspring_generations(); ++g) {
      const double sigma = sigma_schedule(g - 1, cfg_);
      std::vector<Individual> offspring;
      for (int i = 0; i < cfg_.population; ++i) {
        auto rng = stream(g, i);
        const int parent = tournament(pop, rng);
        Genotype child = mutate(pop[parent].genotype, sigma, rng, cfg_);
        offspring.push_back(evaluate(child, g, i, sigma, parent));
      }
      pop = survive(std::move(pop), std::move(offspring));
      history_.survivors.push_back(pop);
    }
    return std::move(history_);
  }

 private:
  std::mt19937_64 stream(int generation, int index) const {
    return std::mt19937_64(derive_seed({seed_, static_cast<std::uint64_t>(generation),
                                        static_cast<std::uint64_t>(index), kVariationStream}));
  }

  Individual evaluate(const Genotype& g, int generation, int index, std::optional<double> sigma,
                      std::optional<int> parent) {
    EvaluationRecord rec;
    rec.generation = generation;
    rec.index = index;
    rec.genotype = g;
    rec.sigma = sigma;
    rec.parent = parent;
    rec.eval_seed = derive_seed({seed_, static_cast<std::uint64_t>(generation),
                                 static_cast<std::uint64_t>(index), kEvaluationStream});
    try {
      rec.evaluation = evaluator_(g, rec.eval_seed);
    } catch (const std::exception& e) {
      throw RunAborted(e.what(), std::move(history_));
    }
    history_.records.push_back(rec);
    if (sink_) sink_(rec);

    Individual ind;
    ind.genotype = g;
    ind.fitness = rec.evaluation.fitness;
    ind.slip_count = rec.evaluation.slip_count;
    ind.fell = rec.evaluation.fell;
    ind.generation = generation;
    ind.index = index;
    return ind;
  }

  int tournament(const std::vector<Individual>& pop, std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(pop.size()) - 1);
    const int a = pick(rng);
    const int b = pick(rng);
    return crowded_less(pop[b], pop[a]) ? b : a;
  }

  // (mu + lambda): fill by front, truncate the last front by crowding.
  std::vector<Individual> survive(std::vector<Individual> parents,
                                  std::vector<Individual> offspring) const {
    std::vector<Individual> pool = std::move(parents);
    pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
                std::make_move_iterator(offspring.end()));
    assign_rank_and_crowding(pool);
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return crowded_less(pool[a], pool[b]);
    });
    std::vector<Individual> next;
    for (std::size_t i = 0; i < static_cast<std::size_t>(cfg_.population); ++i)
      next.push_back(pool[order[i]]);
    assign_rank_and_crowding(next);
    return next;
  }

  const Evaluator& evaluator_;
  const EvoConfig& cfg_;
  std::uint64_t seed_;
  const RecordSink& sink_;
  RunHistory history_;
};

}  // namespace

RunHistory run(const Evaluator& evaluator, const EvoConfig& cfg, std::uint64_t seed,
               const RecordSink& sink) {
  cfg.validate();
  return Runner(evaluator, cfg, seed, sink).run();
}

}  // namespace legevo
