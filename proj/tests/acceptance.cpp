// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "legevo/analysis.hpp"
#include "legevo/fitness.hpp"
#include "legevo/harness.hpp"
#include "legevo/kinematics.hpp"
#include "legevo/nsga2.hpp"
#include "legevo/simbench.hpp"
#include "oracles.hpp"

using namespace legevo;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.detail += " (over time limit)";
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("legevo_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

// Default experiment for a seed, written once and shared by several criteria.
fs::path experiment(std::uint64_t seed) {
  const fs::path out = scratch("seed" + std::to_string(seed));
  ExperimentConfig cfg;
  cfg.seed = seed;
  cfg.output_dir = out;
  cmd_evolve(cfg);
  return out;
}

Trace alternating(double acc, double ang) {
  Trace t;
  for (int i = 0; i < 100; ++i) {
    TraceSample s;
    s.t = 0.01 * i;
    const double sign = i % 2 == 0 ? -1.0 : 1.0;
    s.linear_acceleration = Eigen::Vector3d::Constant(sign * acc);
    s.orientation = Eigen::Vector3d::Constant(sign * ang);
    t.samples.push_back(s);
  }
  return t;
}

Trace straight(double dx, double duration) {
  Trace t;
  for (int i = 0; i <= 10; ++i) {
    TraceSample s;
    s.t = duration * i / 10.0;
    s.body_position = Eigen::Vector3d(dx * i / 10.0, 0.0, 0.3);
    t.samples.push_back(s);
  }
  return t;
}

double max_speed(const std::vector<RunArchive>& archives, double voltage) {
  double best = 0.0;
  for (const auto& a : archives) {
    if (a.voltage != voltage) continue;
    for (const auto& ind : a.final_population())
      if (ind.rank == 0) best = std::max(best, ind.fitness->speed);
  }
  return best;
}

}  // namespace

int main() {
  report(1, "nondominated-sort-oracle", 5.0, [] {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(1, 64);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> grid(0, 5);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Fitness> f(size(rng));
      for (auto& x : f)
        x = trial % 2 ? Fitness{u(rng), -u(rng)} : Fitness{double(grid(rng)), -double(grid(rng))};
      auto got = fast_non_dominated_sort(f);
      auto want = oracle::peel_fronts(f);
      for (auto& fr : got) std::sort(fr.begin(), fr.end());
      for (auto& fr : want) std::sort(fr.begin(), fr.end());
      mismatches += got != want;
    }
    return Outcome{mismatches == 0, std::to_string(mismatches) + " of 200 populations differ"};
  });

  report(2, "fitness-arithmetic", 1.0, [] {
    double worst = 0.0;
    worst = std::max(worst, std::abs(stability_fitness(alternating(1.0, 0.1)) - (-0.36)));
    worst = std::max(worst, std::abs(stability_fitness(alternating(0.0, 0.0)) - 0.0));
    const std::vector<double> g{0, 2, 0, 2};
    worst = std::max(worst, std::abs(population_std(g) - 1.0));
    worst = std::max(worst, std::abs(speed_fitness(straight(1.5, 15.0)) - 6.0));
    worst = std::max(worst, std::abs(speed_fitness(straight(0.0, 5.0)) - 0.0));
    return Outcome{worst <= 1e-9, fmt("max error %.3g", worst)};
  });

  report(3, "kinematics-round-trip", 1.0, [] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> fe(0.0, 0.025), te(0.0, 0.095), u(0.0, 1.0);
    std::normal_distribution<double> n(0.0, 1.0);
    double worst = 0.0;
    for (int m = 0; m < 50; ++m) {
      const LegGeometry geom = LegGeometry::from_extensions(fe(rng), te(rng));
      const double lo = min_reach(geom) + 1e-6, hi = max_reach(geom) - 1e-6;
      for (int i = 0; i < 1000; ++i) {
        Eigen::Vector3d dir(n(rng), n(rng), n(rng));
        const Eigen::Vector3d target = dir.normalized() * (lo + u(rng) * (hi - lo));
        worst = std::max(worst, (forward(geom, inverse(geom, target)) - target).norm());
      }
    }
    const bool exact = forward(LegGeometry::from_extensions(0.0, 0.0), {}) == Eigen::Vector3d(0, 0, -0.550) &&
                       forward(LegGeometry::from_extensions(0.025, 0.095), {}) == Eigen::Vector3d(0, 0, -0.670);
    return Outcome{worst < 1e-6 && exact,
                   fmt("max round-trip error %.3g m, full extension exact: ", worst) + (exact ? "yes" : "no")};
  });

  const fs::path seed1 = experiment(1);
  const auto archives1 = load_archives(seed1);

  report(4, "speed-cap-integrity", 0.0, [&] {
    std::size_t logged = 0, violations = 0;
    for (const auto& a : archives1)
      for (const auto& r : a.records) {
        ++logged;
        const double product = r["params"]["step_length"].get<double>() * r["params"]["gait_frequency"].get<double>() * 60.0;
        const GaitParams p = decode(r["genotype"].get<Genotype>());
        if (product > 10.0 || p.step_length * p.gait_frequency * 60.0 > 10.0) ++violations;
      }
    return Outcome{violations == 0 && archives1.size() == 6,
                   std::to_string(violations) + " violations in " + std::to_string(logged) + " logged individuals"};
  });

  report(5, "deterministic-logs", 0.0, [&] {
    const fs::path again = experiment(1);
    int differing = 0;
    for (const auto& a : archives1) {
      const fs::path other = again / "runs" / a.dir.filename();
      differing += slurp(a.dir / "evaluations.jsonl") != slurp(other / "evaluations.jsonl");
    }
    fs::remove_all(again);
    return Outcome{differing == 0, std::to_string(differing) + " of 6 evaluation logs differ"};
  });

  report(6, "sigma-schedule", 0.0, [&] {
    // Offspring of generation k are mutated with step g = k - 1.
    const double expected[] = {1.0 / 6.0, 1.0 / 6.0 - 0.05, 1.0 / 6.0 - 0.1, 0.05, 0.05, 0.05, 0.05};
    std::size_t checked = 0, wrong = 0;
    for (const auto& a : archives1)
      for (const auto& r : a.records) {
        const int k = r["generation"].get<int>();
        if (k == 0) {
          wrong += !r["sigma"].is_null();
          continue;
        }
        ++checked;
        const double want = k - 1 < 7 ? expected[k - 1] : 0.05;
        if (r["sigma"].get<double>() != std::max(want, 0.05)) ++wrong;
      }
    return Outcome{wrong == 0 && checked > 0,
                   std::to_string(wrong) + " mismatches in " + std::to_string(checked) + " logged sigmas"};
  });

  report(7, "voltage-effect-on-front", 300.0, [&] {
    int wins = 0;
    std::string detail;
    for (std::uint64_t seed : {1, 2, 3}) {
      const fs::path dir = seed == 1 ? seed1 : experiment(seed);
      const auto archives = seed == 1 ? archives1 : load_archives(dir);
      const double hi = max_speed(archives, kHighVoltage);
      const double lo = max_speed(archives, kLowVoltage);
      wins += hi > lo;
      detail += fmt("seed %.0f: %.2f vs %.2f m/min; ", double(seed), hi, lo);
      if (seed != 1) fs::remove_all(dir);
    }
    return Outcome{wins == 3, detail + std::to_string(wins) + " of 3 favour 14.8 V"};
  });

  report(8, "reevaluation-effect", 60.0, [&] {
    ExperimentConfig cfg;
    const auto rep = cmd_reevaluate(archives1, cfg, kHighVoltage, kLowVoltage, seed1 / "reports");
    const auto& cands = rep["candidates"];
    if (cands.size() < 2) return Outcome{false, "fewer than two candidates"};
    auto change = [](const nlohmann::json& c) {
      const double before = c["speed"]["original"]["mean"].get<double>();
      const double after = c["speed"]["reduced"]["mean"].get<double>();
      return 100.0 * (after - before) / before;
    };
    const double slowest = change(cands.front());
    const double fastest = change(cands.back());
    return Outcome{fastest <= -10.0 && slowest > -5.0,
                   fmt("fastest %+.1f%%, slowest %+.1f%%", fastest, slowest)};
  });

  report(9, "statistics", 0.0, [] {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> n(1, 7);
    std::uniform_int_distribution<int> tie(0, 4);
    std::normal_distribution<double> z(0.0, 1.0);
    int bad_p = 0, bad_delta = 0;
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<double> x(n(rng)), y(n(rng));
      for (auto* v : {&x, &y})
        for (auto& e : *v) e = trial % 3 == 0 ? tie(rng) : z(rng);
      const auto r = mann_whitney_u(x, y);
      bad_p += !r.exact || std::abs(r.p - oracle::permutation_p(x, y)) > 1e-12;
      bad_delta += cliffs_delta(x, y) != oracle::cliffs_by_pairs(x, y);
    }
    const std::vector<double> p{0.01, 0.04};
    const auto adj = holm_correction(p);
    const bool holm = std::abs(adj[0] - 0.02) < 1e-15 && std::abs(adj[1] - 0.04) < 1e-15;
    return Outcome{bad_p == 0 && bad_delta == 0 && holm,
                   std::to_string(bad_p) + " p mismatches, " + std::to_string(bad_delta) +
                       " delta mismatches, Holm " + (holm ? "ok" : "wrong")};
  });

  report(10, "perfect-tracking-speed", 0.0, [] {
    std::mt19937_64 rng(10);
    EvalConfig c;
    c.actuation_noise_std = 0.0;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const GaitParams p = fixtures::perfect_tracking_gait(rng);
      const auto r = evaluate(p, fixtures::geometry(p), c);
      const double want = 60.0 * p.step_length * p.gait_frequency / (1.0 - p.lift_duration);
      worst = std::max(worst, r.fell ? 1.0 : std::abs(r.speed / want - 1.0));
    }
    return Outcome{worst <= 0.02, fmt("worst relative error %.2f%%", 100.0 * worst)};
  });

  fs::remove_all(seed1);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
