// Command-line front end: evolve, reevaluate, analyze, plot.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "legevo/harness.hpp"

using namespace legevo;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> voltage;
  std::string out = "out";
  std::optional<int> runs;
  std::optional<int> generations;
  std::optional<int> population;
  bool extra_generation = false;
  std::vector<std::string> archives;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "key = value configuration file");
  cmd->add_option("--seed", o.seed, "experiment seed");
  cmd->add_option("--out", o.out, "experiment directory")->capture_default_str();
}

ExperimentConfig build_config(const Options& o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  cfg.output_dir = o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (o.runs) cfg.runs_per_voltage = *o.runs;
  if (o.generations) cfg.evo.generations = *o.generations;
  if (o.population) cfg.evo.population = *o.population;
  if (o.extra_generation) cfg.evo.initial_counts_as_generation = false;
  cfg.validate();
  return cfg;
}

std::vector<RunArchive> gather(const Options& o) {
  auto archives = load_archives(o.out);
  for (const auto& dir : o.archives) {
    auto more = load_archives(dir);
    archives.insert(archives.end(), std::make_move_iterator(more.begin()),
                    std::make_move_iterator(more.end()));
  }
  return archives;
}

double highest_voltage(const std::vector<RunArchive>& archives) {
  double v = archives.front().voltage;
  for (const auto& a : archives) v = std::max(v, a.voltage);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-evolution of gait and leg morphology for a quadruped under two supply voltages"};
  app.require_subcommand(1);
  Options o;

  auto* evolve = app.add_subcommand("evolve", "run the evolutionary experiment and write archives");
  add_common(evolve, o);
  evolve->add_option("--voltage", o.voltage, "evolve at this voltage only");
  evolve->add_option("--runs", o.runs, "runs per voltage");
  evolve->add_option("--generations", o.generations, "generations per run");
  evolve->add_option("--population", o.population, "population size");
  evolve->add_flag("--extra-generation", o.extra_generation,
                   "do not count the initial population as one of the generations");

  auto* reeval = app.add_subcommand("reevaluate", "re-evaluate front members at a second voltage");
  add_common(reeval, o);
  reeval->add_option("--voltage", o.voltage, "voltage for the second evaluation (default 12)");

  auto* analyze = app.add_subcommand("analyze", "compare final populations across voltages");
  add_common(analyze, o);
  analyze->add_option("archives", o.archives, "further experiment directories to pool");

  auto* plot = app.add_subcommand("plot", "write SVG figures and CSV data");
  add_common(plot, o);
  plot->add_option("archives", o.archives, "further experiment directories to pool");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    ExperimentConfig cfg = build_config(o);
    if (evolve->parsed()) {
      if (o.voltage) cfg.voltages = {*o.voltage};
      cfg.validate();
      for (const auto& dir : cmd_evolve(cfg)) std::cout << "wrote " << dir.string() << '\n';
    } else if (reeval->parsed()) {
      const auto archives = load_archives(o.out);
      if (archives.empty()) {
        std::cerr << "warning: no archives under " << o.out << '\n';
        return kExitNothingToDo;
      }
      const double original = highest_voltage(archives);
      const auto report = cmd_reevaluate(archives, cfg, original, o.voltage.value_or(kLowVoltage),
                                         cfg.output_dir / "reports");
      std::cout << report.dump(2) << '\n';
    } else if (analyze->parsed()) {
      const auto archives = gather(o);
      if (archives.empty()) {
        std::cerr << "warning: no archives under " << o.out << '\n';
        return kExitNothingToDo;
      }
      std::cout << cmd_analyze(archives, cfg.output_dir / "reports").dump(2) << '\n';
    } else if (plot->parsed()) {
      const auto files = cmd_plot(gather(o), cfg.output_dir / "figures");
      if (files.empty()) {
        std::cerr << "warning: no archives to plot\n";
        return kExitNothingToDo;
      }
      for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
