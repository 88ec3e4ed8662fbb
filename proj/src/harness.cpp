#include "legevo/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "legevo/analysis.hpp"
#include "legevo/seeding.hpp"
#include "svg.hpp"

namespace legevo {

using nlohmann::json;

namespace {

constexpr std::uint64_t kReevaluationStream = 0x7265657661ULL;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("'" + key + "': expected a non-negative integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  auto num = [](double EvalConfig::*field) {
    return Setter([field](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.eval.*field = parse_double(k, v);
    });
  };
  static const std::map<std::string, Setter> table{
      {"voltages",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.voltages.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) c.voltages.push_back(parse_double(k, trim(item)));
       }},
      {"runs", [](ExperimentConfig& c, const std::string& k,
                  const std::string& v) { c.runs_per_voltage = static_cast<int>(parse_int(k, v)); }},
      {"seed", [](ExperimentConfig& c, const std::string& k,
                  const std::string& v) { c.seed = parse_u64(k, v); }},
      {"population", [](ExperimentConfig& c, const std::string& k,
                        const std::string& v) { c.evo.population = static_cast<int>(parse_int(k, v)); }},
      {"generations", [](ExperimentConfig& c, const std::string& k,
                         const std::string& v) { c.evo.generations = static_cast<int>(parse_int(k, v)); }},
      {"initial_counts_as_generation",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.evo.initial_counts_as_generation = parse_bool(k, v);
       }},
      {"mutation_probability", [](ExperimentConfig& c, const std::string& k,
                                  const std::string& v) { c.evo.mutation_probability = parse_double(k, v); }},
      {"sigma_initial", [](ExperimentConfig& c, const std::string& k,
                           const std::string& v) { c.evo.sigma_initial = parse_double(k, v); }},
      {"sigma_decay", [](ExperimentConfig& c, const std::string& k,
                         const std::string& v) { c.evo.sigma_decay = parse_double(k, v); }},
      {"sigma_min", [](ExperimentConfig& c, const std::string& k,
                       const std::string& v) { c.evo.sigma_min = parse_double(k, v); }},
      {"max_remutation_attempts",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.evo.max_remutation_attempts = static_cast<int>(parse_int(k, v));
       }},
      {"control_rate", num(&EvalConfig::control_rate)},
      {"trace_rate", num(&EvalConfig::trace_rate)},
      {"target_distance", num(&EvalConfig::target_distance)},
      {"timeout", num(&EvalConfig::timeout)},
      {"noise_std", num(&EvalConfig::actuation_noise_std)},
      {"noise_correlation_time", num(&EvalConfig::noise_correlation_time)},
      {"slip_threshold", num(&EvalConfig::slip_threshold)},
      {"contact_tolerance", num(&EvalConfig::contact_tolerance)},
      {"fall_penalty", num(&EvalConfig::fall_penalty)},
      {"stability_alpha", [](ExperimentConfig& c, const std::string& k,
                             const std::string& v) { c.eval.weights.alpha = parse_double(k, v); }},
      {"standing_height", [](ExperimentConfig& c, const std::string& k,
                             const std::string& v) { c.eval.frame.standing_height = parse_double(k, v); }},
      {"reevaluations", [](ExperimentConfig& c, const std::string& k,
                           const std::string& v) { c.reevaluation_count = static_cast<int>(parse_int(k, v)); }},
      {"selection", [](ExperimentConfig& c, const std::string& k,
                       const std::string& v) { c.selection_count = static_cast<int>(parse_int(k, v)); }},
      {"output_dir", [](ExperimentConfig& c, const std::string&,
                        const std::string& v) { c.output_dir = v; }},
  };
  return table;
}

std::string voltage_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::vector<json> read_json_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw IoError("malformed line in " + path.string() + ": " + e.what());
    }
  }
  return out;
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok")) throw IoError("output directory not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

json record_json(const EvaluationRecord& r, double voltage, int run) {
  json j;
  j["run"] = run;
  j["voltage"] = voltage;
  j["generation"] = r.generation;
  j["index"] = r.index;
  j["genotype"] = r.genotype;
  j["params"] = decode(r.genotype);
  j["speed"] = r.evaluation.fitness.speed;
  j["stability"] = r.evaluation.fitness.stability;
  j["slip_count"] = r.evaluation.slip_count;
  j["fell"] = r.evaluation.fell;
  j["sigma"] = r.sigma ? json(*r.sigma) : json(nullptr);
  j["parent"] = r.parent ? json(*r.parent) : json(nullptr);
  j["eval_seed"] = r.eval_seed;
  return j;
}

json member_json(const Individual& ind) {
  return {{"generation", ind.generation},
          {"index", ind.index},
          {"rank", ind.rank},
          {"crowding", std::isfinite(ind.crowding) ? json(ind.crowding) : json(nullptr)}};
}

Individual individual_from_record(const json& rec) {
  Individual ind;
  ind.genotype = rec.at("genotype").get<Genotype>();
  ind.fitness = Fitness{rec.at("speed").get<double>(), rec.at("stability").get<double>()};
  ind.slip_count = rec.at("slip_count").get<int>();
  ind.fell = rec.at("fell").get<bool>();
  ind.generation = rec.at("generation").get<int>();
  ind.index = rec.at("index").get<int>();
  return ind;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
};

// Welford update: identical samples give exactly their value and zero spread.
MeanStd mean_std(const std::vector<double>& v) {
  MeanStd m;
  double ss = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double d = v[k] - m.mean;
    m.mean += d / static_cast<double>(k + 1);
    ss += d * (v[k] - m.mean);
  }
  if (v.size() > 1) m.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return m;
}

double percent_change(double from, double to) {
  if (from == 0.0) return to == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  return 100.0 * (to - from) / std::abs(from);
}

json nan_to_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<const RunArchive*> at_voltage(const std::vector<RunArchive>& archives, double v) {
  std::vector<const RunArchive*> out;
  for (const auto& a : archives)
    if (a.voltage == v) out.push_back(&a);
  return out;
}

std::vector<Individual> pooled_final(const std::vector<const RunArchive*>& group) {
  std::vector<Individual> out;
  for (const auto* a : group)
    for (const auto& ind : a->final_population()) out.push_back(ind);
  return out;
}

std::vector<double> distinct_voltages(const std::vector<RunArchive>& archives) {
  std::set<double, std::greater<>> vs;
  for (const auto& a : archives) vs.insert(a.voltage);
  return {vs.begin(), vs.end()};
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (voltages.empty()) throw ConfigError("at least one voltage is required");
  for (double v : voltages)
    if (!(v >= kLowVoltage && v <= kHighVoltage))
      throw ConfigError("voltage " + voltage_tag(v) + " outside [12, 14.8] V");
  if (runs_per_voltage < 1) throw ConfigError("runs must be positive");
  if (reevaluation_count < 1) throw ConfigError("reevaluations must be positive");
  if (selection_count < 1) throw ConfigError("selection must be positive");
  try {
    evo.validate();
    eval.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

void apply_config(std::istream& in, ExperimentConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(cfg, key, value);
  }
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  ExperimentConfig cfg;
  apply_config(in, cfg);
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  const auto& e = cfg.eval;
  return {
      {"voltages", cfg.voltages},
      {"runs", cfg.runs_per_voltage},
      {"seed", cfg.seed},
      {"population", cfg.evo.population},
      {"generations", cfg.evo.generations},
      {"initial_counts_as_generation", cfg.evo.initial_counts_as_generation},
      {"mutation_probability", cfg.evo.mutation_probability},
      {"sigma_initial", cfg.evo.sigma_initial},
      {"sigma_decay", cfg.evo.sigma_decay},
      {"sigma_min", cfg.evo.sigma_min},
      {"max_remutation_attempts", cfg.evo.max_remutation_attempts},
      {"control_rate", e.control_rate},
      {"trace_rate", e.trace_rate},
      {"target_distance", e.target_distance},
      {"timeout", e.timeout},
      {"noise_std", e.actuation_noise_std},
      {"noise_correlation_time", e.noise_correlation_time},
      {"slip_threshold", e.slip_threshold},
      {"contact_tolerance", e.contact_tolerance},
      {"fall_penalty", e.fall_penalty},
      {"stability_alpha", e.weights.alpha},
      {"standing_height", e.frame.standing_height},
      {"reevaluations", cfg.reevaluation_count},
      {"selection", cfg.selection_count},
  };
}

std::uint64_t run_seed(std::uint64_t experiment_seed, int run) {
  return derive_seed({experiment_seed, static_cast<std::uint64_t>(run)});
}

Evaluator make_evaluator(const EvalConfig& base, double voltage) {
  return [base, voltage](const Genotype& g, std::uint64_t seed) {
    EvalConfig c = base;
    c.voltage = voltage;
    c.seed = seed;
    const GaitParams p = decode(g);
    const auto r = evaluate(p, LegGeometry::from_extensions(p.femur_ext, p.tibia_ext), c);
    return Evaluation{{r.speed, r.stability}, r.slip_count, r.fell};
  };
}

std::string archive_name(double voltage, int run) {
  return "v" + voltage_tag(voltage) + "_run" + std::to_string(run);
}

std::vector<fs::path> cmd_evolve(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path runs_dir = cfg.output_dir / "runs";
  ensure_writable(runs_dir);
  write_text(cfg.output_dir / "experiment.json", to_json(cfg).dump(2) + "\n");

  std::vector<fs::path> written;
  for (double voltage : cfg.voltages) {
    for (int run = 0; run < cfg.runs_per_voltage; ++run) {
      const fs::path dir = runs_dir / archive_name(voltage, run);
      ensure_writable(dir);
      const std::uint64_t seed = run_seed(cfg.seed, run);
      json meta{{"voltage", voltage}, {"run", run}, {"seed", seed}, {"config", to_json(cfg)}};
      write_text(dir / "run.json", meta.dump(2) + "\n");

      std::ofstream log(dir / "evaluations.jsonl", std::ios::binary);
      if (!log) throw IoError("cannot write " + (dir / "evaluations.jsonl").string());
      const RecordSink sink = [&](const EvaluationRecord& r) {
        log << record_json(r, voltage, run).dump() << '\n';
      };
      RunHistory history;
      try {
        history = legevo::run(make_evaluator(cfg.eval, voltage), cfg.evo, seed, sink);
      } catch (const RunAborted&) {
        log.flush();  // the partial log stays on disk
        throw;
      }
      log.flush();
      if (!log) throw IoError("write failed: " + (dir / "evaluations.jsonl").string());

      std::string survivors;
      for (std::size_t g = 0; g < history.survivors.size(); ++g) {
        json line{{"generation", g}, {"members", json::array()}};
        for (const auto& ind : history.survivors[g]) line["members"].push_back(member_json(ind));
        survivors += line.dump() + "\n";
      }
      write_text(dir / "survivors.jsonl", survivors);

      json final_pop = json::array();
      for (const auto& ind : history.final_population()) {
        json j = member_json(ind);
        j["genotype"] = ind.genotype;
        j["params"] = decode(ind.genotype);
        j["speed"] = ind.fitness->speed;
        j["stability"] = ind.fitness->stability;
        final_pop.push_back(j);
      }
      write_text(dir / "final_population.json", final_pop.dump(2) + "\n");
      written.push_back(dir);
    }
  }
  return written;
}

std::vector<RunArchive> load_archives(const fs::path& experiment_dir) {
  const fs::path runs_dir = experiment_dir / "runs";
  if (!fs::is_directory(runs_dir)) {
    if (!fs::exists(experiment_dir))
      throw IoError("no such experiment directory: " + experiment_dir.string());
    return {};
  }
  std::vector<RunArchive> out;
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    if (!entry.is_directory() || !fs::exists(entry.path() / "run.json")) continue;
    RunArchive a;
    a.dir = entry.path();
    try {
      const json meta = read_json(a.dir / "run.json");
      a.voltage = meta.at("voltage").get<double>();
      a.run = meta.at("run").get<int>();
      a.seed = meta.at("seed").get<std::uint64_t>();
      a.records = read_json_lines(a.dir / "evaluations.jsonl");

      std::map<std::pair<int, int>, const json*> by_id;
      for (const auto& r : a.records)
        by_id[{r.at("generation").get<int>(), r.at("index").get<int>()}] = &r;
      for (const auto& line : read_json_lines(a.dir / "survivors.jsonl")) {
        std::vector<Individual> gen;
        for (const auto& m : line.at("members")) {
          const auto it = by_id.find({m.at("generation").get<int>(), m.at("index").get<int>()});
          if (it == by_id.end()) throw IoError("survivor without a logged evaluation in " + a.dir.string());
          Individual ind = individual_from_record(*it->second);
          ind.rank = m.at("rank").get<int>();
          ind.crowding = m.at("crowding").is_null() ? std::numeric_limits<double>::infinity()
                                                    : m.at("crowding").get<double>();
          gen.push_back(ind);
        }
        a.survivors.push_back(std::move(gen));
      }
    } catch (const json::exception& e) {
      throw IoError("malformed archive " + a.dir.string() + ": " + e.what());
    }
    if (a.survivors.empty()) throw IoError("archive has no survivors: " + a.dir.string());
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end(), [](const RunArchive& x, const RunArchive& y) {
    if (x.voltage != y.voltage) return x.voltage > y.voltage;
    return x.run < y.run;
  });
  return out;
}

std::vector<Candidate> select_candidates(const std::vector<RunArchive>& archives, double voltage,
                                         int count) {
  std::vector<Candidate> pool;
  for (const auto* a : at_voltage(archives, voltage))
    for (const auto& ind : a->final_population()) pool.push_back({ind, a->run});
  if (pool.empty()) return {};
  std::vector<Fitness> fits;
  for (const auto& c : pool) fits.push_back(*c.individual.fitness);
  std::vector<Candidate> front;
  const auto fronts = fast_non_dominated_sort(fits);
  for (auto i : fronts.front()) front.push_back(pool[i]);
  // Ties broken by origin so the choice never depends on archive order.
  std::sort(front.begin(), front.end(), [](const Candidate& a, const Candidate& b) {
    const auto& x = a.individual;
    const auto& y = b.individual;
    if (x.fitness->speed != y.fitness->speed) return x.fitness->speed < y.fitness->speed;
    return std::tie(a.run, x.generation, x.index) < std::tie(b.run, y.generation, y.index);
  });
  std::vector<std::size_t> picks;
  const std::size_t m = front.size();
  for (int k = 0; k < count; ++k) {
    const double q = count == 1 ? 1.0 : static_cast<double>(k) / (count - 1);
    const auto i = static_cast<std::size_t>(std::lround(q * static_cast<double>(m - 1)));
    if (picks.empty() || picks.back() != i) picks.push_back(i);
  }
  std::vector<Candidate> out;
  for (auto i : picks) out.push_back(front[i]);
  return out;
}

json cmd_reevaluate(const std::vector<RunArchive>& archives, const ExperimentConfig& cfg,
                    double original, double reduced, const fs::path& out) {
  cfg.validate();
  if (!(reduced >= kLowVoltage && reduced <= kHighVoltage))
    throw ConfigError("voltage " + voltage_tag(reduced) + " outside [12, 14.8] V");
  ensure_writable(out);
  const auto candidates = select_candidates(archives, original, cfg.selection_count);

  struct Row {
    const Individual* ind;
    int run;
    std::vector<double> speed[2], stability[2];
  };
  std::vector<Row> rows;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    Row row{&candidates[c].individual, candidates[c].run, {}, {}};
    const GaitParams p = decode(row.ind->genotype);
    const auto geom = LegGeometry::from_extensions(p.femur_ext, p.tibia_ext);
    const double volts[2] = {original, reduced};
    for (int side = 0; side < 2; ++side) {
      EvalConfig ec = cfg.eval;
      ec.voltage = volts[side];
      // Same seeds at both voltages: each pair differs only in the supply.
      ec.seed = derive_seed({cfg.seed, kReevaluationStream, static_cast<std::uint64_t>(c)});
      for (const auto& r : reevaluate(p, geom, ec, cfg.reevaluation_count)) {
        row.speed[side].push_back(r.speed);
        row.stability[side].push_back(r.stability);
      }
    }
    rows.push_back(std::move(row));
  }

  std::vector<double> raw;
  for (const auto& row : rows) {
    raw.push_back(mann_whitney_u(row.speed[0], row.speed[1]).p);
    raw.push_back(mann_whitney_u(row.stability[0], row.stability[1]).p);
  }
  const auto adjusted = holm_correction(raw);

  json report{{"original_voltage", original},
               {"reduced_voltage", reduced},
               {"evaluations", cfg.reevaluation_count},
               {"alpha", 0.05},
               {"candidates", json::array()}};
  std::string csv =
      "candidate,source_run,generation,index,voltage,objective,mean,std,change_pct,p_raw,p_holm,significant\n";
  for (std::size_t c = 0; c < rows.size(); ++c) {
    const auto& row = rows[c];
    json entry{{"run", row.run},
               {"generation", row.ind->generation},
               {"index", row.ind->index},
               {"genotype", row.ind->genotype},
               {"params", decode(row.ind->genotype)},
               {"archived", {{"speed", row.ind->fitness->speed},
                             {"stability", row.ind->fitness->stability}}}};
    const std::pair<const char*, const std::vector<double>*> objectives[2] = {
        {"speed", row.speed}, {"stability", row.stability}};
    for (int o = 0; o < 2; ++o) {
      const auto& [name, samples] = objectives[o];
      const MeanStd before = mean_std(samples[0]);
      const MeanStd after = mean_std(samples[1]);
      const double change = percent_change(before.mean, after.mean);
      const double p_raw = raw[2 * c + o];
      const double p_holm = adjusted[2 * c + o];
      entry[name] = {{"original", {{"mean", before.mean}, {"std", before.std}}},
                     {"reduced", {{"mean", after.mean}, {"std", after.std}}},
                     {"change_pct", nan_to_null(change)},
                     {"p_raw", p_raw},
                     {"p_holm", p_holm},
                     {"significant", p_holm < 0.05}};
      const MeanStd sides[2] = {before, after};
      const double volts[2] = {original, reduced};
      for (int side = 0; side < 2; ++side) {
        csv += std::to_string(c) + "," + std::to_string(row.run) + "," + std::to_string(row.ind->generation) + "," +
               std::to_string(row.ind->index) + "," + csv_num(volts[side]) + "," + name + "," +
               csv_num(sides[side].mean) + "," + csv_num(sides[side].std) + "," +
               (side == 1 ? csv_num(change) : std::string()) + "," + csv_num(p_raw) + "," +
               csv_num(p_holm) + "," + (p_holm < 0.05 ? "1" : "0") + "\n";
      }
    }
    report["candidates"].push_back(entry);
  }
  write_text(out / "reevaluation.json", report.dump(2) + "\n");
  write_text(out / "reevaluation.csv", csv);
  return report;
}

json cmd_analyze(const std::vector<RunArchive>& archives, const fs::path& out) {
  const auto volts = distinct_voltages(archives);
  if (volts.size() < 2) throw std::domain_error("analysis needs archives at two voltages");
  ensure_writable(out);
  const double hi = volts.front();
  const double lo = volts.back();
  const auto pop_hi = pooled_final(at_voltage(archives, hi));
  const auto pop_lo = pooled_final(at_voltage(archives, lo));

  struct Block {
    const char* name;
    std::size_t first, count;
  };
  // Genes 0..7 drive the gait, 8..9 set the segment extensions.
  const Block blocks[2] = {{"morphology", 8, 2}, {"control", 0, 8}};

  json comparisons = json::array();
  std::vector<double> raw;
  for (const auto& b : blocks) {
    auto group = [&](const std::vector<Individual>& pop, double v) {
      GroupSample g{voltage_tag(v) + " V", {}};
      for (const auto& ind : pop) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(b.count));
        for (std::size_t i = 0; i < b.count; ++i) x(static_cast<Eigen::Index>(i)) = ind.genotype[b.first + i];
        g.vectors.push_back(x);
      }
      return g;
    };
    const auto lda = lda_project(group(pop_hi, hi), group(pop_lo, lo));
    const auto mw = mann_whitney_u(lda.projected_a, lda.projected_b);
    json genes = json::array();
    for (std::size_t i = 0; i < b.count; ++i) genes.push_back(kParamRanges[b.first + i].name);
    comparisons.push_back({{"name", b.name},
                           {"genes", genes},
                           {"U", mw.u},
                           {"exact", mw.exact},
                           {"p_raw", mw.p},
                           {"cliffs_delta", cliffs_delta(lda.projected_a, lda.projected_b)},
                           {"lda_direction", std::vector<double>(lda.direction.data(),
                                                                 lda.direction.data() + lda.direction.size())}});
    raw.push_back(mw.p);
  }
  const auto adjusted = holm_correction(raw);
  for (std::size_t i = 0; i < comparisons.size(); ++i) comparisons[i]["p_holm"] = adjusted[i];

  json report{{"groups",
               {{"a", {{"voltage", hi}, {"size", pop_hi.size()}}},
                {"b", {{"voltage", lo}, {"size", pop_lo.size()}}}}},
              {"comparisons", comparisons}};
  write_text(out / "analysis.json", report.dump(2) + "\n");
  return report;
}

std::vector<fs::path> cmd_plot(const std::vector<RunArchive>& archives, const fs::path& out) {
  if (archives.empty()) return {};
  ensure_writable(out);
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text(out / name, text);
    written.push_back(out / name);
  };

  std::string evals = "voltage,run,generation,index";
  for (const auto& r : kParamRanges) evals += "," + std::string(r.name) + "_gene";
  evals += ",speed,stability,slip_count,fell\n";
  for (const auto& a : archives)
    for (const auto& r : a.records) {
      evals += csv_num(a.voltage) + "," + std::to_string(a.run) + "," +
               std::to_string(r.at("generation").get<int>()) + "," +
               std::to_string(r.at("index").get<int>());
      for (double g : r.at("genotype")) evals += "," + csv_num(g);
      evals += "," + csv_num(r.at("speed").get<double>()) + "," +
               csv_num(r.at("stability").get<double>()) + "," +
               std::to_string(r.at("slip_count").get<int>()) + "," +
               (r.at("fell").get<bool>() ? "1" : "0") + "\n";
    }
  emit("evaluations.csv", evals);

  std::string finals = "voltage,run,generation,index,rank,speed,stability,femur_ext,tibia_ext\n";
  std::string fronts = "voltage,generation,speed,stability\n";
  const auto volts = distinct_voltages(archives);
  double speed_lo = std::numeric_limits<double>::infinity();
  double speed_hi = -speed_lo;
  for (const auto& a : archives)
    for (const auto& ind : a.final_population()) {
      speed_lo = std::min(speed_lo, ind.fitness->speed);
      speed_hi = std::max(speed_hi, ind.fitness->speed);
    }

  for (double v : volts) {
    const auto group = at_voltage(archives, v);
    const std::string tag = voltage_tag(v);

    svg::Chart objectives{"Final populations at " + tag + " V", "speed (m/min)",
                          "stability", {}, false, 0, 1, ""};
    svg::Chart morphology{"Leg segment extensions at " + tag + " V", "femur extension (mm)",
                          "tibia extension (mm)", {}, true, speed_lo, speed_hi, "speed (m/min)"};
    svg::Series morph_points;
    for (std::size_t k = 0; k < group.size(); ++k) {
      const auto* a = group[k];
      svg::Series s{"run " + std::to_string(a->run), svg::category(k), {}, false};
      for (const auto& ind : a->final_population()) {
        const GaitParams p = decode(ind.genotype);
        s.points.push_back({ind.fitness->speed, ind.fitness->stability, s.color});
        const double t = speed_hi > speed_lo ? (ind.fitness->speed - speed_lo) / (speed_hi - speed_lo) : 0.5;
        morph_points.points.push_back({1000.0 * p.femur_ext, 1000.0 * p.tibia_ext, svg::ramp(t)});
        finals += csv_num(v) + "," + std::to_string(a->run) + "," + std::to_string(ind.generation) +
                  "," + std::to_string(ind.index) + "," + std::to_string(ind.rank) + "," +
                  csv_num(ind.fitness->speed) + "," + csv_num(ind.fitness->stability) + "," +
                  csv_num(p.femur_ext) + "," + csv_num(p.tibia_ext) + "\n";
      }
      objectives.series.push_back(std::move(s));
    }
    morphology.series.push_back(std::move(morph_points));
    emit("objectives_v" + tag + ".svg", objectives.render());
    emit("morphology_v" + tag + ".svg", morphology.render());

    // Non-dominated set of the pooled survivors after every generation.
    svg::Chart trace{"Front per generation at " + tag + " V", "speed (m/min)", "stability",
                     {}, false, 0, 1, ""};
    std::size_t generations = 0;
    for (const auto* a : group) generations = std::max(generations, a->survivors.size());
    for (std::size_t g = 0; g < generations; ++g) {
      std::vector<Fitness> fits;
      for (const auto* a : group)
        if (g < a->survivors.size())
          for (const auto& ind : a->survivors[g]) fits.push_back(*ind.fitness);
      std::vector<Fitness> front;
      const auto fronts_g = fast_non_dominated_sort(fits);
      for (auto i : fronts_g.front()) front.push_back(fits[i]);
      std::sort(front.begin(), front.end(),
                [](const Fitness& x, const Fitness& y) { return x.speed < y.speed; });
      const double t = generations > 1 ? static_cast<double>(g) / static_cast<double>(generations - 1) : 1.0;
      svg::Series s{"generation " + std::to_string(g), svg::ramp(t), {}, true};
      for (const auto& f : front) {
        s.points.push_back({f.speed, f.stability, s.color});
        fronts += csv_num(v) + "," + std::to_string(g) + "," + csv_num(f.speed) + "," +
                  csv_num(f.stability) + "\n";
      }
      trace.series.push_back(std::move(s));
    }
    emit("fronts_v" + tag + ".svg", trace.render());
  }
  emit("final_populations.csv", finals);
  emit("fronts.csv", fronts);
  return written;
}

}  // namespace legevo
