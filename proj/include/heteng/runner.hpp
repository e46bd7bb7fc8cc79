#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "heteng/config.hpp"
#include "heteng/csv.hpp"
#include "heteng/engine.hpp"

namespace heteng {

/// Command-line overrides; anything unset falls through to the config file
/// and then to the built-in defaults.
struct CliOptions {
  std::optional<std::string> config_path;
  std::vector<std::string> algorithms;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> rounds;
  std::optional<int> nodes;
  std::string out_dir = ".";
};

namespace detail {

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Load the scenario (config file if given, defaults otherwise) and fold in
/// the command-line overrides.
inline ScenarioConfig resolve_scenario(const CliOptions& options) {
  ScenarioConfig config;
  if (options.config_path) {
    std::ifstream file(*options.config_path);
    if (!file)
      throw ConfigError("cannot read config file: " + *options.config_path);
    std::ostringstream text;
    text << file.rdbuf();
    config = parse_config(text.str());
  }

  if (!options.algorithms.empty()) {
    config.algorithms.clear();
    for (const auto& name : options.algorithms)
      config.algorithms.push_back(algorithm_from_name(name));
  }
  if (config.algorithms.empty())
    config.algorithms = {Algorithm::HetEng, Algorithm::Leach, Algorithm::Heed};

  if (options.seed) config.seed = *options.seed;
  if (options.runs) config.sim.runs = *options.runs;
  if (options.rounds) config.sim.rounds = *options.rounds;
  if (options.nodes) config.sim.node_count = *options.nodes;

  if (config.sim.runs < 1) throw ConfigError("runs: must be >= 1");
  if (config.sim.rounds < 1) throw ConfigError("rounds: must be >= 1");
  if (config.sim.node_count < 1) throw ConfigError("nodes: must be >= 1");
  if (!config.sim.valid())
    throw ConfigError("configuration failed final validation");
  return config;
}

/// Run every (algorithm, run) pair and write the output files:
/// <algo>_run<k>.csv per run, <algo>_avg.csv per algorithm, and a manifest
/// echoing the resolved configuration.
inline void run_experiment(const ScenarioConfig& config,
                           const std::string& out_dir,
                           const std::optional<std::string>& config_path = {},
                           std::ostream& log = std::cerr) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory: " + out_dir +
                             " (" + ec.message() + ")");

  for (Algorithm algorithm : config.algorithms) {
    const std::string name = algorithm_name(algorithm);
    std::vector<std::vector<RoundMetrics>> series;
    series.reserve(config.sim.runs);
    for (int run = 0; run < config.sim.runs; ++run) {
      RunResult result =
          run_simulation(config.sim, algorithm, config.seed, run);
      const fs::path path =
          fs::path(out_dir) / (name + "_run" + std::to_string(run) + ".csv");
      write_csv(result.rows, path.string());
      log << name << " run " << run << ": " << result.rows.size()
          << " rounds written to " << path.string() << '\n';
      series.push_back(std::move(result.rows));
    }
    const std::vector<RoundMetrics> avg = average_series(series);
    const fs::path avg_path = fs::path(out_dir) / (name + "_avg.csv");
    write_csv(avg, avg_path.string());
    log << name << " average written to " << avg_path.string() << '\n';
  }

  nlohmann::ordered_json manifest;
  manifest["config_path"] = config_path ? nlohmann::ordered_json(*config_path)
                                        : nlohmann::ordered_json(nullptr);
  manifest["output_dir"] = out_dir;
  nlohmann::ordered_json algos = nlohmann::ordered_json::array();
  for (Algorithm a : config.algorithms) algos.push_back(algorithm_name(a));
  manifest["algorithms"] = algos;
  manifest["timestamp"] = detail::utc_timestamp();
  manifest["resolved_config"] = to_json(config);

  const fs::path manifest_path = fs::path(out_dir) / "manifest.json";
  std::ofstream file(manifest_path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw std::runtime_error("cannot write manifest: " + manifest_path.string());
  file << manifest.dump(2) << '\n';
}

/// Full CLI entry: resolve, run, report. Returns a process exit status.
inline int run_cli(const CliOptions& options, std::ostream& log = std::cerr) {
  try {
    const ScenarioConfig config = resolve_scenario(options);
    run_experiment(config, options.out_dir, options.config_path, log);
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace heteng
