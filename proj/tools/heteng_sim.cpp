// Command-line front end: runs the configured cluster-election scenarios and
// writes per-run CSVs, per-algorithm averages, and a manifest.

#include <cstdint>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heteng/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Discrete-round cluster-head election and energy simulator for "
      "heterogeneous sensor networks"};

  heteng::CliOptions options;
  std::string config_path;
  std::uint64_t seed = 0;
  int runs = 0;
  int rounds = 0;
  int nodes = 0;

  app.add_option("--config", config_path, "Scenario config file (JSON)")
      ->check(CLI::ExistingFile);
  app.add_option("--algorithm", options.algorithms,
                 "Election algorithm to run: heteng, leach, or heed "
                 "(repeatable for comparative runs)")
      ->check(CLI::IsMember({"heteng", "leach", "heed"}));
  auto* seed_opt = app.add_option("--seed", seed, "Base RNG seed");
  auto* runs_opt = app.add_option("--runs", runs, "Independent runs per algorithm")
                       ->check(CLI::PositiveNumber);
  auto* rounds_opt = app.add_option("--rounds", rounds, "Rounds per run")
                         ->check(CLI::PositiveNumber);
  auto* nodes_opt = app.add_option("--nodes", nodes, "Number of nodes")
                        ->check(CLI::PositiveNumber);
  app.add_option("--out", options.out_dir, "Output directory")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (!config_path.empty()) options.config_path = config_path;
  if (*seed_opt) options.seed = seed;
  if (*runs_opt) options.runs = runs;
  if (*rounds_opt) options.rounds = rounds;
  if (*nodes_opt) options.nodes = nodes;

  return heteng::run_cli(options);
}
