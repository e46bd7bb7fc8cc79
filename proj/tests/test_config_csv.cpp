#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "heteng/config.hpp"
#include "heteng/csv.hpp"

using namespace heteng;

TEST_CASE("an empty document yields the default scenario") {
  const ScenarioConfig config = parse_config("{}");
  CHECK(config.sim.field.width == 100.0);
  CHECK(config.sim.field.height == 100.0);
  CHECK(config.sim.field.sink.x == 50.0);
  CHECK(config.sim.field.sink.y == 175.0);
  CHECK(config.sim.node_count == 300);
  CHECK(config.sim.election.cluster_radius == 25.0);
  CHECK(config.sim.comm_radius == 25.0);
  CHECK(config.sim.packets.data_bytes == 100);
  CHECK(config.sim.packets.broadcast_bytes == 25);
  CHECK(config.sim.packets.header_bytes == 25);
  CHECK(config.sim.packets.compress_rate == 0.8);
  CHECK(config.sim.frames_per_round == 5);
  CHECK(config.sim.rounds == 1000);
  CHECK(config.sim.runs == 10);
  CHECK(config.sim.election.c_prob == 0.05);
  CHECK(config.sim.election.max_iterations == 20);
  CHECK(config.sim.energy.kind == EnergyInitSpec::Kind::Uniform);
  CHECK(config.sim.energy.uniform_low == 0.5);
  CHECK(config.sim.energy.uniform_high == 2.0);
  CHECK(config.sim.profiles.size() == 5);
  CHECK(config.seed == 42);
  CHECK(config.algorithms.empty());
}

TEST_CASE("partial overrides keep the remaining defaults") {
  const ScenarioConfig config = parse_config(R"({"nodes": 50, "rounds": 100})");
  CHECK(config.sim.node_count == 50);
  CHECK(config.sim.rounds == 100);
  CHECK(config.sim.runs == 10);
  CHECK(config.sim.frames_per_round == 5);
  CHECK(config.sim.election.c_prob == 0.05);
}

TEST_CASE("invalid values are reported with their field path") {
  auto message_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };

  CHECK(message_of(R"({"rounds": 0})").find("rounds") != std::string::npos);
  CHECK(message_of(R"({"nodes": -3})").find("nodes") != std::string::npos);
  CHECK(message_of(R"({"election": {"c_prob": 1.5}})").find("election.c_prob") !=
        std::string::npos);
  CHECK(message_of(R"({"packet": {"compress_rate": 0}})")
            .find("packet.compress_rate") != std::string::npos);
  CHECK(message_of(R"({"seed": -1})").find("seed") != std::string::npos);
  CHECK(message_of(R"({"rounds": "many"})").find("rounds") != std::string::npos);
}

TEST_CASE("unknown keys are rejected loudly") {
  CHECK_THROWS_AS(parse_config(R"({"nods": 50})"), ConfigError);
  try {
    parse_config(R"({"election": {"cprob": 0.05}})");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("election.cprob") != std::string::npos);
  }
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2,3]"), ConfigError);
  CHECK_THROWS_AS(parse_config(""), ConfigError);
}

TEST_CASE("energy distribution kinds parse") {
  SECTION("constant") {
    const auto config =
        parse_config(R"({"energy_init": {"kind": "constant", "value_j": 2.5}})");
    CHECK(config.sim.energy.kind == EnergyInitSpec::Kind::Constant);
    CHECK(config.sim.energy.constant_value == 2.5);
  }
  SECTION("two-tier") {
    const auto config = parse_config(
        R"({"energy_init": {"kind": "two_tier", "base_j": 1.0,
            "fraction": 0.2, "bonus": 0.5}})");
    CHECK(config.sim.energy.kind == EnergyInitSpec::Kind::TwoTier);
    CHECK(config.sim.energy.two_tier_fraction == 0.2);
  }
  SECTION("bad kind") {
    CHECK_THROWS_AS(parse_config(R"({"energy_init": {"kind": "bursty"}})"),
                    ConfigError);
  }
  SECTION("bad parameters") {
    CHECK_THROWS_AS(
        parse_config(R"({"energy_init": {"kind": "uniform", "low_j": -1}})"),
        ConfigError);
  }
}

TEST_CASE("algorithm lists parse and reject typos") {
  const auto config =
      parse_config(R"({"algorithms": ["heteng", "leach", "heed"]})");
  REQUIRE(config.algorithms.size() == 3);
  CHECK(config.algorithms[0] == Algorithm::HetEng);
  CHECK(config.algorithms[1] == Algorithm::Leach);
  CHECK(config.algorithms[2] == Algorithm::Heed);
  CHECK_THROWS_AS(parse_config(R"({"algorithms": ["letch"]})"), ConfigError);
}

TEST_CASE("radio profiles parse and survive a manifest round trip") {
  const std::string text = R"({
    "radio_profiles": [
      {"name": "shortwave", "elec_j_per_bit": 3e-8,
       "amp_near_j_per_bit_m2": 9e-12, "amp_far_j_per_bit_m4": 2e-15,
       "max_range_m": 120}
    ]
  })";
  const auto config = parse_config(text);
  REQUIRE(config.sim.profiles.size() == 1);
  CHECK(config.sim.profiles[0].name == "shortwave");
  CHECK(config.sim.profiles[0].max_range == 120.0);

  // Re-parsing the serialized form reproduces the scenario.
  auto manifest = to_json(config);
  const auto reparsed = parse_config(manifest.dump());
  CHECK(reparsed.sim.profiles.size() == 1);
  CHECK(reparsed.sim.profiles[0].name == "shortwave");
  CHECK(reparsed.sim.node_count == config.sim.node_count);
  CHECK(reparsed.seed == config.seed);

  CHECK_THROWS_AS(parse_config(R"({"radio_profiles": []})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"radio_profiles": [{"name": "x"}]})"), ConfigError);
}

namespace {

RoundMetrics sample_row(int round) {
  RoundMetrics m;
  m.round = round;
  m.alive_count = 300.0;
  m.total_residual_j = 123.456789012345;
  m.coverage_fraction = 0.987654321987;
  m.ch_fraction = 0.05;
  m.election_iterations = 2.5;
  return m;
}

}  // namespace

TEST_CASE("csv output follows the fixed schema") {
  std::vector<RoundMetrics> series = {sample_row(1)};
  const std::string text = to_csv(series);
  std::istringstream lines(text);
  std::string header, row, extra;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  CHECK_FALSE(std::getline(lines, extra));
  CHECK(header ==
        "round,alive_count,total_residual_j,coverage_fraction,ch_fraction,"
        "election_iterations");
  CHECK(row == "1,300,123.456789,0.987654322,0.05,2.5");
  CHECK(text.back() == '\n');
}

TEST_CASE("csv rendering is deterministic and zero rows stay plain") {
  std::vector<RoundMetrics> series = {sample_row(1), RoundMetrics{}};
  series[1].round = 2;
  const std::string a = to_csv(series);
  const std::string b = to_csv(series);
  CHECK(a == b);
  CHECK(a.find("2,0,0,0,0,0\n") != std::string::npos);
  CHECK_THROWS_AS(to_csv(std::vector<RoundMetrics>{}), std::invalid_argument);
}

TEST_CASE("write_csv writes exactly the rendered bytes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "heteng_csv_test";
  fs::create_directories(dir);
  const fs::path path = dir / "out.csv";

  std::vector<RoundMetrics> series = {sample_row(1), sample_row(2)};
  write_csv(series, path.string());

  std::ifstream in(path, std::ios::binary);
  std::ostringstream read_back;
  read_back << in.rdbuf();
  CHECK(read_back.str() == to_csv(series));

  CHECK_THROWS_AS(write_csv(series, (dir / "no_dir" / "x.csv").string()),
                  std::runtime_error);
  fs::remove_all(dir);
}
