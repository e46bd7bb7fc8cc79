#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "heteng/engine.hpp"

namespace heteng {

/// Configuration problems carry the offending field's path so a scenario
/// typo fails loudly and points at itself.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A full experiment description: the per-run simulation parameters plus the
/// sweep dimensions (seed, runs, which algorithms to compare).
struct ScenarioConfig {
  SimulationConfig sim;
  std::uint64_t seed = 42;
  std::vector<Algorithm> algorithms;  // empty: compare all three
};

namespace detail {

using Json = nlohmann::ordered_json;

[[noreturn]] inline void fail(const std::string& path, const std::string& why) {
  throw ConfigError(path + ": " + why);
}

inline void require_keys(const Json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) {
        known = true;
        break;
      }
    if (!known) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

inline double get_number(const Json& obj, const std::string& path,
                         const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path + key, "expected a number");
  return v.get<double>();
}

inline int get_int(const Json& obj, const std::string& path, const char* key,
                   int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + key, "expected an integer");
  return v.get<int>();
}

inline std::string get_string(const Json& obj, const std::string& path,
                              const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(path + key, "expected a string");
  return v.get<std::string>();
}

inline void parse_field(const Json& j, FieldSpec& field) {
  require_keys(j, "field", {"width_m", "height_m", "sink"});
  field.width = get_number(j, "field.", "width_m", field.width);
  field.height = get_number(j, "field.", "height_m", field.height);
  if (j.contains("sink")) {
    const auto& s = j.at("sink");
    if (!s.is_object()) fail("field.sink", "expected an object");
    require_keys(s, "field.sink", {"x", "y"});
    field.sink.x = get_number(s, "field.sink.", "x", field.sink.x);
    field.sink.y = get_number(s, "field.sink.", "y", field.sink.y);
  }
  if (field.width <= 0.0) fail("field.width_m", "must be > 0");
  if (field.height <= 0.0) fail("field.height_m", "must be > 0");
}

inline void parse_energy(const Json& j, EnergyInitSpec& spec) {
  require_keys(j, "energy_init",
               {"kind", "low_j", "high_j", "value_j", "base_j", "fraction",
                "bonus", "infinite_fraction"});
  const std::string kind = get_string(j, "energy_init.", "kind", "uniform");
  if (kind == "uniform") {
    spec.kind = EnergyInitSpec::Kind::Uniform;
  } else if (kind == "constant") {
    spec.kind = EnergyInitSpec::Kind::Constant;
  } else if (kind == "two_tier") {
    spec.kind = EnergyInitSpec::Kind::TwoTier;
  } else {
    fail("energy_init.kind", "expected uniform, constant, or two_tier");
  }
  spec.uniform_low = get_number(j, "energy_init.", "low_j", spec.uniform_low);
  spec.uniform_high = get_number(j, "energy_init.", "high_j", spec.uniform_high);
  spec.constant_value = get_number(j, "energy_init.", "value_j", spec.constant_value);
  spec.two_tier_base = get_number(j, "energy_init.", "base_j", spec.two_tier_base);
  spec.two_tier_fraction =
      get_number(j, "energy_init.", "fraction", spec.two_tier_fraction);
  spec.two_tier_bonus = get_number(j, "energy_init.", "bonus", spec.two_tier_bonus);
  spec.infinite_fraction =
      get_number(j, "energy_init.", "infinite_fraction", spec.infinite_fraction);
  if (!spec.valid()) fail("energy_init", "invalid distribution parameters");
}

inline void parse_election(const Json& j, ElectionParams& params) {
  require_keys(j, "election", {"c_prob", "max_iterations", "epsilon_energy_j"});
  params.c_prob = get_number(j, "election.", "c_prob", params.c_prob);
  params.max_iterations =
      get_int(j, "election.", "max_iterations", params.max_iterations);
  params.epsilon_energy =
      get_number(j, "election.", "epsilon_energy_j", params.epsilon_energy);
  if (params.c_prob <= 0.0 || params.c_prob > 1.0)
    fail("election.c_prob", "must be in (0, 1]");
  if (params.max_iterations < 1) fail("election.max_iterations", "must be >= 1");
  if (params.epsilon_energy <= 0.0)
    fail("election.epsilon_energy_j", "must be > 0");
}

inline void parse_packet(const Json& j, PacketSpec& packet) {
  require_keys(j, "packet",
               {"data_bytes", "broadcast_bytes", "header_bytes", "compress_rate"});
  packet.data_bytes = get_int(j, "packet.", "data_bytes", packet.data_bytes);
  packet.broadcast_bytes =
      get_int(j, "packet.", "broadcast_bytes", packet.broadcast_bytes);
  packet.header_bytes = get_int(j, "packet.", "header_bytes", packet.header_bytes);
  packet.compress_rate =
      get_number(j, "packet.", "compress_rate", packet.compress_rate);
  if (packet.data_bytes <= 0) fail("packet.data_bytes", "must be > 0");
  if (packet.broadcast_bytes <= 0) fail("packet.broadcast_bytes", "must be > 0");
  if (packet.header_bytes < 0) fail("packet.header_bytes", "must be >= 0");
  if (packet.compress_rate <= 0.0 || packet.compress_rate > 1.0)
    fail("packet.compress_rate", "must be in (0, 1]");
}

inline RadioProfile parse_profile(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  require_keys(j, path,
               {"name", "elec_j_per_bit", "amp_near_j_per_bit_m2",
                "amp_far_j_per_bit_m4", "max_range_m"});
  RadioProfile p;
  p.name = get_string(j, path + ".", "name", "");
  p.elec_energy = get_number(j, path + ".", "elec_j_per_bit", -1.0);
  p.amp_near = get_number(j, path + ".", "amp_near_j_per_bit_m2", -1.0);
  p.amp_far = get_number(j, path + ".", "amp_far_j_per_bit_m4", -1.0);
  p.max_range = get_number(j, path + ".", "max_range_m", -1.0);
  if (p.name.empty()) fail(path + ".name", "must be a nonempty string");
  if (!p.valid()) fail(path, "coefficients must be >= 0 and max_range_m > 0");
  return p;
}

inline std::vector<Algorithm> parse_algorithms(const Json& arr,
                                               const std::string& path) {
  if (!arr.is_array()) fail(path, "expected an array of algorithm names");
  std::vector<Algorithm> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& v = arr.at(i);
    const std::string item = path + "[" + std::to_string(i) + "]";
    if (!v.is_string()) fail(item, "expected a string");
    try {
      out.push_back(algorithm_from_name(v.get<std::string>()));
    } catch (const std::invalid_argument&) {
      fail(item, "expected heteng, leach, or heed");
    }
  }
  return out;
}

}  // namespace detail

/// Parse a JSON scenario document. Unspecified fields fall back to the
/// defaults baked into the config structs; unknown keys and invalid values
/// are rejected with the field's path.
inline ScenarioConfig parse_config(const std::string& text) {
  detail::Json doc;
  try {
    doc = detail::Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed config document: ") + e.what());
  }
  if (!doc.is_object())
    throw ConfigError("config document must be a JSON object");

  detail::require_keys(
      doc, "",
      {"field", "nodes", "placement", "cluster_radius_m", "rounds", "runs",
       "frames_per_round", "seed", "algorithms", "election", "packet",
       "energy_init", "radio_profiles", "heed_p_min", "coverage_grid_m"});

  ScenarioConfig config;

  if (doc.contains("field")) {
    if (!doc.at("field").is_object()) detail::fail("field", "expected an object");
    detail::parse_field(doc.at("field"), config.sim.field);
  }

  config.sim.node_count = detail::get_int(doc, "", "nodes", config.sim.node_count);
  if (config.sim.node_count < 1) detail::fail("nodes", "must be >= 1");

  const std::string placement =
      detail::get_string(doc, "", "placement", "uniform");
  if (placement == "uniform") {
    config.sim.placement = PlacementPolicy::Uniform;
  } else if (placement == "grid") {
    config.sim.placement = PlacementPolicy::Grid;
  } else {
    detail::fail("placement", "expected uniform or grid");
  }

  const double radius = detail::get_number(doc, "", "cluster_radius_m",
                                           config.sim.election.cluster_radius);
  if (radius <= 0.0) detail::fail("cluster_radius_m", "must be > 0");
  config.sim.election.cluster_radius = radius;
  config.sim.comm_radius = radius;

  config.sim.rounds = detail::get_int(doc, "", "rounds", config.sim.rounds);
  if (config.sim.rounds < 1) detail::fail("rounds", "must be >= 1");
  config.sim.runs = detail::get_int(doc, "", "runs", config.sim.runs);
  if (config.sim.runs < 1) detail::fail("runs", "must be >= 1");
  config.sim.frames_per_round =
      detail::get_int(doc, "", "frames_per_round", config.sim.frames_per_round);
  if (config.sim.frames_per_round < 1)
    detail::fail("frames_per_round", "must be >= 1");

  if (doc.contains("seed")) {
    const auto& v = doc.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
      detail::fail("seed", "expected a nonnegative integer");
    if (v.is_number_integer() && v.get<long long>() < 0)
      detail::fail("seed", "expected a nonnegative integer");
    config.seed = v.get<std::uint64_t>();
  }

  if (doc.contains("algorithms"))
    config.algorithms = detail::parse_algorithms(doc.at("algorithms"), "algorithms");

  if (doc.contains("election")) {
    if (!doc.at("election").is_object())
      detail::fail("election", "expected an object");
    detail::parse_election(doc.at("election"), config.sim.election);
  }
  if (doc.contains("packet")) {
    if (!doc.at("packet").is_object()) detail::fail("packet", "expected an object");
    detail::parse_packet(doc.at("packet"), config.sim.packets);
  }
  if (doc.contains("energy_init")) {
    if (!doc.at("energy_init").is_object())
      detail::fail("energy_init", "expected an object");
    detail::parse_energy(doc.at("energy_init"), config.sim.energy);
  }
  if (doc.contains("radio_profiles")) {
    const auto& arr = doc.at("radio_profiles");
    if (!arr.is_array() || arr.empty())
      detail::fail("radio_profiles", "expected a nonempty array");
    config.sim.profiles.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      config.sim.profiles.push_back(detail::parse_profile(
          arr.at(i), "radio_profiles[" + std::to_string(i) + "]"));
  }

  config.sim.heed_p_min =
      detail::get_number(doc, "", "heed_p_min", config.sim.heed_p_min);
  if (config.sim.heed_p_min <= 0.0 || config.sim.heed_p_min > 1.0)
    detail::fail("heed_p_min", "must be in (0, 1]");

  config.sim.coverage_resolution = detail::get_number(
      doc, "", "coverage_grid_m", config.sim.coverage_resolution);
  if (config.sim.coverage_resolution <= 0.0)
    detail::fail("coverage_grid_m", "must be > 0");

  if (!config.sim.valid())
    throw ConfigError("configuration failed final validation");
  return config;
}

/// Serialize the fully resolved scenario (defaults applied) for the manifest.
inline nlohmann::ordered_json to_json(const ScenarioConfig& config) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["field"] = {{"width_m", config.sim.field.width},
                {"height_m", config.sim.field.height},
                {"sink", {{"x", config.sim.field.sink.x},
                          {"y", config.sim.field.sink.y}}}};
  j["nodes"] = config.sim.node_count;
  j["placement"] =
      config.sim.placement == PlacementPolicy::Uniform ? "uniform" : "grid";
  j["cluster_radius_m"] = config.sim.election.cluster_radius;
  j["rounds"] = config.sim.rounds;
  j["runs"] = config.sim.runs;
  j["frames_per_round"] = config.sim.frames_per_round;
  j["seed"] = config.seed;

  Json algos = Json::array();
  for (Algorithm a : config.algorithms) algos.push_back(algorithm_name(a));
  j["algorithms"] = algos;

  j["election"] = {{"c_prob", config.sim.election.c_prob},
                   {"max_iterations", config.sim.election.max_iterations},
                   {"epsilon_energy_j", config.sim.election.epsilon_energy}};
  j["packet"] = {{"data_bytes", config.sim.packets.data_bytes},
                 {"broadcast_bytes", config.sim.packets.broadcast_bytes},
                 {"header_bytes", config.sim.packets.header_bytes},
                 {"compress_rate", config.sim.packets.compress_rate}};

  Json energy;
  switch (config.sim.energy.kind) {
    case EnergyInitSpec::Kind::Uniform:
      energy["kind"] = "uniform";
      energy["low_j"] = config.sim.energy.uniform_low;
      energy["high_j"] = config.sim.energy.uniform_high;
      break;
    case EnergyInitSpec::Kind::Constant:
      energy["kind"] = "constant";
      energy["value_j"] = config.sim.energy.constant_value;
      break;
    case EnergyInitSpec::Kind::TwoTier:
      energy["kind"] = "two_tier";
      energy["base_j"] = config.sim.energy.two_tier_base;
      energy["fraction"] = config.sim.energy.two_tier_fraction;
      energy["bonus"] = config.sim.energy.two_tier_bonus;
      break;
  }
  energy["infinite_fraction"] = config.sim.energy.infinite_fraction;
  j["energy_init"] = energy;

  Json profiles = Json::array();
  for (const auto& p : config.sim.profiles) {
    profiles.push_back({{"name", p.name},
                        {"elec_j_per_bit", p.elec_energy},
                        {"amp_near_j_per_bit_m2", p.amp_near},
                        {"amp_far_j_per_bit_m4", p.amp_far},
                        {"max_range_m", p.max_range}});
  }
  j["radio_profiles"] = profiles;

  j["heed_p_min"] = config.sim.heed_p_min;
  j["coverage_grid_m"] = config.sim.coverage_resolution;
  return j;
}

}  // namespace heteng
