#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "heteng/election.hpp"
#include "heteng/energy.hpp"
#include "heteng/metrics.hpp"
#include "heteng/random.hpp"
#include "heteng/topology.hpp"

namespace heteng {

enum class Algorithm { HetEng, Leach, Heed };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::HetEng: return "heteng";
    case Algorithm::Leach: return "leach";
    case Algorithm::Heed: return "heed";
  }
  throw std::invalid_argument("algorithm_name: unknown algorithm");
}

inline Algorithm algorithm_from_name(const std::string& name) {
  if (name == "heteng") return Algorithm::HetEng;
  if (name == "leach") return Algorithm::Leach;
  if (name == "heed") return Algorithm::Heed;
  throw std::invalid_argument("unknown algorithm: " + name);
}

/// How initial battery levels are assigned. `infinite_fraction` marks a
/// share of nodes as externally powered: they never drain and stay out of
/// the residual-energy bookkeeping.
struct EnergyInitSpec {
  enum class Kind { Uniform, Constant, TwoTier };

  Kind kind = Kind::Uniform;
  double uniform_low = 0.5;    // joules
  double uniform_high = 2.0;   // joules
  double constant_value = 1.0;
  double two_tier_base = 1.0;
  double two_tier_fraction = 0.1;  // share of nodes in the upgraded tier
  double two_tier_bonus = 1.0;     // upgraded tier holds base * (1 + bonus)
  double infinite_fraction = 0.0;

  bool valid() const {
    if (infinite_fraction < 0.0 || infinite_fraction > 1.0) return false;
    switch (kind) {
      case Kind::Uniform:
        return uniform_low > 0.0 && uniform_high >= uniform_low;
      case Kind::Constant:
        return constant_value > 0.0;
      case Kind::TwoTier:
        return two_tier_base > 0.0 && two_tier_fraction >= 0.0 &&
               two_tier_fraction <= 1.0 && two_tier_bonus >= 0.0;
    }
    return false;
  }
};

namespace detail {

constexpr double kInfiniteEnergy = 1e12;

/// Seeded partial Fisher-Yates: the first `k` slots of the returned
/// permutation are the selected indices.
inline std::vector<int> pick_indices(int n, int k, Rng& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < k && i < n - 1; ++i) {
    const std::size_t j =
        i + uniform_index(rng, static_cast<std::uint64_t>(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(std::min(k, n));
  return perm;
}

}  // namespace detail

/// Assign initial energies (and the non-depleting flag) in node-id order so
/// the same seed always produces the same battery map.
inline void init_energies(std::vector<Node>& nodes, const EnergyInitSpec& spec,
                          std::uint64_t seed) {
  if (!spec.valid())
    throw std::invalid_argument("init_energies: invalid energy spec");
  const int n = static_cast<int>(nodes.size());
  Rng rng(seed);

  switch (spec.kind) {
    case EnergyInitSpec::Kind::Uniform:
      for (auto& node : nodes) {
        node.initial_energy =
            uniform_range(rng, spec.uniform_low, spec.uniform_high);
      }
      break;
    case EnergyInitSpec::Kind::Constant:
      for (auto& node : nodes) node.initial_energy = spec.constant_value;
      break;
    case EnergyInitSpec::Kind::TwoTier: {
      for (auto& node : nodes) node.initial_energy = spec.two_tier_base;
      const int upgraded = static_cast<int>(
          std::lround(spec.two_tier_fraction * static_cast<double>(n)));
      for (int idx : detail::pick_indices(n, upgraded, rng))
        nodes[idx].initial_energy = spec.two_tier_base * (1.0 + spec.two_tier_bonus);
      break;
    }
  }

  for (auto& node : nodes) {
    node.residual_energy = node.initial_energy;
    node.non_depleting = false;
    node.alive = true;
  }

  const int infinite = static_cast<int>(
      std::lround(spec.infinite_fraction * static_cast<double>(n)));
  if (infinite > 0) {
    for (int idx : detail::pick_indices(n, infinite, rng)) {
      nodes[idx].non_depleting = true;
      nodes[idx].initial_energy = detail::kInfiniteEnergy;
      nodes[idx].residual_energy = detail::kInfiniteEnergy;
    }
  }
}

/// Cluster membership for one round. Indices refer to the node span the
/// assignment was formed from. `head_of[i]` is i itself for a head, the
/// head's index for a member, and -1 for a node that must uplink directly.
struct ClusterAssignment {
  std::vector<int> head_of;
  std::vector<int> heads;
  std::vector<std::vector<int>> members;  // parallel to heads
  std::vector<int> direct;
};

/// Attach every alive non-head node to the nearest alive final head within
/// `cluster_radius` (ties break toward the lower node id). Nodes with no
/// reachable head fall back to direct uplink.
inline ClusterAssignment form_clusters(std::span<const Node> nodes,
                                       std::span<const ChStatus> status,
                                       double cluster_radius) {
  if (status.size() != nodes.size())
    throw std::invalid_argument("form_clusters: status size mismatch");

  const std::size_t n = nodes.size();
  ClusterAssignment assign;
  assign.head_of.assign(n, -1);

  std::vector<int> order = detail::id_order(nodes);
  std::vector<int> head_slot(n, -1);
  for (int i : order) {
    if (nodes[i].alive && status[i] == ChStatus::Final) {
      head_slot[i] = static_cast<int>(assign.heads.size());
      assign.heads.push_back(i);
      assign.head_of[i] = i;
    }
  }
  assign.members.resize(assign.heads.size());

  for (int i : order) {
    if (!nodes[i].alive || status[i] == ChStatus::Final) continue;
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int h : assign.heads) {
      const double d = distance(nodes[i].position, nodes[h].position);
      if (d > cluster_radius) continue;
      if (d < best_dist ||
          (d == best_dist && best >= 0 && nodes[h].id < nodes[best].id)) {
        best = h;
        best_dist = d;
      }
    }
    if (best >= 0) {
      assign.head_of[i] = best;
      assign.members[head_slot[best]].push_back(i);
    } else {
      assign.direct.push_back(i);
    }
  }
  return assign;
}

/// Everything a single simulated network needs: field, fleet size, radios,
/// packet sizes, election parameters, and schedule lengths.
struct SimulationConfig {
  FieldSpec field;
  int node_count = 300;
  PlacementPolicy placement = PlacementPolicy::Uniform;
  double comm_radius = 25.0;  // sensing + neighbor radius, meters
  EnergyInitSpec energy;
  ElectionParams election;  // cluster_radius lives here
  PacketSpec packets;
  std::vector<RadioProfile> profiles = default_radio_profiles();
  int frames_per_round = 5;
  int rounds = 1000;
  int runs = 10;
  double heed_p_min = 1e-4;
  double coverage_resolution = 1.0;  // meters per coverage grid cell

  bool valid() const {
    return field.valid() && node_count > 0 && comm_radius > 0.0 &&
           energy.valid() && election.valid() && packets.valid() &&
           !profiles.empty() && frames_per_round >= 1 && rounds >= 1 &&
           runs >= 1 && heed_p_min > 0.0 && heed_p_min <= 1.0 &&
           coverage_resolution > 0.0;
  }
};

/// Cumulative dissipation split by traffic category, for diagnosing where a
/// protocol spends its budget.
struct EnergyBreakdown {
  double broadcast_tx = 0.0;  ///< control broadcasts sent during elections
  double broadcast_rx = 0.0;  ///< control broadcasts heard during elections
  double member_tx = 0.0;     ///< member packets sent to cluster heads
  double head_rx = 0.0;       ///< member packets received at cluster heads
  double uplink_tx = 0.0;     ///< aggregated cluster payloads sent to the sink
  double direct_tx = 0.0;     ///< unclustered packets sent straight to the sink

  double total() const {
    return broadcast_tx + broadcast_rx + member_tx + head_rx + uplink_tx +
           direct_tx;
  }
};

/// One network, one algorithm, advanced round by round. Each round runs the
/// election, prices its control broadcasts, forms clusters, and plays the
/// TDMA data frames; all drains go through the shared ledger so dissipated
/// plus residual always re-adds to the initial budget.
class Simulation {
 public:
  Simulation(const SimulationConfig& config, Algorithm algorithm,
             std::uint64_t base_seed, int run_index)
      : config_(config), algorithm_(algorithm) {
    if (!config_.valid())
      throw std::invalid_argument("Simulation: invalid configuration");

    const std::uint64_t place_seed =
        derive_seed(base_seed, run_index, seed_stream::placement);
    const std::uint64_t energy_seed =
        derive_seed(base_seed, run_index, seed_stream::energy_init);
    election_seed_ =
        derive_seed(base_seed, run_index,
                    seed_stream::election ^ hash_label(algorithm_name(algorithm)));

    nodes_ = place_nodes(config_.field, config_.node_count, config_.placement,
                         place_seed, config_.comm_radius);
    init_energies(nodes_, config_.energy, energy_seed);

    initial_total_energy_ = total_residual(nodes_);
    last_ch_round_.assign(nodes_.size(), -1);
    coverage_cache_ =
        coverage_fraction(nodes_, config_.field, config_.coverage_resolution);
    cached_alive_ = alive_count(nodes_);
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const EnergyLedger& ledger() const { return ledger_; }
  double initial_total_energy() const { return initial_total_energy_; }
  int rounds_completed() const { return round_; }
  long range_escalations() const { return range_escalations_; }
  const EnergyBreakdown& breakdown() const { return breakdown_; }

  /// Advance one round and return its metrics row.
  RoundMetrics step() {
    const int round_index = round_;
    ++round_;

    RoundMetrics row;
    row.round = round_index + 1;

    std::vector<int> alive_idx = alive_indices();
    if (alive_idx.empty()) return row;  // padded zero row, network is done

    // Election runs on a snapshot of the alive nodes.
    std::vector<Node> snapshot;
    snapshot.reserve(alive_idx.size());
    for (int i : alive_idx) snapshot.push_back(nodes_[i]);

    const std::uint64_t round_seed =
        mix64(election_seed_ + static_cast<std::uint64_t>(round_index));
    const ElectionOutcome outcome = run_election(snapshot, round_index, round_seed);

    if (algorithm_ == Algorithm::Leach) {
      for (std::size_t k = 0; k < snapshot.size(); ++k)
        if (outcome.status[k] == ChStatus::Final)
          last_ch_round_[alive_idx[k]] = round_index;
    }

    price_broadcasts(outcome, alive_idx);
    run_data_frames(outcome, alive_idx);

    row.alive_count = alive_count(nodes_);
    row.total_residual_j = total_residual(nodes_);
    if (static_cast<int>(row.alive_count) != cached_alive_) {
      coverage_cache_ = coverage_fraction(nodes_, config_.field,
                                          config_.coverage_resolution);
      cached_alive_ = static_cast<int>(row.alive_count);
    }
    row.coverage_fraction = coverage_cache_;

    int heads_alive = 0;
    for (std::size_t k = 0; k < snapshot.size(); ++k)
      if (outcome.status[k] == ChStatus::Final && nodes_[alive_idx[k]].alive)
        ++heads_alive;
    row.ch_fraction = row.alive_count > 0
                          ? heads_alive / static_cast<double>(row.alive_count)
                          : 0.0;
    row.election_iterations = outcome.iterations_used;

    assert(energy_conserved());
    return row;
  }

  /// Run the configured number of rounds; rows for rounds after the last
  /// node dies are zero-filled so every run has the same length.
  std::vector<RoundMetrics> run() {
    std::vector<RoundMetrics> rows;
    rows.reserve(config_.rounds);
    for (int r = 0; r < config_.rounds; ++r) rows.push_back(step());
    return rows;
  }

  /// Dissipated + residual must re-add to the initial budget (relative 1e-9).
  bool energy_conserved() const {
    const double lhs = total_residual(nodes_) + ledger_.total_dissipated;
    const double scale = std::max(1.0, std::abs(initial_total_energy_));
    return std::abs(lhs - initial_total_energy_) <= 1e-9 * scale;
  }

 private:
  std::vector<int> alive_indices() const {
    std::vector<int> idx;
    idx.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].alive) idx.push_back(static_cast<int>(i));
    return idx;
  }

  ElectionOutcome run_election(std::span<const Node> snapshot, int round_index,
                               std::uint64_t seed) {
    const double d_avg =
        average_density(config_.comm_radius,
                        static_cast<int>(snapshot.size()), config_.field.area());
    switch (algorithm_) {
      case Algorithm::HetEng:
        return run_heteng_election(snapshot, config_.election, d_avg, seed);
      case Algorithm::Leach: {
        std::vector<char> eligible(snapshot.size(), 1);
        const int epoch = detail::leach_epoch_length(config_.election.c_prob);
        for (std::size_t k = 0; k < snapshot.size(); ++k) {
          const int last = last_ch_round_[find_master(snapshot[k].id)];
          if (last >= 0 && last / epoch == round_index / epoch) eligible[k] = 0;
        }
        return run_leach_election(snapshot, round_index, config_.election.c_prob,
                                  eligible, seed);
      }
      case Algorithm::Heed: {
        double e_max = 0.0;
        for (const auto& n : snapshot)
          if (!n.non_depleting) e_max = std::max(e_max, n.initial_energy);
        if (e_max <= 0.0)
          for (const auto& n : snapshot) e_max = std::max(e_max, n.residual_energy);
        return run_heed_election(snapshot, e_max, config_.election,
                                 config_.heed_p_min, seed);
      }
    }
    throw std::logic_error("run_election: unknown algorithm");
  }

  int find_master(int node_id) const {
    // Node ids are assigned densely at placement, so id doubles as index.
    assert(node_id >= 0 && node_id < static_cast<int>(nodes_.size()) &&
           nodes_[node_id].id == node_id);
    return node_id;
  }

  /// Charge the control traffic an election recorded: every competitor in a
  /// broadcast iteration pays one broadcast at cluster radius and one
  /// reception per in-range competitor that transmitted. Nodes that die
  /// mid-election stop transmitting and hearing.
  void price_broadcasts(const ElectionOutcome& outcome,
                        const std::vector<int>& alive_idx) {
    const double radius = config_.election.cluster_radius;
    const double bits = config_.packets.broadcast_bits();
    const int profile = select_profile(config_.profiles, radius);
    const RadioProfile& radio =
        profile >= 0 ? config_.profiles[profile]
                     : config_.profiles[longest_range_profile(config_.profiles)];
    const double tx = profile >= 0
                          ? tx_cost(radio, bits, radius)
                          : detail::tx_cost_unchecked(radio, bits, radius);
    const double rx = rx_cost(radio, bits);

    for (const auto& iteration : outcome.broadcast_rounds) {
      for (int k : iteration) {
        Node& sender = nodes_[alive_idx[k]];
        if (!sender.alive) continue;
        if (profile < 0) ++range_escalations_;
        breakdown_.broadcast_tx += drain(sender, tx, ledger_);
        for (int m : iteration) {
          Node& hearer = nodes_[alive_idx[m]];
          if (!hearer.alive || hearer.id == sender.id) continue;
          if (distance(hearer.position, sender.position) <= radius)
            breakdown_.broadcast_rx += drain(hearer, rx, ledger_);
        }
      }
    }
  }

  struct Uplink {
    double cost = 0.0;
    bool escalated = false;
  };

  Uplink uplink_cost(double bits, double dist) const {
    Uplink u;
    const int profile = select_profile(config_.profiles, dist);
    if (profile >= 0) {
      u.cost = tx_cost(config_.profiles[profile], bits, dist);
    } else {
      const auto& radio = config_.profiles[longest_range_profile(config_.profiles)];
      u.cost = detail::tx_cost_unchecked(radio, bits, dist);
      u.escalated = true;
    }
    return u;
  }

  /// TDMA data phase: per frame, each cluster collects member packets at the
  /// head, aggregates them with the head's own sample, and uplinks the
  /// compressed payload to the sink; unattached nodes uplink raw packets.
  void run_data_frames(const ElectionOutcome& outcome,
                       const std::vector<int>& alive_idx) {
    std::vector<ChStatus> status(nodes_.size(), ChStatus::Regular);
    for (std::size_t k = 0; k < alive_idx.size(); ++k)
      status[alive_idx[k]] = outcome.status[k];

    const ClusterAssignment assign =
        form_clusters(nodes_, status, config_.election.cluster_radius);

    const double member_bits =
        config_.packets.data_bits() + config_.packets.header_bits();
    const double data_bits = config_.packets.data_bits();

    for (int frame = 0; frame < config_.frames_per_round; ++frame) {
      for (std::size_t h = 0; h < assign.heads.size(); ++h) {
        Node& head = nodes_[assign.heads[h]];
        int delivered = 0;
        for (int m : assign.members[h]) {
          Node& member = nodes_[m];
          if (!member.alive) continue;
          const double dist = distance(member.position, head.position);
          const Uplink link = uplink_cost(member_bits, dist);
          if (link.escalated) ++range_escalations_;
          breakdown_.member_tx += drain(member, link.cost, ledger_);
          ++delivered;
          if (head.alive) {
            const int profile = select_profile(config_.profiles, dist);
            const auto& radio =
                profile >= 0
                    ? config_.profiles[profile]
                    : config_.profiles[longest_range_profile(config_.profiles)];
            breakdown_.head_rx += drain(head, rx_cost(radio, member_bits), ledger_);
          }
        }
        if (!head.alive) continue;  // collected packets die with the head
        const double raw = (delivered + 1) * data_bits;  // +1: head's own sample
        const double payload = aggregate_payload(config_.packets, raw);
        const double dist = distance(head.position, config_.field.sink);
        const Uplink link = uplink_cost(payload, dist);
        if (link.escalated) ++range_escalations_;
        breakdown_.uplink_tx += drain(head, link.cost, ledger_);
      }
      for (int i : assign.direct) {
        Node& node = nodes_[i];
        if (!node.alive) continue;
        const double dist = distance(node.position, config_.field.sink);
        const Uplink link = uplink_cost(member_bits, dist);
        if (link.escalated) ++range_escalations_;
        breakdown_.direct_tx += drain(node, link.cost, ledger_);
      }
    }
  }

  SimulationConfig config_;
  Algorithm algorithm_;
  std::vector<Node> nodes_;
  EnergyLedger ledger_;
  EnergyBreakdown breakdown_;
  std::uint64_t election_seed_ = 0;
  double initial_total_energy_ = 0.0;
  int round_ = 0;
  std::vector<int> last_ch_round_;
  double coverage_cache_ = 0.0;
  int cached_alive_ = 0;
  long range_escalations_ = 0;
};

/// One complete run: metrics series plus the audit trail.
struct RunResult {
  std::vector<RoundMetrics> rows;
  double initial_total_energy = 0.0;
  double dissipated_energy = 0.0;
  long range_escalations = 0;
};

inline RunResult run_simulation(const SimulationConfig& config,
                                Algorithm algorithm, std::uint64_t base_seed,
                                int run_index) {
  Simulation sim(config, algorithm, base_seed, run_index);
  RunResult result;
  result.rows = sim.run();
  result.initial_total_energy = sim.initial_total_energy();
  result.dissipated_energy = sim.ledger().total_dissipated;
  result.range_escalations = sim.range_escalations();
  return result;
}

}  // namespace heteng
