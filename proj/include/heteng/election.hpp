#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "heteng/random.hpp"
#include "heteng/topology.hpp"

namespace heteng {

struct ElectionParams {
  double c_prob = 0.05;          // base election probability
  int max_iterations = 20;
  double epsilon_energy = 1e-9;  // joules; below this a statistic is degenerate
  double cluster_radius = 25.0;  // meters

  bool valid() const {
    return c_prob > 0.0 && c_prob <= 1.0 && max_iterations >= 1 &&
           epsilon_energy > 0.0 && cluster_radius >= 0.0;
  }
};

enum class ChStatus { Final, Tentative, Regular };

struct ConditionVector {
  bool c1 = false;  // random draw <= c_prob
  bool c2 = false;  // energy ratio x deviation factor >= 1
  bool c3 = false;  // degree >= average density
};

/// Result of one election. `status` and `probability_trace` are parallel to
/// the alive-node span the election ran on; `broadcast_rounds` lists, per
/// iteration, the indices of the nodes that transmitted a control broadcast
/// (the engine prices those).
struct ElectionOutcome {
  std::vector<ChStatus> status;
  int iterations_used = 0;
  std::vector<std::vector<int>> broadcast_rounds;
  std::vector<std::vector<double>> probability_trace;

  int final_count() const {
    return static_cast<int>(
        std::count(status.begin(), status.end(), ChStatus::Final));
  }
};

namespace detail {

/// The two energy factors of the election score: own/mean and own/stddev.
/// A degenerate statistic (no neighbors, or a value below epsilon) turns its
/// factor into the neutral 1 so the score degrades to c_prob alone.
struct EnergyFactors {
  double ratio = 1.0;
  double deviation = 1.0;
};

inline EnergyFactors energy_factors(double own_energy,
                                    const NeighborhoodStats& stats,
                                    const ElectionParams& params) {
  EnergyFactors f;
  if (stats.degree > 0 && stats.mean_energy >= params.epsilon_energy)
    f.ratio = own_energy / stats.mean_energy;
  if (stats.sample_stddev >= params.epsilon_energy)
    f.deviation = own_energy / stats.sample_stddev;
  return f;
}

}  // namespace detail

/// Election score c_prob * (E/M) * (E/s). Uncapped; callers cap at 1 when
/// using it as a sampling probability.
inline double heteng_probability(double own_energy, const NeighborhoodStats& stats,
                                 const ElectionParams& params) {
  if (own_energy <= 0.0)
    throw std::invalid_argument("heteng_probability: own_energy must be > 0");
  const auto f = detail::energy_factors(own_energy, stats, params);
  return params.c_prob * f.ratio * f.deviation;
}

/// Election score weighted by the density factor min(degree / d_avg, 1).
inline double heteng_weighted_probability(double own_energy,
                                          const NeighborhoodStats& stats,
                                          double d_avg,
                                          const ElectionParams& params) {
  if (d_avg <= 0.0)
    throw std::invalid_argument("heteng_weighted_probability: d_avg must be > 0");
  const double base = heteng_probability(own_energy, stats, params);
  return base * std::min(static_cast<double>(stats.degree) / d_avg, 1.0);
}

/// The three election conditions for one node and one uniform draw.
/// c2 compares the uncapped factor product against 1; c3 compares the node
/// degree against the expected density.
inline ConditionVector evaluate_conditions(double own_energy,
                                           const NeighborhoodStats& stats,
                                           double d_avg,
                                           const ElectionParams& params,
                                           double random_draw) {
  assert(random_draw >= 0.0 && random_draw < 1.0);
  const auto f = detail::energy_factors(own_energy, stats, params);
  ConditionVector cv;
  cv.c1 = random_draw <= params.c_prob;
  cv.c2 = f.ratio * f.deviation >= 1.0;
  cv.c3 = static_cast<double>(stats.degree) >= d_avg;
  return cv;
}

/// Truth table: a node with no neighbors heads itself without competing;
/// two or more satisfied conditions elect; a lone satisfied draw makes the
/// node tentative; everything else stays regular.
inline ChStatus resolve_status(const ConditionVector& cv, int degree) {
  if (degree == 0) return ChStatus::Final;
  const int satisfied = int(cv.c1) + int(cv.c2) + int(cv.c3);
  if (satisfied >= 2) return ChStatus::Final;
  if (cv.c1 && satisfied == 1) return ChStatus::Tentative;
  return ChStatus::Regular;
}

namespace detail {

/// Indices of `nodes` sorted by node id; every per-node draw happens in this
/// order so runs are reproducible.
inline std::vector<int> id_order(std::span<const Node> nodes) {
  std::vector<int> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return nodes[a].id < nodes[b].id; });
  return order;
}

inline bool covered_by_final(std::span<const Node> nodes, int idx,
                             const std::vector<int>& finals, double radius) {
  for (int f : finals) {
    if (f == idx) continue;
    if (distance(nodes[idx].position, nodes[f].position) <= radius) return true;
  }
  return false;
}

}  // namespace detail

/// Iterative cluster-head election. Every competing node draws once per
/// iteration and resolves through the truth table; competitors escalate
/// their effective c_prob by doubling each iteration, and a node whose
/// effective probability reaches 1.0 is declared a final head. Competitors
/// within cluster_radius of a final head leave the competition as members.
inline ElectionOutcome run_heteng_election(std::span<const Node> alive_nodes,
                                           const ElectionParams& params,
                                           double d_avg, std::uint64_t seed) {
  if (alive_nodes.empty())
    throw std::invalid_argument("run_heteng_election: need at least one node");
  if (!params.valid())
    throw std::invalid_argument("run_heteng_election: invalid parameters");

  const std::size_t n = alive_nodes.size();
  ElectionOutcome out;
  out.status.assign(n, ChStatus::Regular);
  out.probability_trace.assign(n, {});

  // Neighborhood statistics are frozen at election start; only the random
  // draws change across iterations.
  std::vector<NeighborhoodStats> stats(n);
  for (std::size_t i = 0; i < n; ++i)
    stats[i] = neighbors_of(alive_nodes[i], alive_nodes).stats;

  std::vector<int> pool = detail::id_order(alive_nodes);
  std::vector<double> multiplier(n, 1.0);
  std::vector<int> finals;
  Rng rng(seed);

  while (!pool.empty() && out.iterations_used < params.max_iterations) {
    ++out.iterations_used;
    out.broadcast_rounds.push_back(pool);

    std::vector<int> still_competing;
    for (int i : pool) {
      const double eff_c = std::min(1.0, params.c_prob * multiplier[i]);
      ElectionParams eff = params;
      eff.c_prob = eff_c;

      const double draw = uniform_double(rng);
      const double score = heteng_weighted_probability(
          alive_nodes[i].residual_energy, stats[i], d_avg, eff);
      out.probability_trace[i].push_back(std::min(score, 1.0));

      const ConditionVector cv = evaluate_conditions(
          alive_nodes[i].residual_energy, stats[i], d_avg, eff, draw);
      ChStatus st = resolve_status(cv, stats[i].degree);
      // An escalated probability that has reached the cap means the node's
      // grade hit 1.0: it heads itself rather than staying tentative.
      if (st != ChStatus::Final && eff_c >= 1.0) st = ChStatus::Final;

      if (st == ChStatus::Final) {
        out.status[i] = ChStatus::Final;
        finals.push_back(i);
      } else {
        still_competing.push_back(i);
      }
    }

    pool.clear();
    for (int i : still_competing) {
      if (detail::covered_by_final(alive_nodes, i, finals, params.cluster_radius)) {
        out.status[i] = ChStatus::Regular;
      } else {
        multiplier[i] *= 2.0;
        pool.push_back(i);
      }
    }
  }
  // Whatever is left at the iteration cap stays regular.
  return out;
}

namespace detail {
inline int leach_epoch_length(double p) {
  // 1/p is integral for the usual p values; keep FP noise from bumping ceil.
  const double inv = 1.0 / p;
  const double nearest = std::round(inv);
  if (std::abs(inv - nearest) <= 1e-9 * nearest) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(inv));
}
}  // namespace detail

/// Per-node threshold for the rotating-epoch election: p / (1 - p*(r mod
/// ceil(1/p))) for nodes that have not served as head in the current epoch,
/// zero for the rest.
inline double leach_threshold(int round_index, double p, bool eligible) {
  if (p <= 0.0 || p >= 1.0)
    throw std::invalid_argument("leach_threshold: p must be in (0, 1)");
  if (!eligible) return 0.0;
  const int epoch = detail::leach_epoch_length(p);
  const double denom = 1.0 - p * (round_index % epoch);
  if (denom <= 0.0) return 1.0;
  return std::min(p / denom, 1.0);
}

/// Single-draw election: an eligible node self-elects when its uniform draw
/// falls under the rotating threshold. The elected heads advertise; that is
/// the round's single broadcast iteration.
inline ElectionOutcome run_leach_election(std::span<const Node> alive_nodes,
                                          int round_index, double p,
                                          std::span<const char> eligible,
                                          std::uint64_t seed) {
  if (alive_nodes.empty())
    throw std::invalid_argument("run_leach_election: need at least one node");
  if (eligible.size() != alive_nodes.size())
    throw std::invalid_argument("run_leach_election: eligibility size mismatch");

  const std::size_t n = alive_nodes.size();
  ElectionOutcome out;
  out.status.assign(n, ChStatus::Regular);
  out.probability_trace.assign(n, {});
  out.iterations_used = 1;
  // Every participant sends one control packet (advertisement or join).
  out.broadcast_rounds.push_back(detail::id_order(alive_nodes));

  Rng rng(seed);
  for (int i : out.broadcast_rounds.front()) {
    const double threshold = leach_threshold(round_index, p, eligible[i] != 0);
    out.probability_trace[i].push_back(threshold);
    const double draw = uniform_double(rng);
    if (draw < threshold) out.status[i] = ChStatus::Final;
  }
  return out;
}

/// Iterative residual-energy election: each node starts at
/// clamp(c_prob * residual / e_max, p_min, 1), announces candidacy with that
/// probability, and doubles it every iteration; reaching 1 makes the node a
/// final head, and nodes covered by a final head join it instead. Isolated
/// nodes head themselves immediately.
inline ElectionOutcome run_heed_election(std::span<const Node> alive_nodes,
                                         double e_max,
                                         const ElectionParams& params,
                                         double p_min, std::uint64_t seed) {
  if (alive_nodes.empty())
    throw std::invalid_argument("run_heed_election: need at least one node");
  if (e_max <= 0.0)
    throw std::invalid_argument("run_heed_election: e_max must be > 0");
  if (p_min <= 0.0 || p_min > 1.0)
    throw std::invalid_argument("run_heed_election: p_min must be in (0, 1]");

  const std::size_t n = alive_nodes.size();
  ElectionOutcome out;
  out.status.assign(n, ChStatus::Regular);
  out.probability_trace.assign(n, {});

  std::vector<double> prob(n);
  std::vector<int> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    prob[i] = std::clamp(params.c_prob * alive_nodes[i].residual_energy / e_max,
                         p_min, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (distance(alive_nodes[i].position, alive_nodes[j].position) <=
          params.cluster_radius)
        ++degree[i];
    }
  }

  std::vector<int> pool = detail::id_order(alive_nodes);
  std::vector<int> finals;
  Rng rng(seed);

  while (!pool.empty() && out.iterations_used < params.max_iterations) {
    ++out.iterations_used;
    out.broadcast_rounds.push_back(pool);

    std::vector<int> still_competing;
    for (int i : pool) {
      out.probability_trace[i].push_back(prob[i]);
      const double draw = uniform_double(rng);
      if (degree[i] == 0 || prob[i] >= 1.0) {
        out.status[i] = ChStatus::Final;
        finals.push_back(i);
      } else {
        // A sub-threshold draw announces tentative candidacy; the status is
        // provisional until the probability caps or a final head covers it.
        if (draw < prob[i]) out.status[i] = ChStatus::Tentative;
        still_competing.push_back(i);
      }
    }

    pool.clear();
    for (int i : still_competing) {
      if (detail::covered_by_final(alive_nodes, i, finals, params.cluster_radius)) {
        out.status[i] = ChStatus::Regular;
      } else {
        prob[i] = std::min(prob[i] * 2.0, 1.0);
        pool.push_back(i);
      }
    }
  }
  for (auto& st : out.status)
    if (st == ChStatus::Tentative) st = ChStatus::Regular;
  return out;
}

}  // namespace heteng
