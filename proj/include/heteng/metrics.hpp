#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "heteng/election.hpp"
#include "heteng/topology.hpp"

namespace heteng {

/// One CSV row; the five observables tracked every round. alive_count is a
/// whole number for a single run but fractional once averaged across runs.
struct RoundMetrics {
  int round = 0;
  double alive_count = 0.0;
  double total_residual_j = 0.0;
  double coverage_fraction = 0.0;
  double ch_fraction = 0.0;
  double election_iterations = 0.0;
};

inline int alive_count(std::span<const Node> nodes) {
  int count = 0;
  for (const auto& n : nodes)
    if (n.alive) ++count;
  return count;
}

/// Sum of residual energy over alive nodes. Non-depleting nodes are power
/// infrastructure, not batteries, so they are excluded from the total.
inline double total_residual(std::span<const Node> nodes) {
  double total = 0.0;
  for (const auto& n : nodes)
    if (n.alive && !n.non_depleting) total += n.residual_energy;
  return total;
}

/// Fraction of the field within sensing range of an alive node, estimated by
/// sampling the field on a unit grid at cell centers. `resolution` is the
/// cell edge length in meters.
inline double coverage_fraction(std::span<const Node> nodes,
                                const FieldSpec& field,
                                double resolution = 1.0) {
  if (!field.valid())
    throw std::invalid_argument("coverage_fraction: invalid field");
  if (resolution <= 0.0)
    throw std::invalid_argument("coverage_fraction: resolution must be > 0");

  const int nx = static_cast<int>(std::ceil(field.width / resolution));
  const int ny = static_cast<int>(std::ceil(field.height / resolution));
  if (nx == 0 || ny == 0) return 0.0;

  std::vector<const Node*> alive;
  alive.reserve(nodes.size());
  for (const auto& n : nodes)
    if (n.alive) alive.push_back(&n);
  if (alive.empty()) return 0.0;

  long covered = 0;
  for (int iy = 0; iy < ny; ++iy) {
    const double y = (iy + 0.5) * resolution;
    for (int ix = 0; ix < nx; ++ix) {
      const double x = (ix + 0.5) * resolution;
      for (const Node* n : alive) {
        const double dx = x - n->position.x;
        const double dy = y - n->position.y;
        if (dx * dx + dy * dy <= n->comm_radius * n->comm_radius) {
          ++covered;
          break;
        }
      }
    }
  }
  return static_cast<double>(covered) / (static_cast<double>(nx) * ny);
}

/// Fraction of alive nodes currently serving as cluster heads. A populated
/// network with no head at all indicates a broken election, hence the throw.
inline double ch_fraction(std::span<const Node> nodes,
                          std::span<const ChStatus> status) {
  if (status.size() != nodes.size())
    throw std::invalid_argument("ch_fraction: status size mismatch");
  int alive = 0;
  int heads = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].alive) continue;
    ++alive;
    if (status[i] == ChStatus::Final) ++heads;
  }
  if (alive == 0) return 0.0;
  if (heads == 0)
    throw std::logic_error("ch_fraction: alive network without cluster heads");
  return static_cast<double>(heads) / alive;
}

/// Element-wise mean of equally long metric series from repeated runs.
/// Round indices must line up across runs.
inline std::vector<RoundMetrics> average_series(
    std::span<const std::vector<RoundMetrics>> runs) {
  if (runs.empty())
    throw std::invalid_argument("average_series: no runs");
  const std::size_t rounds = runs.front().size();
  for (const auto& run : runs)
    if (run.size() != rounds)
      throw std::invalid_argument("average_series: run length mismatch");

  std::vector<RoundMetrics> avg(rounds);
  const double inv = 1.0 / static_cast<double>(runs.size());
  for (std::size_t r = 0; r < rounds; ++r) {
    avg[r].round = runs.front()[r].round;
    for (const auto& run : runs) {
      if (run[r].round != avg[r].round)
        throw std::invalid_argument("average_series: round index mismatch");
      avg[r].alive_count += run[r].alive_count;
      avg[r].total_residual_j += run[r].total_residual_j;
      avg[r].coverage_fraction += run[r].coverage_fraction;
      avg[r].ch_fraction += run[r].ch_fraction;
      avg[r].election_iterations += run[r].election_iterations;
    }
    avg[r].alive_count *= inv;
    avg[r].total_residual_j *= inv;
    avg[r].coverage_fraction *= inv;
    avg[r].ch_fraction *= inv;
    avg[r].election_iterations *= inv;
  }
  return avg;
}

}  // namespace heteng
