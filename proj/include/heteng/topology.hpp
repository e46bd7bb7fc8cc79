#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "heteng/random.hpp"

namespace heteng {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Rectangular deployment field with the data sink placed anywhere in the
/// plane (typically beyond the field edge).
struct FieldSpec {
  double width = 100.0;
  double height = 100.0;
  Point sink{50.0, 175.0};

  double area() const { return width * height; }

  bool valid() const {
    return width > 0.0 && height > 0.0 && std::isfinite(width) &&
           std::isfinite(height) && std::isfinite(sink.x) &&
           std::isfinite(sink.y);
  }
};

/// One battery-powered device. `non_depleting` marks mains-powered or
/// effectively unbounded batteries: such nodes never drain and are excluded
/// from residual-energy totals.
struct Node {
  int id = 0;
  Point position{};
  double initial_energy = 1.0;   // joules
  double residual_energy = 1.0;  // joules
  double comm_radius = 25.0;     // meters
  bool alive = true;
  bool non_depleting = false;
};

/// Residual-energy statistics of the alive nodes within one node's
/// communication radius, excluding the node itself.
struct NeighborhoodStats {
  int neighbor_count = 0;
  double mean_energy = 0.0;    // joules; 0 when there are no neighbors
  double sample_stddev = 0.0;  // joules; 0 when neighbor_count < 2
  int degree = 0;              // == neighbor_count
};

struct Neighborhood {
  NeighborhoodStats stats;
  std::vector<int> neighbor_ids;
};

enum class PlacementPolicy { Uniform, Grid };

/// Scatters `count` nodes over the field. Uniform placement draws x then y
/// per node from a generator seeded with `seed`; grid placement is
/// deterministic and ignores the seed (it exists for tests that need known
/// geometry).
inline std::vector<Node> place_nodes(const FieldSpec& field, int count,
                                     PlacementPolicy placement,
                                     std::uint64_t seed,
                                     double comm_radius = 25.0) {
  if (!field.valid())
    throw std::invalid_argument("place_nodes: field dimensions must be positive");
  if (count < 1) throw std::invalid_argument("place_nodes: count must be >= 1");
  if (comm_radius < 0.0)
    throw std::invalid_argument("place_nodes: comm_radius must be >= 0");

  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(count));
  if (placement == PlacementPolicy::Uniform) {
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
      Node n;
      n.id = i;
      n.position.x = uniform_range(rng, 0.0, field.width);
      n.position.y = uniform_range(rng, 0.0, field.height);
      n.comm_radius = comm_radius;
      nodes.push_back(n);
    }
  } else {
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
    const int rows = (count + cols - 1) / cols;
    const double dx = field.width / cols;
    const double dy = field.height / rows;
    for (int i = 0; i < count; ++i) {
      Node n;
      n.id = i;
      n.position.x = (i % cols + 0.5) * dx;
      n.position.y = (i / cols + 0.5) * dy;
      n.comm_radius = comm_radius;
      nodes.push_back(n);
    }
  }
  return nodes;
}

/// Alive nodes (other than `node` itself) within `node.comm_radius`,
/// distance ties included. The sample standard deviation uses the n-1
/// denominator and is defined as 0 for fewer than two neighbors.
inline Neighborhood neighbors_of(const Node& node, std::span<const Node> all_nodes) {
  Neighborhood out;
  double sum = 0.0;
  for (const Node& other : all_nodes) {
    if (other.id == node.id || !other.alive) continue;
    if (distance(node.position, other.position) <= node.comm_radius) {
      out.neighbor_ids.push_back(other.id);
      sum += other.residual_energy;
    }
  }
  const int n = static_cast<int>(out.neighbor_ids.size());
  out.stats.neighbor_count = n;
  out.stats.degree = n;
  if (n > 0) out.stats.mean_energy = sum / n;
  if (n >= 2) {
    double ss = 0.0;
    for (const Node& other : all_nodes) {
      if (other.id == node.id || !other.alive) continue;
      if (distance(node.position, other.position) <= node.comm_radius) {
        const double d = other.residual_energy - out.stats.mean_energy;
        ss += d * d;
      }
    }
    out.stats.sample_stddev = std::sqrt(ss / (n - 1));
  }
  return out;
}

/// Expected neighbor count under uniform density: pi * R^2 * count / area.
inline double average_density(double comm_radius, int device_count, double area) {
  if (comm_radius < 0.0)
    throw std::invalid_argument("average_density: comm_radius must be >= 0");
  if (device_count < 0)
    throw std::invalid_argument("average_density: device_count must be >= 0");
  if (area <= 0.0) throw std::invalid_argument("average_density: area must be > 0");
  return std::numbers::pi * comm_radius * comm_radius * device_count / area;
}

}  // namespace heteng
