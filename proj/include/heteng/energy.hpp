#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "heteng/topology.hpp"

namespace heteng {

/// First-order radio model parameters for one communication interface.
/// Transmitting b bits over d meters costs
///   elec_energy*b + amp_near*b*d^2   for d below the crossover distance,
///   elec_energy*b + amp_far*b*d^4    beyond it,
/// and receiving costs elec_energy*b. The crossover is sqrt(amp_near/amp_far).
struct RadioProfile {
  std::string name = "default";
  double elec_energy = 50e-9;     // J/bit
  double amp_near = 10e-12;       // J/bit/m^2
  double amp_far = 0.0013e-12;    // J/bit/m^4
  double max_range = 250.0;       // meters

  double crossover_distance() const {
    if (amp_near > 0.0 && amp_far > 0.0) return std::sqrt(amp_near / amp_far);
    return max_range;
  }

  bool valid() const {
    return elec_energy >= 0.0 && amp_near >= 0.0 && amp_far >= 0.0 &&
           max_range > 0.0;
  }
};

/// The five stand-in interface profiles shipped by default. The coefficient
/// values are synthetic: they follow the familiar 50nJ/10pJ/0.0013pJ radio
/// constants, scaled so that short links favor the low-power profiles and
/// only the two long-range profiles reach a sink beyond the field edge.
inline std::vector<RadioProfile> default_radio_profiles() {
  return {
      {"nai1", 7.5e-9, 1.5e-12, 0.195e-15, 100.0},
      {"nai2", 3.75e-9, 1.2e-12, 0.30e-15, 30.0},
      {"nai3", 5.25e-9, 1.35e-12, 0.24e-15, 60.0},
      {"nai4", 12e-9, 1.8e-12, 0.225e-15, 300.0},
      {"nai5", 10.5e-9, 1.65e-12, 0.21e-15, 200.0},
  };
}

/// Packet sizing: fixed data payload, short control broadcast, per-packet
/// header, and the aggregation compression factor applied by cluster heads.
struct PacketSpec {
  int data_bytes = 100;
  int broadcast_bytes = 25;
  int header_bytes = 25;
  double compress_rate = 0.8;

  long long data_bits() const { return 8LL * data_bytes; }
  long long broadcast_bits() const { return 8LL * broadcast_bytes; }
  long long header_bits() const { return 8LL * header_bytes; }

  bool valid() const {
    return data_bytes > 0 && broadcast_bytes >= 0 && header_bytes >= 0 &&
           compress_rate > 0.0 && compress_rate <= 1.0;
  }
};

namespace detail {
/// Cost formula without the range check; the engine uses this when it has
/// already decided to force a link through the longest-range profile.
inline double tx_cost_unchecked(const RadioProfile& profile, long long bits,
                                double dist) {
  const double b = static_cast<double>(bits);
  if (dist < profile.crossover_distance())
    return profile.elec_energy * b + profile.amp_near * b * dist * dist;
  const double d2 = dist * dist;
  return profile.elec_energy * b + profile.amp_far * b * d2 * d2;
}
}  // namespace detail

/// Energy to transmit `bits` over `dist` meters. Links longer than the
/// profile's rated range are rejected; callers pick another profile or
/// declare the link infeasible.
inline double tx_cost(const RadioProfile& profile, long long bits, double dist) {
  if (bits < 0) throw std::invalid_argument("tx_cost: bits must be >= 0");
  if (dist < 0.0) throw std::invalid_argument("tx_cost: distance must be >= 0");
  if (dist > profile.max_range)
    throw std::invalid_argument("tx_cost: distance exceeds max_range of profile " +
                                profile.name);
  return detail::tx_cost_unchecked(profile, bits, dist);
}

/// Energy to receive `bits` (electronics cost only).
inline double rx_cost(const RadioProfile& profile, long long bits) {
  if (bits < 0) throw std::invalid_argument("rx_cost: bits must be >= 0");
  return profile.elec_energy * static_cast<double>(bits);
}

/// Bits a cluster head forwards after compressing the collected member
/// payloads (the head's own sensing payload included) under one header.
inline long long aggregate_payload(const PacketSpec& spec,
                                   long long member_payload_bits) {
  if (member_payload_bits < 0)
    throw std::invalid_argument("aggregate_payload: bits must be >= 0");
  const double y = spec.compress_rate * static_cast<double>(member_payload_bits);
  const double nearest = std::round(y);
  // Snap values that are integral up to FP noise so 0.8*8000 stays 6400.
  const double compressed =
      (std::abs(y - nearest) <= 1e-9 * std::max(1.0, std::abs(y))) ? nearest
                                                                   : std::ceil(y);
  return static_cast<long long>(compressed) + spec.header_bits();
}

/// Per-run account of every joule dissipated, for conservation checks.
struct EnergyLedger {
  double total_dissipated = 0.0;

  void credit(double joules) { total_dissipated += joules; }
};

/// Removes `amount` joules from the node, clamped at zero, crediting the
/// ledger with what was actually dissipated. Non-depleting nodes are left
/// untouched. A node whose residual reaches zero is dead.
// Returns the energy actually removed (requests are clamped at the node's
// remaining charge, and non-depleting nodes never pay).
inline double drain(Node& node, double amount, EnergyLedger& ledger) {
  if (amount < 0.0) throw std::invalid_argument("drain: amount must be >= 0");
  if (node.non_depleting) return 0.0;
  const double credited = std::min(amount, node.residual_energy);
  node.residual_energy -= credited;
  ledger.credit(credited);
  node.alive = node.residual_energy > 0.0;
  return credited;
}

/// Index of the cheapest profile whose rated range covers `dist`, comparing
/// per-bit transmit cost at that distance (ties go to the earliest profile).
/// Returns -1 when no profile covers the link.
inline int select_profile(std::span<const RadioProfile> profiles, double dist) {
  int best = -1;
  double best_cost = 0.0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (dist > profiles[i].max_range) continue;
    const double c = detail::tx_cost_unchecked(profiles[i], 1000, dist);
    if (best < 0 || c < best_cost) {
      best = static_cast<int>(i);
      best_cost = c;
    }
  }
  return best;
}

/// Index of the profile with the longest rated range (escalation fallback).
inline int longest_range_profile(std::span<const RadioProfile> profiles) {
  if (profiles.empty())
    throw std::invalid_argument("longest_range_profile: no profiles configured");
  int best = 0;
  for (std::size_t i = 1; i < profiles.size(); ++i)
    if (profiles[i].max_range > profiles[best].max_range)
      best = static_cast<int>(i);
  return best;
}

}  // namespace heteng
