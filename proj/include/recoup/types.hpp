#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace recoup {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;
using GroupId = std::uint32_t;
using Rank = std::uint32_t;

// Simulation time in integer microseconds; all timing arithmetic is exact.
using SimTime = std::int64_t;

inline constexpr NodeId kRootId = 0;
inline constexpr NodeId kNoNode = 0xffffffff;
inline constexpr ClusterId kNoCluster = 0xffffffff;

struct Position {
  double x = 0.0;
  double y = 0.0;
};

struct RadioConfig {
  double tx_range_m = 25.0;
  SimTime tx_time_us = 8000;     // per-hop link transmission time
  std::int64_t tx_energy_uj = 400;  // per transmitted packet
  std::int64_t rx_energy_uj = 450;  // per received packet
  double link_delivery_prob = 1.0;  // binary disc by default
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct FormationError : std::runtime_error {
  explicit FormationError(const std::string& what) : std::runtime_error(what) {}
};

// Per-node transmit/receive counters. Energy is always count * constant.
struct EnergyLedger {
  std::vector<std::int64_t> tx_count;
  std::vector<std::int64_t> rx_count;
  std::int64_t tx_energy_uj = 0;
  std::int64_t rx_energy_uj = 0;

  explicit EnergyLedger(std::size_t n = 0) : tx_count(n, 0), rx_count(n, 0) {}

  std::int64_t total_tx() const {
    std::int64_t s = 0;
    for (auto c : tx_count) s += c;
    return s;
  }
  std::int64_t total_rx() const {
    std::int64_t s = 0;
    for (auto c : rx_count) s += c;
    return s;
  }
  std::int64_t total_energy_uj() const { return tx_energy_uj + rx_energy_uj; }
};

// One transmission by `sender` heard by `receiver_count` radios.
// A broadcast is a single transmission with receiver_count = |neighbors in range|.
void record_transmission(EnergyLedger& ledger, const RadioConfig& radio,
                         std::size_t sender_index,
                         const std::vector<std::size_t>& receiver_indices);

}  // namespace recoup
