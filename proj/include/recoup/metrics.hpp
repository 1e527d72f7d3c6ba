#pragma once

#include <cstdint>
#include <vector>

#include "recoup/routing.hpp"
#include "recoup/types.hpp"

namespace recoup {

struct DeliveryRecord {
  NodeId node = kNoNode;
  PacketKey key;
  SimTime latency_us = 0;
  SimTime time_us = 0;
};

struct PdrResult {
  bool defined = false;
  double value = 0.0;
  std::int64_t delivered = 0;
  std::int64_t expected = 0;
};

struct EedResult {
  bool defined = false;
  double mean_ms = 0.0;
};

struct EnergyResult {
  double total_mj = 0.0;
  bool ecp_defined = false;
  double ecp_mj = 0.0;  // per delivered packet
};

// Delivered unique records divided by expected deliveries. Self-deliveries
// (node == source) sit outside the denominator and are ignored here too.
PdrResult compute_pdr(const std::vector<DeliveryRecord>& deliveries,
                      std::int64_t expected_deliveries);

// Mean first-copy latency over non-self deliveries.
EedResult compute_eed(const std::vector<DeliveryRecord>& deliveries);

// Whole-network energy and energy per delivered packet. Duplicate receptions
// are already inside the ledger totals.
EnergyResult compute_energy(const EnergyLedger& ledger, std::int64_t delivered_count);

struct RunMetrics {
  PdrResult pdr;
  EedResult eed;
  EnergyResult energy;
  std::int64_t tx_count = 0;
  std::int64_t rx_count = 0;
  std::int64_t duplicate_count = 0;
  std::int64_t sent_packets = 0;
  std::uint32_t joined_count = 0;
  std::uint32_t unreachable_count = 0;
  std::vector<std::int64_t> node_tx;  // by topology index
  std::vector<std::int64_t> node_rx;
};

}  // namespace recoup
