#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "recoup/adversary.hpp"
#include "recoup/baselines.hpp"
#include "recoup/dodag.hpp"
#include "recoup/metrics.hpp"
#include "recoup/routing.hpp"
#include "recoup/topology.hpp"
#include "recoup/types.hpp"

namespace recoup {

struct TrafficConfig {
  std::uint32_t source_count = 8;
  double rate_pps = 0.5;
  std::uint32_t packets_per_source = 500;
  double sink_fraction = 0.4;
  std::vector<NodeId> explicit_sources;  // overrides sampled sources
  std::vector<NodeId> explicit_members;  // overrides sampled group members
};

struct SimKnobs {
  std::uint32_t ofm_threshold = 3;
  SimTime alpha_initial_us = 0;
  std::size_t dd_capacity = 100;
  bool random_intercluster_pick = false;
};

struct TraceRecord {
  SimTime time_us = 0;
  NodeId sender = kNoNode;
  NodeId from = kNoNode;  // arrival node of the copy that triggered this send
  ArrivalClass cause = ArrivalClass::SelfOriginated;
  std::vector<NodeId> receivers;  // broadcast: the processing set
  bool broadcast = false;
  PacketKey key;
  std::uint32_t hop_budget = 0;
  std::vector<ClusterId> visited;
  bool downward_only = false;
  std::uint64_t copy_id = 0;
  std::uint64_t parent_copy = 0;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<DeliveryRecord> deliveries;
  std::vector<TraceRecord> trace;  // only when requested
  // formation snapshot (by topology index)
  std::vector<Rank> node_rank;
  std::vector<ClusterId> node_cluster;
  std::vector<bool> node_joined;
  std::vector<NodeId> members;
  std::vector<NodeId> sources;
  std::vector<NodeId> attackers;  // resolved roster, sorted
  SimTime end_time_us = 0;
};

// One deterministic discrete-event run: formation, attacker placement already
// reflected in `behaviors`, traffic generation, event loop to quiescence.
RunResult run_simulation(const Topology& topo, const RadioConfig& radio,
                         const std::vector<Behavior>& behaviors,
                         const TrafficConfig& traffic, Protocol protocol,
                         const SimKnobs& knobs, std::uint64_t seed, bool want_trace);

std::string dump_trace(const std::vector<TraceRecord>& trace);

}  // namespace recoup
