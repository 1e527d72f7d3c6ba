#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "recoup/topology.hpp"
#include "recoup/types.hpp"

namespace recoup {

enum class BehaviorKind { Honest, Blackhole, RankAttacker };

struct Behavior {
  BehaviorKind kind = BehaviorKind::Honest;
  std::uint32_t rank_delta = 2;      // advertised rank reduction
  double discard_prob = 0.5;         // selective discard on forwarded packets
};

struct AttackerConfig {
  BehaviorKind kind = BehaviorKind::Honest;
  double fraction = 0.0;  // of all nodes, root excluded from selection
  std::uint32_t rank_delta = 2;
  double discard_prob = 0.5;
  std::vector<NodeId> explicit_nodes;  // overrides fraction-based sampling
};

const char* behavior_name(BehaviorKind k);
BehaviorKind parse_behavior(const std::string& s);

// Deterministic seeded sample of floor(fraction * node_count) non-root nodes.
// The root is always honest.
std::vector<Behavior> place_attackers(const Topology& topo, const AttackerConfig& cfg,
                                      std::uint64_t seed);

// Data-plane filters. Both leave local delivery and self-originated traffic
// untouched; only transit forwarding is affected.
bool blackhole_drops_forwarding(const Behavior& b);
bool selective_discard(const Behavior& b, std::uint64_t rng_word);

std::vector<std::uint32_t> advertised_deltas(const Topology& topo,
                                             const std::vector<Behavior>& behaviors);

}  // namespace recoup
