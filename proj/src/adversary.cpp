#include "recoup/adversary.hpp"

#include <algorithm>

#include "recoup/rng.hpp"

namespace recoup {

const char* behavior_name(BehaviorKind k) {
  switch (k) {
    case BehaviorKind::Honest: return "none";
    case BehaviorKind::Blackhole: return "blackhole";
    case BehaviorKind::RankAttacker: return "rank";
  }
  return "?";
}

BehaviorKind parse_behavior(const std::string& s) {
  if (s == "none" || s == "honest" || s.empty()) return BehaviorKind::Honest;
  if (s == "blackhole") return BehaviorKind::Blackhole;
  if (s == "rank") return BehaviorKind::RankAttacker;
  throw ConfigError("unknown attacker kind '" + s + "' (expected none|blackhole|rank)");
}

std::vector<Behavior> place_attackers(const Topology& topo, const AttackerConfig& cfg,
                                      std::uint64_t seed) {
  if (cfg.fraction < 0.0 || cfg.fraction > 1.0)
    throw ConfigError("attacker fraction must be in [0, 1]");
  std::vector<Behavior> behaviors(topo.size());
  if (cfg.kind == BehaviorKind::Honest) return behaviors;

  Behavior attacker;
  attacker.kind = cfg.kind;
  attacker.rank_delta = cfg.rank_delta;
  attacker.discard_prob = cfg.discard_prob;

  if (!cfg.explicit_nodes.empty()) {
    for (NodeId id : cfg.explicit_nodes) {
      if (id == kRootId) throw ConfigError("the root cannot be an attacker");
      behaviors[topo.index_of(id)] = attacker;
    }
    return behaviors;
  }

  std::vector<NodeId> pool;
  for (NodeId id : topo.ids())
    if (id != kRootId) pool.push_back(id);
  std::size_t count = static_cast<std::size_t>(cfg.fraction * static_cast<double>(topo.size()));
  count = std::min(count, pool.size());

  Rng rng(Rng::mix(seed, 0xa77ac4e5ULL));
  // Fisher-Yates prefix
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  for (std::size_t i = 0; i < count; ++i) behaviors[topo.index_of(pool[i])] = attacker;
  return behaviors;
}

bool blackhole_drops_forwarding(const Behavior& b) {
  return b.kind == BehaviorKind::Blackhole;
}

bool selective_discard(const Behavior& b, std::uint64_t rng_word) {
  if (b.kind != BehaviorKind::RankAttacker) return false;
  if (b.discard_prob <= 0.0) return false;
  if (b.discard_prob >= 1.0) return true;
  Rng r(rng_word);
  return r.next_double() < b.discard_prob;
}

std::vector<std::uint32_t> advertised_deltas(const Topology& topo,
                                             const std::vector<Behavior>& behaviors) {
  std::vector<std::uint32_t> deltas(topo.size(), 0);
  for (std::size_t i = 0; i < behaviors.size() && i < deltas.size(); ++i) {
    if (behaviors[i].kind == BehaviorKind::RankAttacker) deltas[i] = behaviors[i].rank_delta;
  }
  return deltas;
}

}  // namespace recoup
