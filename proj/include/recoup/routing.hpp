#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "recoup/dodag.hpp"
#include "recoup/types.hpp"

namespace recoup {

struct PacketKey {
  NodeId src = kNoNode;
  GroupId group = 0;
  std::uint32_t seq = 0;
  auto operator<=>(const PacketKey&) const = default;
};

struct PacketKeyHash {
  std::size_t operator()(const PacketKey& k) const {
    std::uint64_t h = (std::uint64_t(k.src) << 40) ^ (std::uint64_t(k.group) << 20) ^ k.seq;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 29;
    return static_cast<std::size_t>(h);
  }
};

// In-flight multicast packet copy. hop_budget and the visited-cluster set
// bound horizontal spread; downward_only marks packets past their upward and
// inter-cluster phase (set by the root).
struct PacketCopy {
  PacketKey key;
  bool downward_only = false;
  std::uint32_t hop_budget = 0;
  std::vector<ClusterId> visited;  // sorted unique; always holds the source's cluster
  Rank src_rank = 0;
  SimTime created_at = 0;
  std::uint64_t copy_id = 0;
  std::uint64_t parent_copy = 0;
};

enum class ArrivalClass { SelfOriginated, FromParent, FromChild, FromForeign, RootHold };

// Duplicate-detection table: fixed capacity, FIFO eviction.
class DuplicateTable {
 public:
  explicit DuplicateTable(std::size_t capacity = 100) : capacity_(capacity) {}

  // True if the key was already present; otherwise inserts it (evicting the
  // oldest entry when at capacity) and returns false.
  bool check_and_insert(const PacketKey& key);
  bool contains(const PacketKey& key) const { return keys_.count(key) != 0; }
  std::size_t size() const { return order_.size(); }

 private:
  std::size_t capacity_;
  std::unordered_set<PacketKey, PacketKeyHash> keys_;
  std::deque<PacketKey> order_;
};

// ---- root hold timer -------------------------------------------------------

// hold = tx_time * src_rank + alpha, exact integer arithmetic.
SimTime hold_duration(Rank src_rank, SimTime tx_time_us, SimTime alpha_us);

// alpha' = max(0, alpha + (last_copies_time - prev_hold)); negative holds are
// meaningless so the update clamps at zero.
SimTime updated_alpha(SimTime alpha_us, SimTime last_copies_time_us, SimTime prev_hold_us);

// Per (source, group) session state at the root.
struct AlphaSession {
  SimTime alpha_us = 0;
  // most recently armed/expired hold, folded into alpha lazily once complete
  bool pending = false;
  bool pending_expired = false;
  SimTime pending_hold_us = 0;       // hold duration of that entry
  SimTime pending_last_rel_us = 0;   // last copy arrival relative to first
};

struct RootHoldEntry {
  PacketCopy buffered;
  std::set<ClusterId> arrival_clusters;
  SimTime first_arrival = 0;
  SimTime expiry = 0;
  bool forwarded = false;  // tombstone: expired/forwarded, still deduplicating
};

// ---- forwarding plans ------------------------------------------------------

struct ForwardPlan {
  std::optional<NodeId> to_parent;
  std::vector<NodeId> downward_unicasts;    // one per interested child
  std::vector<NodeId> broadcast_processors; // nonempty: one broadcast, these process it
  std::vector<NodeId> intercluster;         // one neighbor per fresh foreign cluster
  // state for all outgoing copies
  std::uint32_t hop_budget = 0;
  std::vector<ClusterId> visited;
  bool downward_only = false;

  bool empty() const {
    return !to_parent && downward_unicasts.empty() && broadcast_processors.empty() &&
           intercluster.empty();
  }
  std::size_t transmission_count() const {
    return (to_parent ? 1 : 0) + downward_unicasts.size() + intercluster.size() +
           (broadcast_processors.empty() ? 0 : 1);
  }
};

// Downward leg per the optimized forwarding mechanism: nothing for an empty
// child set, per-child unicast below the threshold, one broadcast at or above
// it (boundary inclusive).
void ofm_downward(ForwardPlan& plan, const std::vector<NodeId>& interested_children,
                  std::uint32_t threshold);

// Immutable per-run routing context shared by all protocol planners.
struct RoutingView {
  const Dodag* dodag = nullptr;
  const std::vector<std::vector<NeighborEntry>>* neighbor_tables = nullptr;
  const DownwardRoutes* routes = nullptr;
  std::uint32_t ofm_threshold = 3;
  // tie-break for picking one neighbor per foreign cluster:
  // highest rank then lowest id (default), or seeded-random per packet copy.
  bool random_intercluster_pick = false;

  Rank rank_of(NodeId id) const { return dodag->rank_of(id); }
  ClusterId cluster_of(NodeId id) const { return dodag->cluster_of(id); }
  NodeId parent_of(NodeId id) const { return dodag->parent_of(id); }
  const std::vector<NodeId>& interested(NodeId id) const {
    return routes->interested(*dodag, id);
  }
  bool is_member(NodeId id) const { return routes->is_member[dodag->index(id)]; }
};

// One target per distinct foreign cluster that is neither in `visited` nor the
// arrival cluster. rng_word only matters when random_intercluster_pick is set.
std::vector<NodeId> select_inter_cluster_targets(const RoutingView& view, NodeId node,
                                                 const std::vector<ClusterId>& visited,
                                                 ClusterId arrival_cluster,
                                                 std::uint64_t rng_word = 0);

// ---- per-node forwarding logic --------------------------------------------

// RECOUP at a non-root node. `sender` is kNoNode for self-originated packets.
ForwardPlan route_recoup_node(const RoutingView& view, NodeId node, NodeId sender,
                              ArrivalClass arrival, const PacketCopy& pkt,
                              std::uint64_t rng_word = 0);

// RECOUP at the root once a hold expires: prune interested children whose
// clusters already delivered a copy, then go downward-only.
ForwardPlan route_recoup_root_expiry(const RoutingView& view,
                                     const std::set<ClusterId>& arrival_clusters,
                                     const PacketCopy& pkt);

// Root-sourced packets go straight downward with the flag set.
ForwardPlan route_root_sourced(const RoutingView& view, const PacketCopy& pkt);

ArrivalClass classify_arrival(const RoutingView& view, NodeId node, NodeId sender);

std::vector<ClusterId> merge_clusters(const std::vector<ClusterId>& visited,
                                      const std::vector<ClusterId>& added);

}  // namespace recoup
