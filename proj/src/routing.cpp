#include "recoup/routing.hpp"

#include <algorithm>

#include "recoup/rng.hpp"

namespace recoup {

bool DuplicateTable::check_and_insert(const PacketKey& key) {
  if (keys_.count(key)) return true;
  if (capacity_ > 0 && order_.size() >= capacity_) {
    keys_.erase(order_.front());
    order_.pop_front();
  }
  keys_.insert(key);
  order_.push_back(key);
  return false;
}

SimTime hold_duration(Rank src_rank, SimTime tx_time_us, SimTime alpha_us) {
  return tx_time_us * static_cast<SimTime>(src_rank) + alpha_us;
}

SimTime updated_alpha(SimTime alpha_us, SimTime last_copies_time_us, SimTime prev_hold_us) {
  SimTime a = alpha_us + (last_copies_time_us - prev_hold_us);
  return a < 0 ? 0 : a;
}

void ofm_downward(ForwardPlan& plan, const std::vector<NodeId>& interested_children,
                  std::uint32_t threshold) {
  if (interested_children.empty()) return;
  if (interested_children.size() >= threshold) {
    plan.broadcast_processors = interested_children;
  } else {
    plan.downward_unicasts.insert(plan.downward_unicasts.end(),
                                  interested_children.begin(), interested_children.end());
  }
}

std::vector<ClusterId> merge_clusters(const std::vector<ClusterId>& visited,
                                      const std::vector<ClusterId>& added) {
  std::vector<ClusterId> out = visited;
  out.insert(out.end(), added.begin(), added.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeId> select_inter_cluster_targets(const RoutingView& view, NodeId node,
                                                 const std::vector<ClusterId>& visited,
                                                 ClusterId arrival_cluster,
                                                 std::uint64_t rng_word) {
  const auto& tab = (*view.neighbor_tables)[view.dodag->index(node)];
  // candidates per foreign cluster, in neighbor-id order
  std::map<ClusterId, std::vector<const NeighborEntry*>> per_cluster;
  for (const NeighborEntry& e : tab) {
    if (e.relation != Relation::ForeignCluster) continue;
    if (e.cluster == kNoCluster) continue;
    if (e.cluster == arrival_cluster) continue;
    if (std::binary_search(visited.begin(), visited.end(), e.cluster)) continue;
    per_cluster[e.cluster].push_back(&e);
  }
  std::vector<NodeId> out;
  for (auto& [cid, cands] : per_cluster) {
    if (view.random_intercluster_pick && cands.size() > 1) {
      std::uint64_t w = Rng::mix(rng_word, cid);
      out.push_back(cands[w % cands.size()]->neighbor);
      continue;
    }
    const NeighborEntry* best = cands.front();
    for (const NeighborEntry* e : cands) {
      if (e->rank > best->rank || (e->rank == best->rank && e->neighbor < best->neighbor))
        best = e;
    }
    out.push_back(best->neighbor);
  }
  return out;
}

ArrivalClass classify_arrival(const RoutingView& view, NodeId node, NodeId sender) {
  if (sender == kNoNode) return ArrivalClass::SelfOriginated;
  if (view.parent_of(node) == sender) return ArrivalClass::FromParent;
  if (view.parent_of(sender) == node) return ArrivalClass::FromChild;
  return ArrivalClass::FromForeign;
}

ForwardPlan route_recoup_node(const RoutingView& view, NodeId node, NodeId sender,
                              ArrivalClass arrival, const PacketCopy& pkt,
                              std::uint64_t rng_word) {
  ForwardPlan plan;
  plan.hop_budget = pkt.hop_budget;
  plan.visited = pkt.visited;
  plan.downward_only = pkt.downward_only;
  NodeId parent = view.parent_of(node);
  ClusterId own = view.cluster_of(node);
  ClusterId arrival_cluster =
      (sender == kNoNode || sender == kRootId) ? kNoCluster : view.cluster_of(sender);

  switch (arrival) {
    case ArrivalClass::SelfOriginated: {
      plan.hop_budget = view.rank_of(node);
      auto targets = select_inter_cluster_targets(view, node, {}, kNoCluster, rng_word);
      std::vector<ClusterId> target_clusters;
      if (own != kNoCluster) target_clusters.push_back(own);
      for (NodeId t : targets) target_clusters.push_back(view.cluster_of(t));
      plan.visited = merge_clusters({}, target_clusters);
      if (parent != kNoNode) plan.to_parent = parent;
      ofm_downward(plan, view.interested(node), view.ofm_threshold);
      plan.intercluster = targets;
      break;
    }
    case ArrivalClass::FromParent: {
      // never back upward; interested children plus, while the flag is clear,
      // fresh foreign clusters
      ofm_downward(plan, view.interested(node), view.ofm_threshold);
      if (!pkt.downward_only) {
        auto targets =
            select_inter_cluster_targets(view, node, pkt.visited, arrival_cluster, rng_word);
        std::vector<ClusterId> tc;
        for (NodeId t : targets) tc.push_back(view.cluster_of(t));
        plan.visited = merge_clusters(pkt.visited, tc);
        plan.intercluster = targets;
      }
      break;
    }
    case ArrivalClass::FromChild:
    case ArrivalClass::FromForeign: {
      std::vector<NodeId> ic;
      for (NodeId c : view.interested(node))
        if (c != sender) ic.push_back(c);
      if (pkt.hop_budget > 0) {
        plan.hop_budget = pkt.hop_budget - 1;
        auto targets =
            select_inter_cluster_targets(view, node, pkt.visited, arrival_cluster, rng_word);
        std::vector<ClusterId> tc;
        for (NodeId t : targets) tc.push_back(view.cluster_of(t));
        plan.visited = merge_clusters(pkt.visited, tc);
        plan.intercluster = targets;
      }
      if (parent != kNoNode) plan.to_parent = parent;
      ofm_downward(plan, ic, view.ofm_threshold);
      break;
    }
    case ArrivalClass::RootHold:
      break;  // handled by route_recoup_root_expiry
  }
  // never return to the copy's sender
  if (plan.to_parent && *plan.to_parent == sender) plan.to_parent.reset();
  return plan;
}

ForwardPlan route_recoup_root_expiry(const RoutingView& view,
                                     const std::set<ClusterId>& arrival_clusters,
                                     const PacketCopy& pkt) {
  ForwardPlan plan;
  plan.hop_budget = pkt.hop_budget;
  plan.visited = pkt.visited;
  plan.downward_only = true;
  std::vector<NodeId> pruned;
  for (NodeId c : view.interested(kRootId)) {
    if (!arrival_clusters.count(view.cluster_of(c))) pruned.push_back(c);
  }
  ofm_downward(plan, pruned, view.ofm_threshold);
  return plan;
}

ForwardPlan route_root_sourced(const RoutingView& view, const PacketCopy& pkt) {
  ForwardPlan plan;
  plan.hop_budget = 0;
  plan.visited = pkt.visited;
  plan.downward_only = true;
  ofm_downward(plan, view.interested(kRootId), view.ofm_threshold);
  return plan;
}

}  // namespace recoup
