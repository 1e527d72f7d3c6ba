#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "recoup/topology.hpp"
#include "recoup/types.hpp"

namespace recoup {

enum class Relation { PreferredParent, Child, SiblingSameCluster, ForeignCluster };

struct NeighborEntry {
  NodeId neighbor = kNoNode;
  ClusterId cluster = kNoCluster;
  Rank rank = 0;
  Relation relation = Relation::SiblingSameCluster;
};

struct MulticastGroup {
  GroupId id = 0;
  std::vector<NodeId> members;  // sorted
};

// Routing state for one formed network. Node addressing is by dense index
// (see Topology); kNoNode/kNoCluster mark nodes that did not join.
struct Dodag {
  const Topology* topo = nullptr;
  RadioConfig radio;

  std::vector<Rank> rank;             // believed rank (advertised lies propagate)
  std::vector<NodeId> parent;         // preferred parent id, kNoNode for root/unjoined
  std::vector<std::vector<NodeId>> children;  // sorted ids
  std::vector<ClusterId> cluster;     // head's node id; kNoCluster for root/unjoined
  std::vector<bool> joined;           // reachable from root along parent arcs
  std::vector<NodeId> unreachable;    // ids that failed to join, sorted

  std::size_t index(NodeId id) const { return topo->index_of(id); }
  bool is_joined(NodeId id) const { return joined[index(id)]; }
  Rank rank_of(NodeId id) const { return rank[index(id)]; }
  NodeId parent_of(NodeId id) const { return parent[index(id)]; }
  ClusterId cluster_of(NodeId id) const { return cluster[index(id)]; }
  const std::vector<NodeId>& children_of(NodeId id) const { return children[index(id)]; }
  std::vector<NodeId> clusterheads() const;
};

// Breadth-first formation from the root. Each node picks the neighbor with the
// lowest advertised rank as preferred parent (ties: lowest id) and takes
// rank = advertised + 1. `advertised_delta` lowers a node's advertised rank
// (rank attack); pass an empty vector for honest formation.
Dodag form_dodag(const Topology& topo, const RadioConfig& radio,
                 const std::vector<std::uint32_t>& advertised_delta = {});

// Advertised rank for a node: honest nodes advertise their believed rank,
// rank attackers advertise max(1, rank - delta).
Rank advertised_rank(Rank believed, std::uint32_t delta);

// One neighbor-table row per in-range neighbor, in neighbor-id order.
// The root has no cluster and never appears as a foreign-cluster entry.
std::vector<std::vector<NeighborEntry>> build_neighbor_tables(const Dodag& dodag);

// Storing-mode downward routes: per node, the children through whose subtree
// at least one group member is reachable.
struct DownwardRoutes {
  GroupId group = 0;
  std::vector<std::vector<NodeId>> interested_children;  // by node index, sorted
  std::vector<bool> is_member;                           // by node index

  const std::vector<NodeId>& interested(const Dodag& d, NodeId id) const {
    return interested_children[d.index(id)];
  }
};

DownwardRoutes build_downward_routes(const Dodag& dodag, const MulticastGroup& group);

// Full recomputation after a topology change. Removing the root is an error.
Dodag rebuild(Topology& topo, const RadioConfig& radio, NodeId removed_node);
Dodag rebuild(Topology& topo, const RadioConfig& radio, NodeId added_node, Position p);

// Text dump/parse of (node, rank, parent, cluster) rows for fixtures and
// debugging. parse_dodag_pins returns rows; callers compare against a formed
// Dodag or use them to pin expectations.
struct DodagRow {
  NodeId node;
  Rank rank;
  NodeId parent;
  ClusterId cluster;
};
std::string dump_dodag(const Dodag& dodag);
std::vector<DodagRow> parse_dodag_rows(std::istream& in, const std::string& origin);

}  // namespace recoup
