#include "recoup/dodag.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

namespace recoup {

namespace {

std::vector<std::vector<std::size_t>> build_adjacency(const Topology& topo,
                                                      const RadioConfig& radio) {
  std::size_t n = topo.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Position& pi = topo.position(topo.id_at(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      if (in_range(pi, topo.position(topo.id_at(j)), radio)) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  return adj;
}

}  // namespace

Rank advertised_rank(Rank believed, std::uint32_t delta) {
  if (delta == 0) return believed;
  return believed > delta ? believed - delta : 1;
}

std::vector<NodeId> Dodag::clusterheads() const {
  std::vector<NodeId> heads;
  for (std::size_t i = 0; i < topo->size(); ++i) {
    NodeId id = topo->id_at(i);
    if (id != kRootId && joined[i] && parent[i] == kRootId) heads.push_back(id);
  }
  return heads;
}

Dodag form_dodag(const Topology& topo, const RadioConfig& radio,
                 const std::vector<std::uint32_t>& advertised_delta) {
  if (!topo.has_node(kRootId)) throw ConfigError("topology has no root (id 0)");
  std::size_t n = topo.size();
  std::size_t root = topo.index_of(kRootId);

  Dodag d;
  d.topo = &topo;
  d.radio = radio;
  d.rank.assign(n, 0);
  d.parent.assign(n, kNoNode);
  d.children.assign(n, {});
  d.cluster.assign(n, kNoCluster);
  d.joined.assign(n, false);

  auto adj = build_adjacency(topo, radio);

  // Radio connectivity to the root decides membership; rank lies distort the
  // tree, not the physical graph.
  std::deque<std::size_t> q{root};
  d.joined[root] = true;
  while (!q.empty()) {
    std::size_t i = q.front();
    q.pop_front();
    for (std::size_t j : adj[i]) {
      if (!d.joined[j]) {
        d.joined[j] = true;
        q.push_back(j);
      }
    }
  }
  if (adj[root].empty())
    throw FormationError("root is isolated: 0 nodes joined the network");
  for (std::size_t i = 0; i < n; ++i)
    if (!d.joined[i]) d.unreachable.push_back(topo.id_at(i));

  auto delta_of = [&](std::size_t i) -> std::uint32_t {
    if (i == root) return 0;  // the root cannot be compromised
    return i < advertised_delta.size() ? advertised_delta[i] : 0;
  };

  // Relax believed ranks against the lowest advertised rank in range. Offers
  // only ever decrease, so this converges within n passes.
  constexpr Rank kInf = std::numeric_limits<Rank>::max();
  std::vector<Rank> believed(n, kInf);
  believed[root] = 0;
  std::vector<std::size_t> parent_idx(n, n);
  for (std::size_t pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == root || !d.joined[i]) continue;
      Rank best_adv = kInf;
      std::size_t best = n;
      for (std::size_t j : adj[i]) {
        if (believed[j] == kInf) continue;
        Rank adv = (j == root) ? 0 : advertised_rank(believed[j], delta_of(j));
        if (adv < best_adv || (adv == best_adv && topo.id_at(j) < topo.id_at(best))) {
          best_adv = adv;
          best = j;
        }
      }
      if (best == n) continue;
      Rank nb = best_adv + 1;
      if (nb < believed[i] || parent_idx[i] != best) {
        if (nb <= believed[i]) {
          believed[i] = nb;
          parent_idx[i] = best;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (i == root || !d.joined[i]) continue;
    d.rank[i] = believed[i] == kInf ? 0 : believed[i];
    if (parent_idx[i] < n) d.parent[i] = topo.id_at(parent_idx[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d.parent[i] == kNoNode) continue;
    d.children[topo.index_of(d.parent[i])].push_back(topo.id_at(i));
  }
  for (auto& c : d.children) std::sort(c.begin(), c.end());

  // Clusters: heads are the root's tree children; descendants inherit the
  // head's id. Nodes caught in attacker parent cycles never reach the root's
  // tree and keep kNoCluster.
  std::deque<std::size_t> tq;
  for (NodeId head : d.children[root]) {
    std::size_t h = topo.index_of(head);
    d.cluster[h] = head;
    tq.push_back(h);
  }
  while (!tq.empty()) {
    std::size_t i = tq.front();
    tq.pop_front();
    for (NodeId c : d.children[i]) {
      std::size_t ci = topo.index_of(c);
      d.cluster[ci] = d.cluster[i];
      tq.push_back(ci);
    }
  }
  return d;
}

std::vector<std::vector<NeighborEntry>> build_neighbor_tables(const Dodag& d) {
  const Topology& topo = *d.topo;
  std::size_t n = topo.size();
  std::vector<std::vector<NeighborEntry>> tabs(n);
  auto adj = build_adjacency(topo, d.radio);
  for (std::size_t i = 0; i < n; ++i) {
    if (!d.joined[i]) continue;
    NodeId self = topo.id_at(i);
    for (std::size_t j : adj[i]) {
      if (!d.joined[j]) continue;
      NodeId other = topo.id_at(j);
      NeighborEntry e;
      e.neighbor = other;
      e.cluster = d.cluster[j];
      e.rank = d.rank[j];
      if (d.parent[i] == other)
        e.relation = Relation::PreferredParent;
      else if (d.parent[j] == self)
        e.relation = Relation::Child;
      else if (d.cluster[j] != kNoCluster && d.cluster[j] == d.cluster[i])
        e.relation = Relation::SiblingSameCluster;
      else
        e.relation = Relation::ForeignCluster;
      tabs[i].push_back(e);
    }
    std::sort(tabs[i].begin(), tabs[i].end(),
              [](const NeighborEntry& a, const NeighborEntry& b) {
                return a.neighbor < b.neighbor;
              });
  }
  return tabs;
}

DownwardRoutes build_downward_routes(const Dodag& d, const MulticastGroup& group) {
  const Topology& topo = *d.topo;
  std::size_t n = topo.size();
  DownwardRoutes routes;
  routes.group = group.id;
  routes.interested_children.assign(n, {});
  routes.is_member.assign(n, false);
  for (NodeId m : group.members) {
    if (topo.has_node(m)) routes.is_member[topo.index_of(m)] = true;
  }
  // member_below via iterative post-order over parent arcs
  std::vector<char> member_below(n, 0);
  for (std::size_t i = 0; i < n; ++i) member_below[i] = routes.is_member[i] ? 1 : 0;
  // process nodes deepest-first: sort indices by rank descending
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (d.rank[a] != d.rank[b]) return d.rank[a] > d.rank[b];
    return topo.id_at(a) < topo.id_at(b);
  });
  for (std::size_t i : order) {
    if (d.parent[i] == kNoNode) continue;
    if (member_below[i]) member_below[topo.index_of(d.parent[i])] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeId c : d.children[i]) {
      if (member_below[topo.index_of(c)]) routes.interested_children[i].push_back(c);
    }
  }
  return routes;
}

Dodag rebuild(Topology& topo, const RadioConfig& radio, NodeId removed_node) {
  if (removed_node == kRootId) throw ConfigError("cannot remove the root");
  topo.remove_node(removed_node);
  return form_dodag(topo, radio);
}

Dodag rebuild(Topology& topo, const RadioConfig& radio, NodeId added_node, Position p) {
  topo.add_node(added_node, p);
  return form_dodag(topo, radio);
}

std::string dump_dodag(const Dodag& d) {
  std::ostringstream os;
  os << "schema = 1\n";
  for (std::size_t i = 0; i < d.topo->size(); ++i) {
    NodeId id = d.topo->id_at(i);
    if (!d.joined[i]) {
      os << "unreachable " << id << "\n";
      continue;
    }
    if (id == kRootId) {
      os << "node 0 rank 0 parent - cluster -\n";
      continue;
    }
    os << "node " << id << " rank " << d.rank[i] << " parent ";
    if (d.parent[i] == kNoNode)
      os << "-";
    else
      os << d.parent[i];
    os << " cluster ";
    if (d.cluster[i] == kNoCluster)
      os << "-";
    else
      os << d.cluster[i];
    os << "\n";
  }
  return os.str();
}

std::vector<DodagRow> parse_dodag_rows(std::istream& in, const std::string& origin) {
  std::vector<DodagRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "schema" || tok == "unreachable") continue;
    if (tok != "node")
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad dodag line");
    DodagRow r{};
    std::string kw, pv, cv;
    NodeId id;
    if (!(ls >> id)) throw ConfigError(origin + ": bad node id");
    r.node = id;
    if (!(ls >> kw >> r.rank) || kw != "rank")
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected rank");
    if (!(ls >> kw >> pv) || kw != "parent")
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected parent");
    r.parent = (pv == "-") ? kNoNode : static_cast<NodeId>(std::stoul(pv));
    if (!(ls >> kw >> cv) || kw != "cluster")
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected cluster");
    r.cluster = (cv == "-") ? kNoCluster : static_cast<ClusterId>(std::stoul(cv));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace recoup
