#include "recoup/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "recoup/rng.hpp"

namespace recoup {

void record_transmission(EnergyLedger& ledger, const RadioConfig& radio,
                         std::size_t sender_index,
                         const std::vector<std::size_t>& receiver_indices) {
  ledger.tx_count[sender_index] += 1;
  ledger.tx_energy_uj += radio.tx_energy_uj;
  for (std::size_t r : receiver_indices) {
    ledger.rx_count[r] += 1;
    ledger.rx_energy_uj += radio.rx_energy_uj;
  }
}

void Topology::add_node(NodeId id, Position p) {
  if (index_.count(id)) throw ConfigError("duplicate node id " + std::to_string(id));
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  std::size_t at = static_cast<std::size_t>(it - ids_.begin());
  ids_.insert(it, id);
  positions_.insert(positions_.begin() + static_cast<std::ptrdiff_t>(at), p);
  index_.clear();
  for (std::size_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = i;
}

void Topology::remove_node(NodeId id) {
  auto it = index_.find(id);
  if (it == index_.end()) throw ConfigError("no node " + std::to_string(id));
  std::size_t at = it->second;
  ids_.erase(ids_.begin() + static_cast<std::ptrdiff_t>(at));
  positions_.erase(positions_.begin() + static_cast<std::ptrdiff_t>(at));
  index_.clear();
  for (std::size_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = i;
}

std::size_t Topology::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ConfigError("no node " + std::to_string(id));
  return it->second;
}

const Position& Topology::position(NodeId id) const {
  return positions_[index_of(id)];
}

std::vector<NodeId> Topology::neighbors(NodeId id, const RadioConfig& radio) const {
  std::vector<NodeId> out;
  const Position& p = position(id);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == id) continue;
    if (in_range(p, positions_[i], radio)) out.push_back(ids_[i]);
  }
  return out;
}

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

bool in_range(const Position& a, const Position& b, const RadioConfig& radio) {
  return distance(a, b) <= radio.tx_range_m;
}

Topology generate_topology(std::uint32_t node_count, double width, double height,
                           std::uint64_t seed) {
  if (node_count < 2) throw ConfigError("node_count must be >= 2");
  if (width <= 0.0 || height <= 0.0) throw ConfigError("area must be positive");
  Topology topo(width, height);
  topo.add_node(kRootId, Position{width / 2.0, height / 2.0});
  Rng rng(Rng::mix(seed, 0x746f706fULL));
  for (NodeId id = 1; id < node_count; ++id) {
    double x = rng.next_double() * width;
    double y = rng.next_double() * height;
    topo.add_node(id, Position{x, y});
  }
  return topo;
}

std::string dump_topology(const Topology& topo) {
  std::ostringstream os;
  os << "schema = 1\n";
  os << "area = " << topo.width() << " " << topo.height() << "\n";
  for (NodeId id : topo.ids()) {
    const Position& p = topo.position(id);
    os << "node " << id << " " << p.x << " " << p.y << "\n";
  }
  return os.str();
}

Topology parse_topology(std::istream& in, const std::string& origin) {
  double w = 0.0, h = 0.0;
  std::vector<std::pair<NodeId, Position>> nodes;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "schema") {
      std::string eq;
      int v = 0;
      if (!(ls >> eq >> v) || eq != "=" || v != 1)
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unsupported schema");
    } else if (tok == "area") {
      std::string eq;
      if (!(ls >> eq >> w >> h) || eq != "=")
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad area line");
    } else if (tok == "node") {
      NodeId id;
      double x, y;
      if (!(ls >> id >> x >> y))
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad node line");
      nodes.emplace_back(id, Position{x, y});
    } else {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown directive '" + tok + "'");
    }
  }
  if (w <= 0.0 || h <= 0.0) throw ConfigError(origin + ": missing area");
  if (nodes.size() < 2) throw ConfigError(origin + ": need at least 2 nodes");
  Topology topo(w, h);
  for (auto& [id, p] : nodes) {
    if (p.x < 0 || p.x > w || p.y < 0 || p.y > h)
      throw ConfigError(origin + ": node " + std::to_string(id) + " out of bounds");
    topo.add_node(id, p);
  }
  if (!topo.has_node(kRootId)) throw ConfigError(origin + ": no root node (id 0)");
  return topo;
}

Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open topology file: " + path);
  return parse_topology(in, path);
}

}  // namespace recoup
