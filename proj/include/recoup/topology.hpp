#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "recoup/types.hpp"

namespace recoup {

// Static node placement. Node ids are arbitrary (fixture files may use sparse
// ids); internally nodes are addressed by dense index in id-sorted order.
class Topology {
 public:
  Topology() = default;
  Topology(double width, double height) : width_(width), height_(height) {}

  void add_node(NodeId id, Position p);
  void remove_node(NodeId id);

  std::size_t size() const { return ids_.size(); }
  double width() const { return width_; }
  double height() const { return height_; }

  const std::vector<NodeId>& ids() const { return ids_; }
  NodeId id_at(std::size_t index) const { return ids_[index]; }
  std::size_t index_of(NodeId id) const;
  bool has_node(NodeId id) const { return index_.count(id) != 0; }
  const Position& position(NodeId id) const;

  // Indices of nodes within radio range of `id`, in id order, excluding `id`.
  std::vector<NodeId> neighbors(NodeId id, const RadioConfig& radio) const;

 private:
  double width_ = 0.0;
  double height_ = 0.0;
  std::vector<NodeId> ids_;          // sorted
  std::vector<Position> positions_;  // parallel to ids_
  std::unordered_map<NodeId, std::size_t> index_;
};

bool in_range(const Position& a, const Position& b, const RadioConfig& radio);
double distance(const Position& a, const Position& b);

// Uniform random placement, root (id 0) pinned at the area center.
// Deterministic for a given seed.
Topology generate_topology(std::uint32_t node_count, double width, double height,
                           std::uint64_t seed);

// Structured-text import/export: "node <id> <x> <y>" lines plus an area header,
// so fixture topologies are version-controlled files.
std::string dump_topology(const Topology& topo);
Topology parse_topology(std::istream& in, const std::string& origin);
Topology load_topology(const std::string& path);

}  // namespace recoup
