#pragma once

#include "recoup/routing.hpp"

namespace recoup {

enum class Protocol { Recoup, Bmrf, Esmrf };

const char* protocol_name(Protocol p);
Protocol parse_protocol(const std::string& s);

// BMRF: bidirectional forwarding over the DODAG. The packet climbs via
// preferred parents, serving interested children at every hop; the root
// completes dissemination into the remaining subtrees. No cluster metadata.
ForwardPlan route_bmrf(const RoutingView& view, NodeId node, NodeId sender,
                       ArrivalClass arrival);

// ESMRF: the source delegates the packet hop-by-hop to the root (no deliveries
// en route); the root disseminates downward with plain per-child unicasts.
struct EsmrfPlan {
  std::optional<NodeId> to_parent;       // delegation leg
  std::vector<NodeId> downward_unicasts;
  bool delegation = false;  // copies on the delegation leg are not delivered
};

EsmrfPlan route_esmrf(const RoutingView& view, NodeId node, NodeId sender,
                      ArrivalClass arrival, bool copy_is_delegation);

}  // namespace recoup
