#include "recoup/baselines.hpp"

namespace recoup {

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Recoup: return "recoup";
    case Protocol::Bmrf: return "bmrf";
    case Protocol::Esmrf: return "esmrf";
  }
  return "?";
}

Protocol parse_protocol(const std::string& s) {
  if (s == "recoup") return Protocol::Recoup;
  if (s == "bmrf") return Protocol::Bmrf;
  if (s == "esmrf") return Protocol::Esmrf;
  throw ConfigError("unknown protocol '" + s + "' (expected recoup|bmrf|esmrf)");
}

ForwardPlan route_bmrf(const RoutingView& view, NodeId node, NodeId sender,
                       ArrivalClass arrival) {
  ForwardPlan plan;
  if (node == kRootId) {
    std::vector<NodeId> ic;
    for (NodeId c : view.interested(kRootId))
      if (c != sender) ic.push_back(c);
    ofm_downward(plan, ic, view.ofm_threshold);
    return plan;
  }
  NodeId parent = view.parent_of(node);
  switch (arrival) {
    case ArrivalClass::SelfOriginated: {
      if (parent != kNoNode) plan.to_parent = parent;
      ofm_downward(plan, view.interested(node), view.ofm_threshold);
      break;
    }
    case ArrivalClass::FromParent: {
      ofm_downward(plan, view.interested(node), view.ofm_threshold);
      break;
    }
    case ArrivalClass::FromChild: {
      if (parent != kNoNode) plan.to_parent = parent;
      std::vector<NodeId> ic;
      for (NodeId c : view.interested(node))
        if (c != sender) ic.push_back(c);
      ofm_downward(plan, ic, view.ofm_threshold);
      break;
    }
    default:
      break;  // BMRF has no inter-cluster arrivals
  }
  if (plan.to_parent && *plan.to_parent == sender) plan.to_parent.reset();
  return plan;
}

EsmrfPlan route_esmrf(const RoutingView& view, NodeId node, NodeId sender,
                      ArrivalClass arrival, bool copy_is_delegation) {
  EsmrfPlan plan;
  if (node == kRootId) {
    for (NodeId c : view.interested(kRootId)) plan.downward_unicasts.push_back(c);
    return plan;
  }
  if (arrival == ArrivalClass::SelfOriginated || copy_is_delegation) {
    NodeId parent = view.parent_of(node);
    if (parent != kNoNode) {
      plan.to_parent = parent;
      plan.delegation = true;
    }
    return plan;
  }
  // downward leg: plain per-child unicast, no mixed mode
  (void)sender;
  for (NodeId c : view.interested(node)) plan.downward_unicasts.push_back(c);
  return plan;
}

}  // namespace recoup
