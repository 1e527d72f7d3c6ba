#include "recoup/engine.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_set>
#include <variant>

#include "recoup/rng.hpp"

namespace recoup {

namespace {

struct AppSendEv {
  NodeId source;
  std::uint32_t seq;
};

struct HopDeliverEv {
  NodeId sender;
  NodeId receiver;
  PacketCopy pkt;
  bool process;     // false: overheard broadcast, radio cost only
  bool delegation;  // esmrf upward encapsulation
};

struct HoldExpiryEv {
  PacketKey key;
};

using Payload = std::variant<AppSendEv, HopDeliverEv, HoldExpiryEv>;

struct Event {
  SimTime time;
  std::uint64_t ordinal;
  Payload payload;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.ordinal > b.ordinal;
  }
};

struct AlphaSessionState {
  AlphaSession s;
  PacketKey pending_key;
  bool initialized = false;
};

class Engine {
 public:
  Engine(const Topology& topo, const RadioConfig& radio,
         const std::vector<Behavior>& behaviors, const TrafficConfig& traffic,
         Protocol protocol, const SimKnobs& knobs, std::uint64_t seed, bool want_trace)
      : topo_(topo),
        radio_(radio),
        behaviors_(behaviors),
        traffic_(traffic),
        protocol_(protocol),
        knobs_(knobs),
        seed_(seed),
        want_trace_(want_trace),
        ledger_(topo.size()) {}

  RunResult run();

 private:
  // immutable after setup
  const Topology& topo_;
  RadioConfig radio_;
  std::vector<Behavior> behaviors_;
  TrafficConfig traffic_;
  Protocol protocol_;
  SimKnobs knobs_;
  std::uint64_t seed_;
  bool want_trace_;

  Dodag dodag_;
  std::vector<std::vector<NeighborEntry>> ntabs_;
  MulticastGroup group_;
  DownwardRoutes routes_;
  RoutingView view_;
  std::vector<NodeId> sources_;
  std::vector<std::vector<NodeId>> in_range_;  // by index, id-sorted

  // run state
  EnergyLedger ledger_;
  std::vector<DuplicateTable> dd_;
  std::vector<std::unordered_set<PacketKey, PacketKeyHash>> delivered_keys_;
  std::map<PacketKey, RootHoldEntry> hold_;
  std::deque<PacketKey> hold_order_;
  std::map<std::pair<NodeId, GroupId>, AlphaSessionState> alpha_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::uint64_t next_ordinal_ = 0;
  std::uint64_t next_copy_ = 1;
  std::vector<DeliveryRecord> deliveries_;
  std::vector<TraceRecord> trace_;
  std::int64_t duplicates_ = 0;
  std::int64_t sent_ = 0;
  std::int64_t expected_ = 0;
  SimTime now_ = 0;

  void setup();
  void schedule(SimTime t, Payload p) {
    queue_.push(Event{t, next_ordinal_++, std::move(p)});
  }

  std::size_t idx(NodeId id) const { return topo_.index_of(id); }
  const Behavior& behavior(NodeId id) const { return behaviors_[idx(id)]; }
  bool is_member(NodeId id) const { return routes_.is_member[idx(id)]; }

  void deliver_local(NodeId node, const PacketCopy& pkt);
  void emit_plan(NodeId node, const ForwardPlan& plan, const PacketCopy& pkt,
                 ArrivalClass cause, NodeId from, bool delegation_up = false);
  void send_unicast(NodeId from_node, NodeId to, const PacketCopy& pkt, bool delegation);
  void send_broadcast(NodeId from_node, const std::vector<NodeId>& processors,
                      const PacketCopy& pkt);
  void trace_send(NodeId sender, NodeId from, ArrivalClass cause,
                  const std::vector<NodeId>& receivers, bool broadcast,
                  const PacketCopy& pkt);

  void on_app_send(const AppSendEv& ev);
  void on_hop_deliver(const HopDeliverEv& ev);
  void on_hold_expiry(const HoldExpiryEv& ev);
  void root_arrival_recoup(NodeId sender, const PacketCopy& pkt);

  PacketCopy child_copy(const PacketCopy& base, const ForwardPlan& plan) {
    PacketCopy c = base;
    c.hop_budget = plan.hop_budget;
    c.visited = plan.visited;
    c.downward_only = plan.downward_only;
    c.parent_copy = base.copy_id;
    return c;
  }

  std::uint64_t rng_word(std::uint64_t tag, std::uint64_t a, std::uint64_t b) const {
    return Rng::mix(Rng::mix(seed_, tag), Rng::mix(a, b));
  }
};

void Engine::setup() {
  auto deltas = advertised_deltas(topo_, behaviors_);
  dodag_ = form_dodag(topo_, radio_, deltas);
  ntabs_ = build_neighbor_tables(dodag_);

  // joined non-root pool, id order
  std::vector<NodeId> pool;
  for (std::size_t i = 0; i < topo_.size(); ++i) {
    NodeId id = topo_.id_at(i);
    if (id != kRootId && dodag_.joined[i]) pool.push_back(id);
  }

  group_.id = 1;
  if (!traffic_.explicit_members.empty()) {
    group_.members = traffic_.explicit_members;
    std::sort(group_.members.begin(), group_.members.end());
    for (NodeId m : group_.members) {
      if (!topo_.has_node(m) || !dodag_.is_joined(m) || m == kRootId)
        throw ConfigError("group member " + std::to_string(m) + " is not a joined non-root node");
    }
  } else {
    if (traffic_.sink_fraction < 0.0 || traffic_.sink_fraction > 1.0)
      throw ConfigError("sink_fraction must be in [0, 1]");
    std::size_t count = static_cast<std::size_t>(traffic_.sink_fraction *
                                                 static_cast<double>(pool.size()));
    std::vector<NodeId> shuffled = pool;
    Rng rng(Rng::mix(seed_, 0x5157ULL));
    for (std::size_t i = 0; i < count && i < shuffled.size(); ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.next_below(shuffled.size() - i));
      std::swap(shuffled[i], shuffled[j]);
    }
    group_.members.assign(shuffled.begin(),
                          shuffled.begin() + static_cast<std::ptrdiff_t>(
                                                 std::min(count, shuffled.size())));
    std::sort(group_.members.begin(), group_.members.end());
  }

  if (!traffic_.explicit_sources.empty()) {
    sources_ = traffic_.explicit_sources;
    for (NodeId s : sources_) {
      if (!topo_.has_node(s) || !dodag_.is_joined(s))
        throw ConfigError("source " + std::to_string(s) + " is not a joined node");
    }
  } else {
    if (traffic_.source_count > pool.size())
      throw ConfigError("source_count exceeds joined non-root nodes");
    std::vector<NodeId> shuffled = pool;
    Rng rng(Rng::mix(seed_, 0x50c0ULL));
    for (std::size_t i = 0; i < traffic_.source_count; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.next_below(shuffled.size() - i));
      std::swap(shuffled[i], shuffled[j]);
    }
    sources_.assign(shuffled.begin(), shuffled.begin() + traffic_.source_count);
    std::sort(sources_.begin(), sources_.end());
  }

  routes_ = build_downward_routes(dodag_, group_);
  view_.dodag = &dodag_;
  view_.neighbor_tables = &ntabs_;
  view_.routes = &routes_;
  view_.ofm_threshold = knobs_.ofm_threshold;
  view_.random_intercluster_pick = knobs_.random_intercluster_pick;

  in_range_.resize(topo_.size());
  for (std::size_t i = 0; i < topo_.size(); ++i)
    in_range_[i] = topo_.neighbors(topo_.id_at(i), radio_);

  dd_.assign(topo_.size(), DuplicateTable(knobs_.dd_capacity));
  delivered_keys_.resize(topo_.size());

  if (traffic_.rate_pps <= 0.0) throw ConfigError("packet rate must be positive");
  SimTime interval = static_cast<SimTime>(1e6 / traffic_.rate_pps);
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    for (std::uint32_t k = 0; k < traffic_.packets_per_source; ++k) {
      SimTime t = 100000 + static_cast<SimTime>(i) * 10000 + static_cast<SimTime>(k) * interval;
      schedule(t, AppSendEv{sources_[i], k});
    }
  }
}

void Engine::deliver_local(NodeId node, const PacketCopy& pkt) {
  if (!is_member(node)) return;
  auto& seen = delivered_keys_[idx(node)];
  if (seen.count(pkt.key)) return;
  seen.insert(pkt.key);
  deliveries_.push_back(DeliveryRecord{node, pkt.key, now_ - pkt.created_at, now_});
}

void Engine::trace_send(NodeId sender, NodeId from, ArrivalClass cause,
                        const std::vector<NodeId>& receivers, bool broadcast,
                        const PacketCopy& pkt) {
  if (!want_trace_) return;
  TraceRecord r;
  r.time_us = now_;
  r.sender = sender;
  r.from = from;
  r.cause = cause;
  r.receivers = receivers;
  r.broadcast = broadcast;
  r.key = pkt.key;
  r.hop_budget = pkt.hop_budget;
  r.visited = pkt.visited;
  r.downward_only = pkt.downward_only;
  r.copy_id = pkt.copy_id;
  r.parent_copy = pkt.parent_copy;
  trace_.push_back(std::move(r));
}

void Engine::send_unicast(NodeId from_node, NodeId to, const PacketCopy& pkt,
                          bool delegation) {
  record_transmission(ledger_, radio_, idx(from_node), {idx(to)});
  if (radio_.link_delivery_prob < 1.0) {
    Rng r(rng_word(0x105eULL, pkt.copy_id, to));
    if (r.next_double() >= radio_.link_delivery_prob) return;
  }
  schedule(now_ + radio_.tx_time_us, HopDeliverEv{from_node, to, pkt, true, delegation});
}

void Engine::send_broadcast(NodeId from_node, const std::vector<NodeId>& processors,
                            const PacketCopy& pkt) {
  std::vector<std::size_t> rx;
  for (NodeId n : in_range_[idx(from_node)]) rx.push_back(idx(n));
  record_transmission(ledger_, radio_, idx(from_node), rx);
  std::unordered_set<NodeId> procs(processors.begin(), processors.end());
  for (NodeId n : in_range_[idx(from_node)]) {
    bool process = procs.count(n) != 0;
    if (process && radio_.link_delivery_prob < 1.0) {
      Rng r(rng_word(0x105eULL, pkt.copy_id, n));
      if (r.next_double() >= radio_.link_delivery_prob) continue;
    }
    // all receivers of one broadcast share the transmission's copy id
    schedule(now_ + radio_.tx_time_us, HopDeliverEv{from_node, n, pkt, process, false});
  }
}

void Engine::emit_plan(NodeId node, const ForwardPlan& plan, const PacketCopy& pkt,
                       ArrivalClass cause, NodeId from, bool delegation_up) {
  PacketCopy out = child_copy(pkt, plan);
  if (plan.to_parent) {
    PacketCopy c = out;
    c.copy_id = next_copy_++;
    trace_send(node, from, cause, {*plan.to_parent}, false, c);
    send_unicast(node, *plan.to_parent, c, delegation_up);
  }
  for (NodeId t : plan.downward_unicasts) {
    PacketCopy c = out;
    c.copy_id = next_copy_++;
    trace_send(node, from, cause, {t}, false, c);
    send_unicast(node, t, c, false);
  }
  if (!plan.broadcast_processors.empty()) {
    PacketCopy c = out;
    c.copy_id = next_copy_++;
    trace_send(node, from, cause, plan.broadcast_processors, true, c);
    send_broadcast(node, plan.broadcast_processors, c);
  }
  for (NodeId t : plan.intercluster) {
    PacketCopy c = out;
    c.copy_id = next_copy_++;
    trace_send(node, from, cause, {t}, false, c);
    send_unicast(node, t, c, false);
  }
}

void Engine::on_app_send(const AppSendEv& ev) {
  NodeId src = ev.source;
  PacketCopy pkt;
  pkt.key = PacketKey{src, group_.id, ev.seq};
  pkt.src_rank = dodag_.rank_of(src);
  pkt.created_at = now_;
  pkt.copy_id = next_copy_++;
  sent_ += 1;
  for (NodeId m : group_.members)
    if (m != src) expected_ += 1;

  // ESMRF delegates an encapsulated copy upward and the source later relays
  // the root's downward copy into its own subtree, so only the bidirectional
  // protocols pre-mark the key at the source.
  if (protocol_ != Protocol::Esmrf) dd_[idx(src)].check_and_insert(pkt.key);
  deliver_local(src, pkt);

  if (src == kRootId) {
    if (protocol_ == Protocol::Recoup) {
      pkt.downward_only = true;
      ForwardPlan plan = route_root_sourced(view_, pkt);
      emit_plan(kRootId, plan, pkt, ArrivalClass::SelfOriginated, kNoNode);
    } else if (protocol_ == Protocol::Bmrf) {
      ForwardPlan plan = route_bmrf(view_, kRootId, kNoNode, ArrivalClass::SelfOriginated);
      emit_plan(kRootId, plan, pkt, ArrivalClass::SelfOriginated, kNoNode);
    } else {
      EsmrfPlan ep = route_esmrf(view_, kRootId, kNoNode, ArrivalClass::SelfOriginated, false);
      ForwardPlan plan;
      plan.downward_unicasts = ep.downward_unicasts;
      emit_plan(kRootId, plan, pkt, ArrivalClass::SelfOriginated, kNoNode);
    }
    return;
  }

  switch (protocol_) {
    case Protocol::Recoup: {
      ForwardPlan plan = route_recoup_node(view_, src, kNoNode, ArrivalClass::SelfOriginated,
                                           pkt, rng_word(0xa6cULL, src, pkt.copy_id));
      emit_plan(src, plan, pkt, ArrivalClass::SelfOriginated, kNoNode);
      break;
    }
    case Protocol::Bmrf: {
      ForwardPlan plan = route_bmrf(view_, src, kNoNode, ArrivalClass::SelfOriginated);
      emit_plan(src, plan, pkt, ArrivalClass::SelfOriginated, kNoNode);
      break;
    }
    case Protocol::Esmrf: {
      EsmrfPlan ep = route_esmrf(view_, src, kNoNode, ArrivalClass::SelfOriginated, false);
      ForwardPlan plan;
      plan.to_parent = ep.to_parent;
      // delegation copies bypass duplicate tracking, so a hop budget is the
      // only thing stopping them inside attacker-made parent cycles
      plan.hop_budget = static_cast<std::uint32_t>(topo_.size());
      emit_plan(src, plan, pkt, ArrivalClass::SelfOriginated, kNoNode, ep.delegation);
      break;
    }
  }
}

void Engine::root_arrival_recoup(NodeId sender, const PacketCopy& pkt) {
  ClusterId arrival = dodag_.cluster_of(sender);
  auto it = hold_.find(pkt.key);
  if (it != hold_.end()) {
    duplicates_ += 1;
    it->second.arrival_clusters.insert(arrival);
    SimTime rel = now_ - it->second.first_arrival;
    auto sess = alpha_.find({pkt.key.src, pkt.key.group});
    if (sess != alpha_.end() && sess->second.s.pending &&
        sess->second.pending_key == pkt.key) {
      sess->second.s.pending_last_rel_us = rel;
    }
    return;
  }

  deliver_local(kRootId, pkt);

  auto& sess = alpha_[{pkt.key.src, pkt.key.group}];
  if (!sess.initialized) {
    sess.s.alpha_us = knobs_.alpha_initial_us;
    sess.initialized = true;
  }
  if (sess.s.pending && sess.s.pending_expired) {
    sess.s.alpha_us =
        updated_alpha(sess.s.alpha_us, sess.s.pending_last_rel_us, sess.s.pending_hold_us);
    sess.s.pending = false;
  }

  SimTime hold = hold_duration(pkt.src_rank, radio_.tx_time_us, sess.s.alpha_us);
  RootHoldEntry entry;
  entry.buffered = pkt;
  entry.arrival_clusters.insert(arrival);
  entry.first_arrival = now_;
  entry.expiry = now_ + hold;
  hold_[pkt.key] = entry;
  hold_order_.push_back(pkt.key);
  if (knobs_.dd_capacity > 0 && hold_order_.size() > knobs_.dd_capacity) {
    hold_.erase(hold_order_.front());
    hold_order_.pop_front();
  }

  sess.s.pending = true;
  sess.s.pending_expired = false;
  sess.s.pending_hold_us = hold;
  sess.s.pending_last_rel_us = 0;
  sess.pending_key = pkt.key;

  schedule(now_ + hold, HoldExpiryEv{pkt.key});
}

void Engine::on_hold_expiry(const HoldExpiryEv& ev) {
  auto it = hold_.find(ev.key);
  if (it == hold_.end()) return;  // evicted under capacity pressure
  RootHoldEntry& entry = it->second;
  if (entry.forwarded) return;
  entry.forwarded = true;

  auto sess = alpha_.find({ev.key.src, ev.key.group});
  if (sess != alpha_.end() && sess->second.pending_key == ev.key)
    sess->second.s.pending_expired = true;

  ForwardPlan plan = route_recoup_root_expiry(view_, entry.arrival_clusters, entry.buffered);
  if (!plan.empty())
    emit_plan(kRootId, plan, entry.buffered, ArrivalClass::RootHold, kNoNode);
}

void Engine::on_hop_deliver(const HopDeliverEv& ev) {
  if (!ev.process) return;  // overheard broadcast
  NodeId node = ev.receiver;

  if (node == kRootId && protocol_ == Protocol::Recoup) {
    root_arrival_recoup(ev.sender, ev.pkt);
    return;
  }

  if (ev.delegation) {
    // encapsulated delegation copy: no local delivery or duplicate tracking
    // en route, only the hop to the root
    if (node == kRootId) {
      if (dd_[idx(node)].check_and_insert(ev.pkt.key)) {
        duplicates_ += 1;
        return;
      }
      deliver_local(node, ev.pkt);
      EsmrfPlan ep = route_esmrf(view_, node, ev.sender, ArrivalClass::FromChild, true);
      ForwardPlan plan;
      plan.downward_unicasts = ep.downward_unicasts;
      // decapsulation: the data copy starts fresh at the root, so its
      // dissemination may legitimately descend through the delegation child
      emit_plan(node, plan, ev.pkt, ArrivalClass::SelfOriginated, kNoNode);
      return;
    }
    const Behavior& b = behavior(node);
    if (blackhole_drops_forwarding(b)) return;
    if (selective_discard(b, rng_word(0xd15cULL, node, ev.pkt.copy_id))) return;
    if (ev.pkt.hop_budget == 0) return;  // stuck in a parent cycle
    EsmrfPlan ep = route_esmrf(view_, node, ev.sender, ArrivalClass::FromChild, true);
    ForwardPlan plan;
    plan.to_parent = ep.to_parent;
    plan.hop_budget = ev.pkt.hop_budget - 1;
    emit_plan(node, plan, ev.pkt, ArrivalClass::FromChild, ev.sender, ep.delegation);
    return;
  }

  if (dd_[idx(node)].check_and_insert(ev.pkt.key)) {
    duplicates_ += 1;
    return;
  }
  deliver_local(node, ev.pkt);

  const Behavior& b = behavior(node);
  if (node != kRootId) {
    if (blackhole_drops_forwarding(b)) return;
    if (selective_discard(b, rng_word(0xd15cULL, node, ev.pkt.copy_id))) return;
  }

  ArrivalClass arrival = classify_arrival(view_, node, ev.sender);
  switch (protocol_) {
    case Protocol::Recoup: {
      ForwardPlan plan = route_recoup_node(view_, node, ev.sender, arrival, ev.pkt,
                                           rng_word(0xa6cULL, node, ev.pkt.copy_id));
      emit_plan(node, plan, ev.pkt, arrival, ev.sender);
      break;
    }
    case Protocol::Bmrf: {
      ForwardPlan plan = route_bmrf(view_, node, ev.sender, arrival);
      emit_plan(node, plan, ev.pkt, arrival, ev.sender);
      break;
    }
    case Protocol::Esmrf: {
      EsmrfPlan ep = route_esmrf(view_, node, ev.sender, arrival, false);
      ForwardPlan plan;
      plan.to_parent = ep.to_parent;
      plan.downward_unicasts = ep.downward_unicasts;
      emit_plan(node, plan, ev.pkt, arrival, ev.sender, ep.delegation);
      break;
    }
  }
}

RunResult Engine::run() {
  setup();
  while (!queue_.empty()) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time;
    std::visit(
        [this](auto&& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, AppSendEv>)
            on_app_send(e);
          else if constexpr (std::is_same_v<T, HopDeliverEv>)
            on_hop_deliver(e);
          else
            on_hold_expiry(e);
        },
        ev.payload);
  }

  RunResult result;
  result.deliveries = deliveries_;
  result.trace = std::move(trace_);
  result.node_rank = dodag_.rank;
  result.node_cluster = dodag_.cluster;
  result.node_joined = dodag_.joined;
  result.members = group_.members;
  result.sources = sources_;
  for (std::size_t i = 0; i < topo_.size(); ++i)
    if (behaviors_[i].kind != BehaviorKind::Honest) result.attackers.push_back(topo_.id_at(i));
  result.end_time_us = now_;

  RunMetrics& m = result.metrics;
  m.pdr = compute_pdr(deliveries_, expected_);
  m.eed = compute_eed(deliveries_);
  m.energy = compute_energy(ledger_, m.pdr.delivered);
  m.tx_count = ledger_.total_tx();
  m.rx_count = ledger_.total_rx();
  m.duplicate_count = duplicates_;
  m.sent_packets = sent_;
  m.joined_count = 0;
  for (bool j : dodag_.joined)
    if (j) m.joined_count += 1;
  m.unreachable_count = static_cast<std::uint32_t>(dodag_.unreachable.size());
  m.node_tx = ledger_.tx_count;
  m.node_rx = ledger_.rx_count;
  return result;
}

}  // namespace

PdrResult compute_pdr(const std::vector<DeliveryRecord>& deliveries,
                      std::int64_t expected_deliveries) {
  PdrResult r;
  r.expected = expected_deliveries;
  for (const auto& d : deliveries)
    if (d.node != d.key.src) r.delivered += 1;
  if (expected_deliveries > 0) {
    r.defined = true;
    r.value = static_cast<double>(r.delivered) / static_cast<double>(expected_deliveries);
  }
  return r;
}

EedResult compute_eed(const std::vector<DeliveryRecord>& deliveries) {
  EedResult r;
  std::int64_t n = 0;
  std::int64_t total_us = 0;
  for (const auto& d : deliveries) {
    if (d.node == d.key.src) continue;
    total_us += d.latency_us;
    n += 1;
  }
  if (n > 0) {
    r.defined = true;
    r.mean_ms = static_cast<double>(total_us) / static_cast<double>(n) / 1000.0;
  }
  return r;
}

EnergyResult compute_energy(const EnergyLedger& ledger, std::int64_t delivered_count) {
  EnergyResult r;
  r.total_mj = static_cast<double>(ledger.total_energy_uj()) / 1000.0;
  if (delivered_count > 0) {
    r.ecp_defined = true;
    r.ecp_mj = r.total_mj / static_cast<double>(delivered_count);
  }
  return r;
}

RunResult run_simulation(const Topology& topo, const RadioConfig& radio,
                         const std::vector<Behavior>& behaviors,
                         const TrafficConfig& traffic, Protocol protocol,
                         const SimKnobs& knobs, std::uint64_t seed, bool want_trace) {
  Engine engine(topo, radio, behaviors, traffic, protocol, knobs, seed, want_trace);
  return engine.run();
}

std::string dump_trace(const std::vector<TraceRecord>& trace) {
  std::ostringstream os;
  os << "# time_us sender from cause kind receivers key budget visited flag\n";
  for (const auto& r : trace) {
    os << r.time_us << " " << r.sender << " ";
    if (r.from == kNoNode)
      os << "-";
    else
      os << r.from;
    os << " ";
    switch (r.cause) {
      case ArrivalClass::SelfOriginated: os << "origin"; break;
      case ArrivalClass::FromParent: os << "from-parent"; break;
      case ArrivalClass::FromChild: os << "from-child"; break;
      case ArrivalClass::FromForeign: os << "from-foreign"; break;
      case ArrivalClass::RootHold: os << "root-hold"; break;
    }
    os << (r.broadcast ? " bcast [" : " ucast [");
    for (std::size_t i = 0; i < r.receivers.size(); ++i)
      os << (i ? "," : "") << r.receivers[i];
    os << "] " << r.key.src << ":" << r.key.group << ":" << r.key.seq;
    os << " budget=" << r.hop_budget << " visited=[";
    for (std::size_t i = 0; i < r.visited.size(); ++i)
      os << (i ? "," : "") << r.visited[i];
    os << "] downward=" << (r.downward_only ? 1 : 0) << "\n";
  }
  return os.str();
}

}  // namespace recoup
