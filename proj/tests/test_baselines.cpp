#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "recoup/fixture.hpp"

using namespace recoup;

namespace {

// root(0) - 1 - 2 - 3 - 4 vertical chain; 5 is 1's second child
Topology chain_with_branch() {
  Topology t(200, 200);
  t.add_node(0, {100, 100});
  t.add_node(1, {100, 122});
  t.add_node(2, {100, 144});
  t.add_node(3, {100, 166});
  t.add_node(4, {100, 188});
  t.add_node(5, {78, 130});  // child of 1
  return t;
}

RunResult run_on(const Topology& topo, Protocol proto, std::vector<NodeId> sources,
                 std::vector<NodeId> members, std::uint32_t packets = 1) {
  RadioConfig radio;
  std::vector<Behavior> behaviors(topo.size());
  TrafficConfig traffic;
  traffic.explicit_sources = std::move(sources);
  traffic.explicit_members = std::move(members);
  traffic.packets_per_source = packets;
  return run_simulation(topo, radio, behaviors, traffic, proto, SimKnobs{}, 1, true);
}

std::set<NodeId> delivered_set(const RunResult& r) {
  std::set<NodeId> out;
  for (const auto& d : r.deliveries)
    if (d.node != d.key.src) out.insert(d.node);
  return out;
}

}  // namespace

TEST_CASE("esmrf climbs to the root even for a subscriber next door") {
  // source rank 4 (node 4), single subscriber is the source's sibling-side
  // relative 5 (rank 2): the packet still climbs 4 hops and descends 2
  Topology t = chain_with_branch();
  RunResult r = run_on(t, Protocol::Esmrf, {4}, {5});
  CHECK(delivered_set(r) == std::set<NodeId>{5});
  // 4 up (4-3, 3-2, 2-1, 1-0) + root->1, 1->5
  CHECK(r.metrics.tx_count == 6);
}

TEST_CASE("esmrf delegation makes no deliveries on the way up") {
  // subscriber 2 sits on the upward path from source 4
  Topology t = chain_with_branch();
  RunResult r = run_on(t, Protocol::Esmrf, {4}, {2});
  CHECK(delivered_set(r) == std::set<NodeId>{2});
  SimTime latency = 0;
  for (const auto& d : r.deliveries)
    if (d.node == 2) latency = d.latency_us;
  // up 4 hops, then down 2 hops to node 2: six transmission times, not two
  CHECK(latency == 6 * 8000);
}

TEST_CASE("bmrf serves a shared parent's subtree without the root round-trip") {
  Topology t = chain_with_branch();
  RunResult r = run_on(t, Protocol::Bmrf, {2}, {5});
  CHECK(delivered_set(r) == std::set<NodeId>{5});
  SimTime latency = 0;
  for (const auto& d : r.deliveries)
    if (d.node == 5) latency = d.latency_us;
  CHECK(latency == 2 * 8000);  // 2 -> 1 -> 5
}

TEST_CASE("bmrf upward legs may deliver, esmrf ones never do") {
  Topology t = chain_with_branch();
  RunResult bmrf = run_on(t, Protocol::Bmrf, {4}, {2});
  RunResult esmrf = run_on(t, Protocol::Esmrf, {4}, {2});
  SimTime lat_b = 0, lat_e = 0;
  for (const auto& d : bmrf.deliveries)
    if (d.node == 2) lat_b = d.latency_us;
  for (const auto& d : esmrf.deliveries)
    if (d.node == 2) lat_e = d.latency_us;
  CHECK(lat_b == 2 * 8000);  // served as the packet climbs through it
  CHECK(lat_e == 6 * 8000);  // only on the way back down
}

TEST_CASE("root-sourced dissemination matches between recoup and bmrf") {
  Topology t = load_topology("fixtures/refnet_topology.txt");
  RunResult a = run_on(t, Protocol::Recoup, {0}, {4, 16, 21, 24, 30, 38});
  RunResult b = run_on(t, Protocol::Bmrf, {0}, {4, 16, 21, 24, 30, 38});
  CHECK(a.metrics.tx_count == b.metrics.tx_count);
  CHECK(delivered_set(a) == delivered_set(b));
  CHECK(delivered_set(a) == std::set<NodeId>{4, 16, 21, 24, 30, 38});
}

TEST_CASE("refnet frozen expectations hold for all protocols and cases") {
  FixtureSpec spec = load_fixture_expectations("fixtures/refnet_expected.txt");
  FixtureReport report = verify_fixture("fixtures/refnet_topology.txt", spec);
  INFO(report.text);
  CHECK(report.pass);
}

TEST_CASE("refnet per-sink latencies: horizontal shortcuts beat the root path") {
  Topology t = load_topology("fixtures/refnet_topology.txt");
  RunResult r = run_on(t, Protocol::Recoup, {31}, {4, 16, 21, 24, 30, 38});
  std::map<NodeId, SimTime> lat;
  for (const auto& d : r.deliveries) lat[d.node] = d.latency_us;
  CHECK(lat[30] == 2 * 8000);  // served on the upward leg
  CHECK(lat[38] == 3 * 8000);  // three hops through the neighbor cluster
  CHECK(lat[4] == 3 * 8000);   // relayed onward into the third cluster
  // clusters the flood never reached wait out the root hold (4 hops + 32 ms)
  CHECK(lat[16] == 9 * 8000);
  CHECK(lat[21] == 10 * 8000);
  CHECK(lat[24] == 10 * 8000);
  CHECK(r.metrics.eed.mean_ms == doctest::Approx(296.0 / 6.0));
}

TEST_CASE("protocol names round-trip") {
  for (Protocol p : {Protocol::Recoup, Protocol::Bmrf, Protocol::Esmrf})
    CHECK(parse_protocol(protocol_name(p)) == p);
  CHECK_THROWS_AS(parse_protocol("smrf"), ConfigError);
}
