#include <cmath>
#include <set>

#include "doctest.h"
#include "recoup/fixture.hpp"

using namespace recoup;

namespace {

std::set<NodeId> delivered_set(const RunResult& r) {
  std::set<NodeId> out;
  for (const auto& d : r.deliveries)
    if (d.node != d.key.src) out.insert(d.node);
  return out;
}

}  // namespace

TEST_CASE("attacker placement: count, determinism, root exclusion") {
  Topology t = generate_topology(100, 200, 200, 3);
  AttackerConfig cfg;
  cfg.kind = BehaviorKind::Blackhole;
  cfg.fraction = 0.10;
  auto a = place_attackers(t, cfg, 7);
  auto b = place_attackers(t, cfg, 7);
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].kind == b[i].kind);
    if (a[i].kind != BehaviorKind::Honest) ++count;
  }
  CHECK(count == 10);  // exactly 10% of 100
  CHECK(a[t.index_of(kRootId)].kind == BehaviorKind::Honest);

  auto c = place_attackers(t, cfg, 8);
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].kind != c[i].kind) same = false;
  CHECK_FALSE(same);  // different seed, different roster

  cfg.fraction = 0.0;
  for (const Behavior& x : place_attackers(t, cfg, 7))
    CHECK(x.kind == BehaviorKind::Honest);
  cfg.fraction = 1.5;
  CHECK_THROWS_AS(place_attackers(t, cfg, 7), ConfigError);
  cfg.fraction = 0.1;
  cfg.explicit_nodes = {kRootId};
  CHECK_THROWS_AS(place_attackers(t, cfg, 7), ConfigError);
}

TEST_CASE("rank advertisement floors at one") {
  CHECK(advertised_rank(3, 2) == 1);
  CHECK(advertised_rank(1, 2) == 1);  // floor
  CHECK(advertised_rank(5, 0) == 5);  // honest
  CHECK(advertised_rank(7, 2) == 5);
}

TEST_CASE("rank attacker attracts neighbors during formation") {
  // root - a(1) - b(2) - c(3), plus victim v in range of both a and c.
  // honestly v picks a (rank 1); with c lying two ranks down it still picks a;
  // with c advertising rank 1 and a out of range, v picks c.
  Topology t(300, 300);
  t.add_node(0, {150, 150});
  t.add_node(1, {150, 172});   // rank 1
  t.add_node(2, {150, 194});   // rank 2
  t.add_node(3, {150, 216});   // rank 3, the liar
  t.add_node(4, {150, 238});   // victim, only 3 in range
  RadioConfig radio;

  Dodag honest = form_dodag(t, radio);
  CHECK(honest.rank_of(4) == 4);

  std::vector<std::uint32_t> deltas(t.size(), 0);
  deltas[t.index_of(3)] = 2;  // node 3 advertises max(1, 3-2) = 1
  Dodag attacked = form_dodag(t, radio, deltas);
  CHECK(attacked.parent_of(4) == 3);
  CHECK(attacked.rank_of(4) == 2);  // believes the lie
  // delta 0 keeps formation identical to honest
  Dodag zero = form_dodag(t, radio, std::vector<std::uint32_t>(t.size(), 0));
  CHECK(dump_dodag(zero) == dump_dodag(honest));
}

TEST_CASE("blackhole on the only path starves the subscriber under the baselines") {
  // root - 1 - 2(blackhole) - 3(source), subscriber 4 behind the root
  Topology t(300, 300);
  t.add_node(0, {150, 150});
  t.add_node(1, {150, 172});
  t.add_node(2, {150, 194});
  t.add_node(3, {150, 216});
  t.add_node(4, {150, 128});  // rank 1 on the other side
  RadioConfig radio;
  std::vector<Behavior> behaviors(t.size());
  behaviors[t.index_of(2)].kind = BehaviorKind::Blackhole;
  TrafficConfig traffic;
  traffic.explicit_sources = {3};
  traffic.explicit_members = {4};
  traffic.packets_per_source = 4;

  for (Protocol p : {Protocol::Esmrf, Protocol::Bmrf}) {
    RunResult r = run_simulation(t, radio, behaviors, traffic, p, SimKnobs{}, 1, false);
    CHECK(r.metrics.pdr.defined);
    CHECK(r.metrics.pdr.value == doctest::Approx(0.0));
  }
}

TEST_CASE("blackhole leaf with no descendants changes nothing") {
  Topology t = load_topology("fixtures/refnet_topology.txt");
  RadioConfig radio;
  TrafficConfig traffic;
  traffic.explicit_sources = {31};
  traffic.explicit_members = {4, 16, 21, 24, 30, 38};
  traffic.packets_per_source = 1;
  std::vector<Behavior> honest(t.size());
  std::vector<Behavior> bh(t.size());
  bh[t.index_of(32)].kind = BehaviorKind::Blackhole;  // leaf below the source
  RunResult a = run_simulation(t, radio, honest, traffic, Protocol::Recoup, SimKnobs{}, 1, false);
  RunResult b = run_simulation(t, radio, bh, traffic, Protocol::Recoup, SimKnobs{}, 1, false);
  CHECK(a.metrics.pdr.value == b.metrics.pdr.value);
  CHECK(a.metrics.tx_count == b.metrics.tx_count);
}

TEST_CASE("refnet with node 29 blackholed: recoup serves everyone but 30") {
  FixtureCase c;
  c.name = "blackhole29";
  c.source = 31;
  c.group = {4, 16, 21, 24, 30, 38};
  c.attacker_kind = BehaviorKind::Blackhole;
  c.attacker_nodes = {29};
  RunResult recoup = run_fixture_case("fixtures/refnet_topology.txt", c, Protocol::Recoup, 8.0);
  CHECK(delivered_set(recoup) == std::set<NodeId>{4, 16, 21, 24, 38});
  RunResult bmrf = run_fixture_case("fixtures/refnet_topology.txt", c, Protocol::Bmrf, 8.0);
  CHECK(delivered_set(bmrf).empty());
  RunResult esmrf = run_fixture_case("fixtures/refnet_topology.txt", c, Protocol::Esmrf, 8.0);
  CHECK(delivered_set(esmrf).empty());
}

TEST_CASE("selective discard: degenerate probabilities") {
  Behavior b;
  b.kind = BehaviorKind::RankAttacker;
  b.discard_prob = 0.0;
  for (std::uint64_t w = 0; w < 50; ++w) CHECK_FALSE(selective_discard(b, w));
  b.discard_prob = 1.0;
  for (std::uint64_t w = 0; w < 50; ++w) CHECK(selective_discard(b, w));
}

TEST_CASE("selective discard: half of 500 forwarded packets within 3 sigma") {
  // root - 1(rank attacker, delta 0 to keep the tree) - 2(source); sink 3 under 1
  Topology t(300, 300);
  t.add_node(0, {150, 150});
  t.add_node(1, {150, 172});
  t.add_node(2, {150, 194});
  t.add_node(3, {128, 178});  // second child of 1
  RadioConfig radio;
  std::vector<Behavior> behaviors(t.size());
  behaviors[t.index_of(1)] = Behavior{BehaviorKind::RankAttacker, 0, 0.5};
  TrafficConfig traffic;
  traffic.explicit_sources = {2};
  traffic.explicit_members = {3};
  traffic.packets_per_source = 500;
  traffic.rate_pps = 50.0;
  RunResult r = run_simulation(t, radio, behaviors, traffic, Protocol::Bmrf, SimKnobs{}, 5, false);
  // every delivery to 3 got through node 1's coin flip
  double sigma = std::sqrt(500 * 0.25);
  CHECK(std::abs(static_cast<double>(r.metrics.pdr.delivered) - 250.0) <= 3.0 * sigma);
}

TEST_CASE("adjacent rank attackers forming a parent cycle cannot hang a run") {
  // ids chosen so the lowest-id tie-break wires 5 -> 3 -> 5 once both lie
  Topology t(300, 300);
  t.add_node(0, {150, 150});
  t.add_node(9, {150, 172});   // honest head
  t.add_node(5, {150, 194});   // rank attacker
  t.add_node(3, {150, 216});   // rank attacker
  t.add_node(7, {150, 238});   // source, caught behind the cycle
  t.add_node(11, {128, 172});  // sink on the healthy side
  RadioConfig radio;
  std::vector<Behavior> behaviors(t.size());
  behaviors[t.index_of(5)] = Behavior{BehaviorKind::RankAttacker, 2, 0.0};
  behaviors[t.index_of(3)] = Behavior{BehaviorKind::RankAttacker, 2, 0.0};

  auto deltas = advertised_deltas(t, behaviors);
  Dodag d = form_dodag(t, radio, deltas);
  REQUIRE(d.parent_of(5) == 3);  // the cycle this test is about
  REQUIRE(d.parent_of(3) == 5);
  CHECK(d.cluster_of(7) == kNoCluster);  // orphaned behind it

  TrafficConfig traffic;
  traffic.explicit_sources = {7};
  traffic.explicit_members = {11};
  traffic.packets_per_source = 2;
  for (Protocol p : {Protocol::Esmrf, Protocol::Bmrf}) {
    RunResult r = run_simulation(t, radio, behaviors, traffic, p, SimKnobs{}, 1, false);
    CHECK(r.metrics.pdr.value == doctest::Approx(0.0));  // severed by the cycle
    CHECK(r.end_time_us > 0);  // and the run still drains
  }
  // the cluster protocol escapes sideways: the orphaned region still has an
  // inter-cluster link into the healthy tree
  RunResult rec = run_simulation(t, radio, behaviors, traffic, Protocol::Recoup, SimKnobs{}, 1,
                                 false);
  CHECK(rec.metrics.pdr.value == doctest::Approx(1.0));
}

TEST_CASE("fraction zero reproduces attack-free runs bit-exactly") {
  ScenarioConfig cfg;
  cfg.node_count = 60;
  cfg.area_width = cfg.area_height = 140;
  cfg.traffic.packets_per_source = 5;
  cfg.seeds = {1};
  ScenarioConfig with_zero = cfg;
  with_zero.attacker.kind = BehaviorKind::Blackhole;
  with_zero.attacker.fraction = 0.0;
  for (Protocol p : {Protocol::Recoup, Protocol::Bmrf, Protocol::Esmrf}) {
    RunResult a = run_one(cfg, p, 1);
    RunResult b = run_one(with_zero, p, 1);
    CHECK(result_record(cfg, p, 1, a.metrics) == result_record(cfg, p, 1, b.metrics));
  }
}
