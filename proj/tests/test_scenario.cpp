#include <sstream>

#include "doctest.h"
#include "recoup/scenario.hpp"

using namespace recoup;

TEST_CASE("config parsing: defaults, overrides, errors with field paths") {
  std::istringstream in(
      "# example\n"
      "nodes = 51\n"
      "area = 200 x 200\n"
      "protocol = bmrf\n"
      "sink_fraction = 0.2\n"
      "seeds = 3\n");
  ScenarioConfig cfg = parse_scenario(in, "example.conf");
  CHECK(cfg.node_count == 51);
  CHECK(cfg.protocol == Protocol::Bmrf);
  CHECK(cfg.traffic.sink_fraction == doctest::Approx(0.2));
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
  // untouched fields keep the documented defaults
  CHECK(cfg.radio.tx_range_m == doctest::Approx(25.0));
  CHECK(cfg.radio.tx_time_us == 8000);
  CHECK(cfg.traffic.source_count == 8);
  CHECK(cfg.traffic.packets_per_source == 500);
  CHECK(cfg.knobs.ofm_threshold == 3);
  CHECK(cfg.knobs.dd_capacity == 100);

  std::istringstream bad("frobnicate = 7\n");
  CHECK_THROWS_WITH_AS(parse_scenario(bad, "x.conf"), doctest::Contains("frobnicate"),
                       ConfigError);
  std::istringstream badval("nodes = many\n");
  CHECK_THROWS_WITH_AS(parse_scenario(badval, "x.conf"), doctest::Contains("nodes"),
                       ConfigError);
}

TEST_CASE("zero-flag defaults carry the reference parameter set") {
  ScenarioConfig cfg;
  CHECK(cfg.node_count == 101);
  CHECK(cfg.area_width == doctest::Approx(200.0));
  CHECK(cfg.traffic.source_count == 8);
  CHECK(cfg.traffic.rate_pps == doctest::Approx(0.5));
  CHECK(cfg.traffic.packets_per_source == 500);
  CHECK(cfg.traffic.sink_fraction == doctest::Approx(0.4));
  CHECK(cfg.knobs.ofm_threshold == 3);
  CHECK(cfg.seeds.size() == 30);
}

TEST_CASE("result records re-parse and reproduce bit-exactly") {
  ScenarioConfig cfg;
  cfg.node_count = 40;
  cfg.area_width = cfg.area_height = 120;
  cfg.traffic.packets_per_source = 4;
  cfg.traffic.source_count = 3;
  RunResult r = run_one(cfg, Protocol::Recoup, 9);
  std::string record = result_record(cfg, Protocol::Recoup, 9, r.metrics);

  // the config echo is space-separated key=value tokens
  ScenarioConfig back;
  std::istringstream tokens(record);
  std::string tok;
  tokens >> tok;  // "result"
  while (tokens >> tok) {
    auto eq = tok.find('=');
    REQUIRE(eq != std::string::npos);
    std::string key = tok.substr(0, eq);
    // metric fields come after the echo; stop at the first one
    if (key == "joined") break;
    apply_scenario_key(back, key, tok.substr(eq + 1), "record");
  }
  REQUIRE(back.seeds == std::vector<std::uint64_t>{9});
  RunResult again = run_one(back, back.protocol, back.seeds[0]);
  CHECK(result_record(back, back.protocol, back.seeds[0], again.metrics) == record);
}

TEST_CASE("sampled attacker rosters are echoed and re-execute exactly") {
  ScenarioConfig cfg;
  cfg.node_count = 50;
  cfg.area_width = cfg.area_height = 120;
  cfg.traffic.packets_per_source = 3;
  cfg.traffic.source_count = 3;
  cfg.attacker.kind = BehaviorKind::Blackhole;
  cfg.attacker.fraction = 0.2;
  RunResult r = run_one(cfg, Protocol::Recoup, 5);
  REQUIRE(r.attackers.size() == 10);
  std::string record = result_record(cfg, Protocol::Recoup, 5, r.metrics, r.attackers);
  CHECK(record.find("attacker_nodes=") != std::string::npos);

  ScenarioConfig back;
  std::istringstream tokens(record);
  std::string tok;
  tokens >> tok;
  while (tokens >> tok) {
    auto eq = tok.find('=');
    std::string key = tok.substr(0, eq);
    if (key == "joined") break;
    apply_scenario_key(back, key, tok.substr(eq + 1), "record");
  }
  RunResult again = run_one(back, back.protocol, back.seeds[0]);
  CHECK(result_record(back, back.protocol, back.seeds[0], again.metrics, again.attackers) ==
        record);
}

TEST_CASE("sweep shapes: one cell per axis value and protocol") {
  ScenarioConfig cfg;
  cfg.node_count = 30;
  cfg.area_width = cfg.area_height = 100;
  cfg.traffic.source_count = 2;
  cfg.traffic.packets_per_source = 2;
  cfg.seeds = {1, 2};

  SweepSpec spec;
  spec.axis = SweepAxis::NodeCount;
  spec.values = {51, 101};
  auto cells = run_sweep(cfg, spec);
  REQUIRE(cells.size() == 6);  // 2 values x 3 protocols
  for (const auto& c : cells) CHECK(c.seed_count == 2);
  CHECK(cells[0].axis_value == doctest::Approx(51));
  CHECK(cells[3].axis_value == doctest::Approx(101));
  std::string table = sweep_table(cells, spec.axis);
  CHECK(table.find("node_count\tprotocol") == 0);

  SweepSpec empty;
  empty.values = {};
  CHECK_THROWS_AS(run_sweep(cfg, empty), ConfigError);

  SweepSpec attack;
  attack.axis = SweepAxis::AttackerFraction;
  attack.values = {0.2};
  CHECK_THROWS_AS(run_sweep(cfg, attack), ConfigError);  // no attacker kind set
}

TEST_CASE("sweep values outside the usual ranges warn but run") {
  SweepSpec spec;
  spec.axis = SweepAxis::SinkFraction;
  spec.values = {0.4, 0.95};
  std::string w = sweep_range_warnings(spec);
  CHECK(w.find("0.95") != std::string::npos);
  spec.values = {0.2, 0.8};
  CHECK(sweep_range_warnings(spec).empty());
}

TEST_CASE("per-link delivery probability knob") {
  ScenarioConfig cfg;
  cfg.node_count = 30;
  cfg.area_width = cfg.area_height = 90;
  cfg.traffic.packets_per_source = 5;
  cfg.traffic.source_count = 3;
  cfg.seeds = {4};

  ScenarioConfig lossless = cfg;
  RunResult full = run_one(lossless, Protocol::Bmrf, 4);
  REQUIRE(full.metrics.pdr.defined);
  CHECK(full.metrics.pdr.value == doctest::Approx(1.0));

  ScenarioConfig dead = cfg;
  dead.radio.link_delivery_prob = 0.0;
  RunResult none = run_one(dead, Protocol::Bmrf, 4);
  CHECK(none.metrics.pdr.value == doctest::Approx(0.0));

  ScenarioConfig lossy = cfg;
  lossy.radio.link_delivery_prob = 0.5;
  RunResult half = run_one(lossy, Protocol::Bmrf, 4);
  CHECK(half.metrics.pdr.value < 1.0);
  CHECK(half.metrics.pdr.value > 0.0);
}

TEST_CASE("seeded-random inter-cluster pick stays deterministic") {
  ScenarioConfig cfg;
  cfg.node_count = 40;
  cfg.area_width = cfg.area_height = 110;
  cfg.traffic.packets_per_source = 3;
  cfg.knobs.random_intercluster_pick = true;
  RunResult a = run_one(cfg, Protocol::Recoup, 6);
  RunResult b = run_one(cfg, Protocol::Recoup, 6);
  CHECK(result_record(cfg, Protocol::Recoup, 6, a.metrics) ==
        result_record(cfg, Protocol::Recoup, 6, b.metrics));
  CHECK(a.metrics.pdr.value == doctest::Approx(1.0));
}

TEST_CASE("trace dump carries the forwarding fields") {
  ScenarioConfig cfg;
  cfg.topology_file = "fixtures/refnet_topology.txt";
  cfg.traffic.explicit_sources = {31};
  cfg.traffic.explicit_members = {4, 16, 21, 24, 30, 38};
  cfg.traffic.packets_per_source = 1;
  RunResult r = run_one(cfg, Protocol::Recoup, 1, true);
  std::string text = dump_trace(r.trace);
  CHECK(text.find("origin") != std::string::npos);
  CHECK(text.find("from-foreign") != std::string::npos);
  CHECK(text.find("root-hold") != std::string::npos);
  CHECK(text.find("budget=") != std::string::npos);
  CHECK(text.find("visited=") != std::string::npos);
}
