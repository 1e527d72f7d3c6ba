#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "recoup/engine.hpp"

namespace recoup {

// Full run description. Defaults mirror the evaluation setup: 101 nodes on
// 200x200 m, 25 m range, 8 sources at 0.5 pkt/s with 500 packets each, 40%
// sinks, mixed-mode threshold 3, 30 seeds.
struct ScenarioConfig {
  int schema = 1;
  std::uint32_t node_count = 101;
  double area_width = 200.0;
  double area_height = 200.0;
  RadioConfig radio;
  Protocol protocol = Protocol::Recoup;
  TrafficConfig traffic;
  AttackerConfig attacker;
  SimKnobs knobs;
  std::vector<std::uint64_t> seeds;  // default 1..30
  bool trace = false;
  std::string topology_file;  // fixed topology instead of generation

  ScenarioConfig() { for (std::uint64_t s = 1; s <= 30; ++s) seeds.push_back(s); }
};

// Line-oriented "key = value" dialect; '#' starts a comment. Unknown keys are
// errors (reported with the key name).
ScenarioConfig parse_scenario(std::istream& in, const std::string& origin);
ScenarioConfig load_scenario(const std::string& path);
void apply_scenario_key(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& origin);

// Canonical one-line config echo; re-parsing it reproduces the run exactly.
std::string scenario_echo(const ScenarioConfig& cfg, Protocol protocol, std::uint64_t seed);

// One result line per (protocol, seed): config echo plus metrics. A sampled
// attacker roster is echoed back as attacker_nodes so the record re-executes
// the exact same run.
std::string result_record(const ScenarioConfig& cfg, Protocol protocol, std::uint64_t seed,
                          const RunMetrics& m, const std::vector<NodeId>& attackers = {});

RunResult run_one(const ScenarioConfig& cfg, Protocol protocol, std::uint64_t seed,
                  bool want_trace = false);

// ---- sweeps ----------------------------------------------------------------

enum class SweepAxis { SinkFraction, NodeCount, AttackerFraction };

struct SweepSpec {
  SweepAxis axis = SweepAxis::SinkFraction;
  std::vector<double> values;
  std::vector<Protocol> protocols{Protocol::Recoup, Protocol::Bmrf, Protocol::Esmrf};
  unsigned jobs = 0;  // 0: hardware concurrency
};

SweepAxis parse_sweep_axis(const std::string& s);
const char* sweep_axis_name(SweepAxis a);

// One warning line per value outside the usual evaluation range; empty when
// everything is in range. Arbitrary values still run.
std::string sweep_range_warnings(const SweepSpec& sweep);

struct SweepCell {
  double axis_value = 0.0;
  Protocol protocol = Protocol::Recoup;
  std::size_t seed_count = 0;
  double pdr_mean = 0.0, pdr_sd = 0.0;
  double eed_mean_ms = 0.0, eed_sd_ms = 0.0;
  double ecp_mean_mj = 0.0, ecp_sd_mj = 0.0;
  double energy_mean_mj = 0.0, energy_sd_mj = 0.0;
  double tx_mean = 0.0, tx_sd = 0.0;
  double dup_mean = 0.0, dup_sd = 0.0;
};

// Runs |values| x |protocols| x |seeds| simulations (seeds paired across
// protocols) and aggregates mean and sample standard deviation per cell.
// Cells come back sorted by (axis value, protocol) regardless of completion
// order.
std::vector<SweepCell> run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep);

std::string sweep_table(const std::vector<SweepCell>& cells, SweepAxis axis);

}  // namespace recoup
