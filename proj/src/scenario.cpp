#include "recoup/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace recoup {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<NodeId> parse_node_list(const std::string& s) {
  std::vector<NodeId> out;
  for (auto& tok : split_list(s)) out.push_back(static_cast<NodeId>(std::stoul(tok)));
  return out;
}

std::int64_t mj_to_uj(double mj) { return std::llround(mj * 1000.0); }
SimTime ms_to_us(double ms) { return std::llround(ms * 1000.0); }

bool parse_bool(const std::string& v, const std::string& origin, const std::string& key) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(origin + ": bad boolean for '" + key + "': " + v);
}

}  // namespace

void apply_scenario_key(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& origin) {
  try {
    if (key == "schema") {
      if (std::stoi(value) != 1) throw ConfigError(origin + ": unsupported schema " + value);
    } else if (key == "node_count" || key == "nodes") {
      cfg.node_count = static_cast<std::uint32_t>(std::stoul(value));
    } else if (key == "area") {
      std::istringstream ls(value);
      char x = 0;
      if (!(ls >> cfg.area_width)) throw ConfigError(origin + ": bad area");
      ls >> x;
      if (x != 'x' || !(ls >> cfg.area_height)) throw ConfigError(origin + ": bad area");
    } else if (key == "tx_range_m") {
      cfg.radio.tx_range_m = std::stod(value);
    } else if (key == "tx_time_ms") {
      cfg.radio.tx_time_us = ms_to_us(std::stod(value));
    } else if (key == "tx_energy_mj") {
      cfg.radio.tx_energy_uj = mj_to_uj(std::stod(value));
    } else if (key == "rx_energy_mj") {
      cfg.radio.rx_energy_uj = mj_to_uj(std::stod(value));
    } else if (key == "link_delivery_prob") {
      cfg.radio.link_delivery_prob = std::stod(value);
    } else if (key == "protocol") {
      cfg.protocol = parse_protocol(value);
    } else if (key == "sources") {
      cfg.traffic.source_count = static_cast<std::uint32_t>(std::stoul(value));
    } else if (key == "sink_fraction") {
      cfg.traffic.sink_fraction = std::stod(value);
    } else if (key == "rate_pps") {
      cfg.traffic.rate_pps = std::stod(value);
    } else if (key == "packets_per_source") {
      cfg.traffic.packets_per_source = static_cast<std::uint32_t>(std::stoul(value));
    } else if (key == "source_nodes") {
      cfg.traffic.explicit_sources = parse_node_list(value);
    } else if (key == "group_members") {
      cfg.traffic.explicit_members = parse_node_list(value);
    } else if (key == "attacker_kind") {
      cfg.attacker.kind = parse_behavior(value);
    } else if (key == "attacker_fraction") {
      cfg.attacker.fraction = std::stod(value);
    } else if (key == "attacker_nodes") {
      cfg.attacker.explicit_nodes = parse_node_list(value);
    } else if (key == "rank_delta") {
      cfg.attacker.rank_delta = static_cast<std::uint32_t>(std::stoul(value));
    } else if (key == "discard_prob") {
      cfg.attacker.discard_prob = std::stod(value);
    } else if (key == "ofm_threshold") {
      cfg.knobs.ofm_threshold = static_cast<std::uint32_t>(std::stoul(value));
    } else if (key == "alpha_initial_ms") {
      cfg.knobs.alpha_initial_us = ms_to_us(std::stod(value));
    } else if (key == "dd_capacity") {
      cfg.knobs.dd_capacity = std::stoul(value);
    } else if (key == "random_intercluster") {
      cfg.knobs.random_intercluster_pick = parse_bool(value, origin, key);
    } else if (key == "seeds") {
      cfg.seeds.clear();
      std::uint64_t n = std::stoull(value);
      for (std::uint64_t s = 1; s <= n; ++s) cfg.seeds.push_back(s);
    } else if (key == "seed") {
      cfg.seeds = {std::stoull(value)};
    } else if (key == "seed_list") {
      cfg.seeds.clear();
      for (auto& t : split_list(value)) cfg.seeds.push_back(std::stoull(t));
    } else if (key == "trace") {
      cfg.trace = parse_bool(value, origin, key);
    } else if (key == "topology_file") {
      cfg.topology_file = value;
    } else {
      throw ConfigError(origin + ": unknown config key '" + key + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(origin + ": bad value for '" + key + "': " + value);
  }
}

ScenarioConfig parse_scenario(std::istream& in, const std::string& origin) {
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    std::string where = origin + ":" + std::to_string(lineno);
    // skip blank lines
    bool blank = true;
    for (char c : line)
      if (!isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    auto trim = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t");
      std::size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    apply_scenario_key(cfg, key, value, where);
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_scenario(in, path);
}

std::string scenario_echo(const ScenarioConfig& cfg, Protocol protocol, std::uint64_t seed) {
  std::ostringstream os;
  os << "schema=1";
  os << " protocol=" << protocol_name(protocol);
  os << " seed=" << seed;
  os << " nodes=" << cfg.node_count;
  os << " area=" << fmt_double(cfg.area_width) << "x" << fmt_double(cfg.area_height);
  os << " tx_range_m=" << fmt_double(cfg.radio.tx_range_m);
  os << " tx_time_ms=" << fmt_double(static_cast<double>(cfg.radio.tx_time_us) / 1000.0);
  os << " tx_energy_mj=" << fmt_double(static_cast<double>(cfg.radio.tx_energy_uj) / 1000.0);
  os << " rx_energy_mj=" << fmt_double(static_cast<double>(cfg.radio.rx_energy_uj) / 1000.0);
  os << " link_delivery_prob=" << fmt_double(cfg.radio.link_delivery_prob);
  os << " sources=" << cfg.traffic.source_count;
  os << " sink_fraction=" << fmt_double(cfg.traffic.sink_fraction);
  os << " rate_pps=" << fmt_double(cfg.traffic.rate_pps);
  os << " packets_per_source=" << cfg.traffic.packets_per_source;
  os << " attacker_kind=" << behavior_name(cfg.attacker.kind);
  os << " attacker_fraction=" << fmt_double(cfg.attacker.fraction);
  os << " rank_delta=" << cfg.attacker.rank_delta;
  os << " discard_prob=" << fmt_double(cfg.attacker.discard_prob);
  os << " ofm_threshold=" << cfg.knobs.ofm_threshold;
  os << " alpha_initial_ms=" << fmt_double(static_cast<double>(cfg.knobs.alpha_initial_us) / 1000.0);
  os << " dd_capacity=" << cfg.knobs.dd_capacity;
  if (!cfg.topology_file.empty()) os << " topology_file=" << cfg.topology_file;
  if (!cfg.traffic.explicit_sources.empty()) {
    os << " source_nodes=";
    for (std::size_t i = 0; i < cfg.traffic.explicit_sources.size(); ++i)
      os << (i ? "," : "") << cfg.traffic.explicit_sources[i];
  }
  if (!cfg.traffic.explicit_members.empty()) {
    os << " group_members=";
    for (std::size_t i = 0; i < cfg.traffic.explicit_members.size(); ++i)
      os << (i ? "," : "") << cfg.traffic.explicit_members[i];
  }
  if (!cfg.attacker.explicit_nodes.empty()) {
    os << " attacker_nodes=";
    for (std::size_t i = 0; i < cfg.attacker.explicit_nodes.size(); ++i)
      os << (i ? "," : "") << cfg.attacker.explicit_nodes[i];
  }
  return os.str();
}

std::string result_record(const ScenarioConfig& cfg, Protocol protocol, std::uint64_t seed,
                          const RunMetrics& m, const std::vector<NodeId>& attackers) {
  // echo the resolved roster in the canonical position so sampled and pinned
  // runs of the same scenario produce identical records
  ScenarioConfig echoed = cfg;
  if (!attackers.empty() && echoed.attacker.explicit_nodes.empty())
    echoed.attacker.explicit_nodes = attackers;
  std::ostringstream os;
  os << "result " << scenario_echo(echoed, protocol, seed);
  os << " joined=" << m.joined_count;
  os << " unreachable=" << m.unreachable_count;
  os << " sent=" << m.sent_packets;
  os << " expected=" << m.pdr.expected;
  os << " delivered=" << m.pdr.delivered;
  os << " pdr=" << (m.pdr.defined ? fmt_double(m.pdr.value) : "absent");
  os << " eed_ms=" << (m.eed.defined ? fmt_double(m.eed.mean_ms) : "absent");
  os << " tx_count=" << m.tx_count;
  os << " rx_count=" << m.rx_count;
  os << " duplicates=" << m.duplicate_count;
  os << " energy_total_mj=" << fmt_double(m.energy.total_mj);
  os << " energy_per_delivery_mj="
     << (m.energy.ecp_defined ? fmt_double(m.energy.ecp_mj) : "absent");
  return os.str();
}

RunResult run_one(const ScenarioConfig& cfg, Protocol protocol, std::uint64_t seed,
                  bool want_trace) {
  Topology topo = cfg.topology_file.empty()
                      ? generate_topology(cfg.node_count, cfg.area_width, cfg.area_height, seed)
                      : load_topology(cfg.topology_file);
  auto behaviors = place_attackers(topo, cfg.attacker, seed);
  return run_simulation(topo, cfg.radio, behaviors, cfg.traffic, protocol, cfg.knobs, seed,
                        want_trace || cfg.trace);
}

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "sink_fraction") return SweepAxis::SinkFraction;
  if (s == "node_count" || s == "nodes") return SweepAxis::NodeCount;
  if (s == "attacker_fraction") return SweepAxis::AttackerFraction;
  throw ConfigError("unknown sweep axis '" + s +
                    "' (expected sink_fraction|node_count|attacker_fraction)");
}

const char* sweep_axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::SinkFraction: return "sink_fraction";
    case SweepAxis::NodeCount: return "node_count";
    case SweepAxis::AttackerFraction: return "attacker_fraction";
  }
  return "?";
}

namespace {

struct Accum {
  std::vector<double> vals;
  void add(double v) { vals.push_back(v); }
  double mean() const {
    if (vals.empty()) return 0.0;
    double s = 0.0;
    for (double v : vals) s += v;
    return s / static_cast<double>(vals.size());
  }
  double sd() const {
    if (vals.size() < 2) return 0.0;
    double m = mean(), s = 0.0;
    for (double v : vals) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(vals.size() - 1));
  }
};

ScenarioConfig with_axis_value(const ScenarioConfig& base, SweepAxis axis, double v) {
  ScenarioConfig cfg = base;
  switch (axis) {
    case SweepAxis::SinkFraction:
      cfg.traffic.sink_fraction = v;
      break;
    case SweepAxis::NodeCount:
      cfg.node_count = static_cast<std::uint32_t>(v);
      break;
    case SweepAxis::AttackerFraction:
      if (cfg.attacker.kind == BehaviorKind::Honest)
        throw ConfigError("attacker_fraction sweep needs attacker_kind set");
      cfg.attacker.fraction = v;
      break;
  }
  return cfg;
}

}  // namespace

std::string sweep_range_warnings(const SweepSpec& sweep) {
  // reference evaluation ranges; anything else runs, with a note
  double lo = 0, hi = 0;
  switch (sweep.axis) {
    case SweepAxis::SinkFraction: lo = 0.2; hi = 0.8; break;
    case SweepAxis::NodeCount: lo = 51; hi = 201; break;
    case SweepAxis::AttackerFraction: lo = 0.1; hi = 0.4; break;
  }
  std::string out;
  for (double v : sweep.values) {
    if (v < lo || v > hi) {
      out += "warning: " + std::string(sweep_axis_name(sweep.axis)) + " value " +
             fmt_double(v) + " is outside the usual range [" + fmt_double(lo) + ", " +
             fmt_double(hi) + "]\n";
    }
  }
  return out;
}

std::vector<SweepCell> run_sweep(const ScenarioConfig& base, const SweepSpec& sweep) {
  if (sweep.values.empty()) throw ConfigError("sweep value list is empty");
  for (double v : sweep.values) (void)with_axis_value(base, sweep.axis, v);  // validate now
  struct Task {
    std::size_t value_idx, proto_idx, seed_idx;
  };
  std::vector<Task> tasks;
  for (std::size_t v = 0; v < sweep.values.size(); ++v)
    for (std::size_t p = 0; p < sweep.protocols.size(); ++p)
      for (std::size_t s = 0; s < base.seeds.size(); ++s) tasks.push_back({v, p, s});

  std::vector<RunMetrics> metrics(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  unsigned jobs = sweep.jobs ? sweep.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<std::size_t>(jobs, tasks.size());

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      try {
        ScenarioConfig cfg = with_axis_value(base, sweep.axis, sweep.values[t.value_idx]);
        RunResult r = run_one(cfg, sweep.protocols[t.proto_idx], base.seeds[t.seed_idx]);
        metrics[i] = r.metrics;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (!errors[i].empty()) throw std::runtime_error("sweep run failed: " + errors[i]);

  std::vector<SweepCell> cells;
  for (std::size_t v = 0; v < sweep.values.size(); ++v) {
    for (std::size_t p = 0; p < sweep.protocols.size(); ++p) {
      Accum pdr, eed, ecp, energy, tx, dup;
      std::size_t n = 0;
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].value_idx != v || tasks[i].proto_idx != p) continue;
        const RunMetrics& m = metrics[i];
        n += 1;
        if (m.pdr.defined) pdr.add(m.pdr.value);
        if (m.eed.defined) eed.add(m.eed.mean_ms);
        if (m.energy.ecp_defined) ecp.add(m.energy.ecp_mj);
        energy.add(m.energy.total_mj);
        tx.add(static_cast<double>(m.tx_count));
        dup.add(static_cast<double>(m.duplicate_count));
      }
      SweepCell c;
      c.axis_value = sweep.values[v];
      c.protocol = sweep.protocols[p];
      c.seed_count = n;
      c.pdr_mean = pdr.mean(); c.pdr_sd = pdr.sd();
      c.eed_mean_ms = eed.mean(); c.eed_sd_ms = eed.sd();
      c.ecp_mean_mj = ecp.mean(); c.ecp_sd_mj = ecp.sd();
      c.energy_mean_mj = energy.mean(); c.energy_sd_mj = energy.sd();
      c.tx_mean = tx.mean(); c.tx_sd = tx.sd();
      c.dup_mean = dup.mean(); c.dup_sd = dup.sd();
      cells.push_back(c);
    }
  }
  std::sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
    if (a.axis_value != b.axis_value) return a.axis_value < b.axis_value;
    return static_cast<int>(a.protocol) < static_cast<int>(b.protocol);
  });
  return cells;
}

std::string sweep_table(const std::vector<SweepCell>& cells, SweepAxis axis) {
  std::ostringstream os;
  os << sweep_axis_name(axis)
     << "\tprotocol\tseeds\tpdr_mean\tpdr_sd\teed_mean_ms\teed_sd_ms\tecp_mean_mj\tecp_sd_mj"
        "\tenergy_mean_mj\tenergy_sd_mj\ttx_mean\ttx_sd\tdup_mean\tdup_sd\n";
  for (const auto& c : cells) {
    os << fmt_double(c.axis_value) << "\t" << protocol_name(c.protocol) << "\t" << c.seed_count
       << "\t" << fmt_double(c.pdr_mean) << "\t" << fmt_double(c.pdr_sd) << "\t"
       << fmt_double(c.eed_mean_ms) << "\t" << fmt_double(c.eed_sd_ms) << "\t"
       << fmt_double(c.ecp_mean_mj) << "\t" << fmt_double(c.ecp_sd_mj) << "\t"
       << fmt_double(c.energy_mean_mj) << "\t" << fmt_double(c.energy_sd_mj) << "\t"
       << fmt_double(c.tx_mean) << "\t" << fmt_double(c.tx_sd) << "\t" << fmt_double(c.dup_mean)
       << "\t" << fmt_double(c.dup_sd) << "\n";
  }
  return os.str();
}

}  // namespace recoup
