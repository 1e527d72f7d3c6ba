#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "recoup/dodag.hpp"
#include "recoup/fixture.hpp"
#include "recoup/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string output_path(const std::string& name) {
  const char* dir = std::getenv("RECOUP_OUT_DIR");
  if (!dir || !*dir || name.empty() || name == "-") return name;
  if (name.find('/') != std::string::npos) return name;  // already a path
  return std::string(dir) + "/" + name;
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(output_path(path));
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

struct CommonOpts {
  std::string config_file;
  std::vector<std::string> sets;  // key=value overrides
};

recoup::ScenarioConfig build_config(const CommonOpts& opts) {
  recoup::ScenarioConfig cfg;
  if (!opts.config_file.empty()) cfg = recoup::load_scenario(opts.config_file);
  for (const std::string& kv : opts.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw recoup::ConfigError("--set expects key=value, got '" + kv + "'");
    recoup::apply_scenario_key(cfg, kv.substr(0, eq), kv.substr(eq + 1), "--set");
  }
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_file, "scenario config file (key = value lines)");
  cmd->add_option("--set", opts.sets, "override a config key, e.g. --set nodes=51")
      ->take_all();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete-event simulator for RPL multicast protocols "
               "(RECOUP, BMRF, ESMRF)"};
  app.require_subcommand(1);

  // ---- run ----
  CommonOpts run_opts;
  std::string run_out;
  std::string run_trace_out;
  auto* run_cmd = app.add_subcommand("run", "run one scenario, one line per (protocol, seed)");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("-o,--out", run_out, "result file ('-' for stdout)");
  run_cmd->add_option("--trace-out", run_trace_out, "write the forwarding trace here");

  // ---- sweep ----
  CommonOpts sweep_opts;
  std::string sweep_axis = "sink_fraction";
  std::vector<double> sweep_values;
  std::string sweep_out;
  unsigned sweep_jobs = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one axis and aggregate mean/sd per cell");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--axis", sweep_axis, "sink_fraction|node_count|attacker_fraction");
  sweep_cmd->add_option("--values", sweep_values, "axis values")->required()->take_all();
  sweep_cmd->add_option("-o,--out", sweep_out, "table file ('-' for stdout)");
  sweep_cmd->add_option("-j,--jobs", sweep_jobs, "parallel runs (default: hardware)");

  // ---- verify-fixture ----
  std::string fix_topology, fix_expect;
  auto* fix_cmd = app.add_subcommand(
      "verify-fixture", "run single-packet cases on a fixture topology and diff expectations");
  fix_cmd->add_option("--topology", fix_topology, "fixture topology file")->required();
  fix_cmd->add_option("--expect", fix_expect, "expectation file")->required();

  // ---- dump-topology ----
  CommonOpts dump_opts;
  std::uint64_t dump_seed = 1;
  std::string dump_out, dump_dodag_out;
  auto* dump_cmd = app.add_subcommand("dump-topology",
                                      "generate (or load) a topology and write it out");
  add_common(dump_cmd, dump_opts);
  dump_cmd->add_option("--seed", dump_seed, "generation seed");
  dump_cmd->add_option("-o,--out", dump_out, "topology file ('-' for stdout)");
  dump_cmd->add_option("--dodag-out", dump_dodag_out, "also dump the formed DODAG here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      recoup::ScenarioConfig cfg = build_config(run_opts);
      std::string records;
      std::string traces;
      for (std::uint64_t seed : cfg.seeds) {
        bool want_trace = cfg.trace || !run_trace_out.empty();
        recoup::RunResult r = recoup::run_one(cfg, cfg.protocol, seed, want_trace);
        records += recoup::result_record(cfg, cfg.protocol, seed, r.metrics, r.attackers) + "\n";
        if (want_trace) {
          traces += "# seed " + std::to_string(seed) + "\n";
          traces += recoup::dump_trace(r.trace);
        }
      }
      write_or_print(run_out.empty() ? "-" : run_out, records);
      if (!run_trace_out.empty()) write_or_print(run_trace_out, traces);
      return kExitOk;
    }
    if (*sweep_cmd) {
      recoup::ScenarioConfig cfg = build_config(sweep_opts);
      recoup::SweepSpec spec;
      spec.axis = recoup::parse_sweep_axis(sweep_axis);
      spec.values = sweep_values;
      spec.jobs = sweep_jobs;
      std::cerr << recoup::sweep_range_warnings(spec);
      auto cells = recoup::run_sweep(cfg, spec);
      write_or_print(sweep_out.empty() ? "-" : sweep_out,
                     recoup::sweep_table(cells, spec.axis));
      return kExitOk;
    }
    if (*fix_cmd) {
      auto spec = recoup::load_fixture_expectations(fix_expect);
      auto report = recoup::verify_fixture(fix_topology, spec);
      std::cout << report.text;
      return report.pass ? kExitOk : kExitMismatch;
    }
    if (*dump_cmd) {
      recoup::ScenarioConfig cfg = build_config(dump_opts);
      recoup::Topology topo =
          cfg.topology_file.empty()
              ? recoup::generate_topology(cfg.node_count, cfg.area_width, cfg.area_height,
                                          dump_seed)
              : recoup::load_topology(cfg.topology_file);
      write_or_print(dump_out.empty() ? "-" : dump_out, recoup::dump_topology(topo));
      if (!dump_dodag_out.empty()) {
        recoup::Dodag d = recoup::form_dodag(topo, cfg.radio);
        write_or_print(dump_dodag_out, recoup::dump_dodag(d));
      }
      return kExitOk;
    }
  } catch (const recoup::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
