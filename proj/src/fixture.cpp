#include "recoup/fixture.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace recoup {

namespace {

std::vector<NodeId> parse_ids(const std::string& v) {
  std::vector<NodeId> out;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(static_cast<NodeId>(std::stoul(cur)));
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(static_cast<NodeId>(std::stoul(cur)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

FixtureSpec parse_fixture_expectations(std::istream& in, const std::string& origin) {
  FixtureSpec spec;
  FixtureCase* cur = nullptr;
  std::string line;
  int lineno = 0;
  auto need_case = [&]() -> FixtureCase& {
    if (!cur) throw ConfigError(origin + ":" + std::to_string(lineno) + ": no open case");
    return *cur;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t");
      std::size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "schema") continue;
    if (key == "tx_time_ms") {
      spec.tx_time_ms = std::stod(value);
    } else if (key == "case") {
      spec.cases.emplace_back();
      cur = &spec.cases.back();
      cur->name = value;
    } else if (key == "source") {
      need_case().source = static_cast<NodeId>(std::stoul(value));
    } else if (key == "group") {
      need_case().group = parse_ids(value);
    } else if (key == "attacker_nodes") {
      need_case().attacker_nodes = parse_ids(value);
    } else if (key == "attacker_kind") {
      need_case().attacker_kind = parse_behavior(value);
    } else if (key == "recoup_tx") {
      need_case().expected_tx[Protocol::Recoup] = std::stoll(value);
    } else if (key == "bmrf_tx") {
      need_case().expected_tx[Protocol::Bmrf] = std::stoll(value);
    } else if (key == "esmrf_tx") {
      need_case().expected_tx[Protocol::Esmrf] = std::stoll(value);
    } else if (key == "recoup_deliveries") {
      need_case().expected_deliv[Protocol::Recoup] = parse_ids(value);
    } else if (key == "bmrf_deliveries") {
      need_case().expected_deliv[Protocol::Bmrf] = parse_ids(value);
    } else if (key == "esmrf_deliveries") {
      need_case().expected_deliv[Protocol::Esmrf] = parse_ids(value);
    } else {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (spec.cases.empty()) throw ConfigError(origin + ": no cases");
  return spec;
}

FixtureSpec load_fixture_expectations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open expectation file: " + path);
  return parse_fixture_expectations(in, path);
}

RunResult run_fixture_case(const std::string& topology_path, const FixtureCase& c,
                           Protocol protocol, double tx_time_ms, bool want_trace) {
  ScenarioConfig cfg;
  cfg.topology_file = topology_path;
  cfg.radio.tx_time_us = static_cast<SimTime>(tx_time_ms * 1000.0);
  cfg.traffic.explicit_sources = {c.source};
  cfg.traffic.explicit_members = c.group;
  cfg.traffic.source_count = 1;
  cfg.traffic.packets_per_source = 1;
  cfg.attacker.kind = c.attacker_kind;
  cfg.attacker.explicit_nodes = c.attacker_nodes;
  return run_one(cfg, protocol, 1, want_trace);
}

FixtureReport verify_fixture(const std::string& topology_path, const FixtureSpec& spec) {
  FixtureReport report;
  std::ostringstream os;
  for (const FixtureCase& c : spec.cases) {
    for (Protocol p : {Protocol::Recoup, Protocol::Bmrf, Protocol::Esmrf}) {
      bool has_tx = c.expected_tx.count(p) != 0;
      bool has_del = c.expected_deliv.count(p) != 0;
      if (!has_tx && !has_del) continue;
      RunResult r = run_fixture_case(topology_path, c, p, spec.tx_time_ms);
      FixtureCheck chk;
      chk.case_name = c.name;
      chk.protocol = p;
      chk.tx = r.metrics.tx_count;
      std::vector<NodeId> delivered;
      for (const auto& d : r.deliveries)
        if (d.node != d.key.src) delivered.push_back(d.node);
      std::sort(delivered.begin(), delivered.end());
      chk.delivered = delivered;
      if (has_tx) {
        chk.want_tx = c.expected_tx.at(p);
        if (*chk.want_tx != chk.tx) chk.pass = false;
      }
      if (has_del) {
        chk.want_delivered = c.expected_deliv.at(p);
        if (*chk.want_delivered != delivered) chk.pass = false;
      }
      os << (chk.pass ? "ok   " : "FAIL ") << c.name << " " << protocol_name(p);
      os << " tx=" << chk.tx;
      if (chk.want_tx) os << " (want " << *chk.want_tx << ")";
      os << " delivered=[";
      for (std::size_t i = 0; i < delivered.size(); ++i) os << (i ? "," : "") << delivered[i];
      os << "]";
      if (chk.want_delivered) {
        os << " (want [";
        for (std::size_t i = 0; i < chk.want_delivered->size(); ++i)
          os << (i ? "," : "") << (*chk.want_delivered)[i];
        os << "])";
      }
      os << "\n";
      if (!chk.pass) report.pass = false;
      report.checks.push_back(std::move(chk));
    }
  }
  os << (report.pass ? "fixture: all checks passed\n" : "fixture: CHECKS FAILED\n");
  report.text = os.str();
  return report;
}

}  // namespace recoup
