#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "recoup/scenario.hpp"

namespace recoup {

// One single-packet check on a fixture topology: a source, a group, optional
// attackers, and the frozen expected transmission count and delivery set per
// protocol.
struct FixtureCase {
  std::string name;
  NodeId source = kNoNode;
  std::vector<NodeId> group;
  std::vector<NodeId> attacker_nodes;
  BehaviorKind attacker_kind = BehaviorKind::Honest;
  std::map<Protocol, std::int64_t> expected_tx;           // absent: unchecked
  std::map<Protocol, std::vector<NodeId>> expected_deliv; // absent: unchecked
};

struct FixtureSpec {
  double tx_time_ms = 8.0;
  std::vector<FixtureCase> cases;
};

FixtureSpec parse_fixture_expectations(std::istream& in, const std::string& origin);
FixtureSpec load_fixture_expectations(const std::string& path);

struct FixtureCheck {
  std::string case_name;
  Protocol protocol = Protocol::Recoup;
  std::int64_t tx = 0;
  std::optional<std::int64_t> want_tx;
  std::vector<NodeId> delivered;
  std::optional<std::vector<NodeId>> want_delivered;
  bool pass = true;
};

struct FixtureReport {
  std::vector<FixtureCheck> checks;
  bool pass = true;
  std::string text;  // one line per check plus a verdict
};

// Runs every case of the expectation file against the fixture topology and
// diffs transmission counts and delivery sets.
FixtureReport verify_fixture(const std::string& topology_path,
                             const FixtureSpec& spec);

// Single-packet run used by fixture checks; also handy in tests.
RunResult run_fixture_case(const std::string& topology_path, const FixtureCase& c,
                           Protocol protocol, double tx_time_ms, bool want_trace = false);

}  // namespace recoup
