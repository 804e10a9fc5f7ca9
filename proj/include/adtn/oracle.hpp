#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adtn/config.hpp"
#include "adtn/netsim.hpp"

namespace adtn {

/// Everything the contact oracle looks at. No keys, frames or pools.
struct OracleInput {
  std::vector<std::vector<Position>> positions;  // [tick][node]
  ArenaConfig arena;
  double radio_range = 0;
  Tick tx_period = 1;
  std::vector<Tick> phases;
  std::vector<std::vector<NodeId>> group_members;
  std::vector<std::vector<std::size_t>> node_groups;  // per node, declaration order
  NodeId origin = 0;
  Tick injected = 0;
};

/// Earliest tick each node can hold the message, nullopt if never.
///
/// Sweeps the time-expanded contact graph forward from the injection. A
/// holder crosses a contact only on its own emission slots; on its j-th
/// slot after acquiring the message it speaks in group
/// node_groups[j mod k], reaching in-range members of that group. A node
/// that acquires at tick t first speaks at a slot after t; the originator
/// may speak at its injection tick.
std::vector<std::optional<Tick>> contact_oracle(const OracleInput& input);

/// Builds oracle input from a scenario with exactly one traffic entry.
OracleInput make_oracle_input(const ScenarioConfig& config);

struct OracleComparison {
  bool valid = true;
  std::string invalid_reason;
  std::vector<std::optional<Tick>> oracle;
  std::vector<std::optional<Tick>> protocol;
  std::vector<NodeId> mismatches;

  bool agrees() const { return valid && mismatches.empty(); }
};

/// Runs the oracle and the full protocol. Flags the scenario as invalid
/// (instead of reporting mismatches) when the protocol run left the regime
/// the oracle models: more than one message, non-fifo scheduling, source
/// cache, jamming or spam, or any staleness or pool overflow before the
/// last oracle arrival.
OracleComparison compare_with_oracle(const ScenarioConfig& config);

}  // namespace adtn
