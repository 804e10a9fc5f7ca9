#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "adtn/config.hpp"
#include "adtn/keyring.hpp"
#include "adtn/node.hpp"
#include "adtn/wire.hpp"

namespace adtn::testing {

using nlohmann::json;

inline GroupKey make_key(const std::string& id, std::uint64_t salt = 0) {
  GroupKey k;
  k.group_id = id;
  RandomStream rng(0xC0FFEE + salt, "test-key:" + id);
  rng.fill(k.key);
  return k;
}

inline TrustGroup make_group(const std::string& id, std::vector<NodeId> members) {
  TrustGroup g;
  g.group_id = id;
  g.members = std::move(members);
  g.key = make_key(id);
  return g;
}

inline Bytes bytes_of(const std::string& s) { return Bytes(s.begin(), s.end()); }

/// Static nodes on a line, `spacing` meters apart, in one arena.
inline json line_scenario(std::size_t n, double spacing, double range) {
  json positions = json::array();
  for (std::size_t i = 0; i < n; ++i) positions.push_back({10.0 + spacing * i, 50.0});
  return json{{"seed", 7},
              {"ticks", 200},
              {"arena", {{"width", 20.0 + spacing * n}, {"height", 100.0}}},
              {"radio_range", range},
              {"nodes", {{"count", n}, {"placement", "explicit"}, {"positions", positions}}},
              {"mobility", {{"model", "static"}}},
              {"node", {{"tx_period", 1}}}};
}

inline ScenarioConfig parse(const json& doc) { return parse_config(doc); }

}  // namespace adtn::testing
