#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "adtn/keyring.hpp"
#include "adtn/node.hpp"
#include "adtn/types.hpp"

namespace adtn {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Position {
  double x = 0;
  double y = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

struct Waypoint {
  Tick tick = 0;
  double x = 0;
  double y = 0;
};

struct ArenaConfig {
  double width = 1000;
  double height = 1000;
  bool torus = false;
};

enum class Placement { random, explicit_positions };
enum class MobilityModel { static_positions, random_waypoint, trace };

struct NodesConfig {
  std::size_t count = 10;
  Placement placement = Placement::random;
  std::vector<Position> positions;
};

/// Speeds in meters per tick, pause in ticks.
struct MobilityConfig {
  MobilityModel model = MobilityModel::static_positions;
  double speed_min = 1;
  double speed_max = 5;
  Tick pause = 0;
  std::vector<std::vector<Waypoint>> traces;  // one timeline per node
};

struct GroupConfig {
  std::string id;
  std::vector<NodeId> members;
  std::optional<std::array<std::uint8_t, kKeyLen>> key;  // derived from seed when absent
};

/// Consecutive chunks of `size` nodes; neighbouring chunks share `overlap`
/// nodes, which act as bridges.
struct AutoGroups {
  std::size_t size = 5;
  std::size_t overlap = 1;
};

struct TrafficEntry {
  Tick tick = 0;
  NodeId node = 0;
  std::optional<std::string> payload;  // literal; otherwise `size` seeded random octets
  std::size_t size = 0;
};

struct TrafficGenerator {
  std::size_t messages = 0;
  Tick start = 0;
  Tick end = 0;  // exclusive; 0 means scenario end
  std::size_t size = 64;
};

enum class AdversaryType { passive, garbage, jammer, spammer };

struct ScopeConfig {
  bool global = true;
  double x = 0;
  double y = 0;
  double radius = 0;
  std::vector<Waypoint> trajectory;  // optional; moves the disk centre
};

struct AdversaryConfig {
  std::string name;
  AdversaryType type = AdversaryType::passive;
  ScopeConfig scope;              // passive
  std::vector<std::string> keys;  // passive: compromised group ids, "*" for all
  double rate = 1.0;              // garbage/spammer: frames per tick
  double x = 0;                   // garbage/spammer/jammer position
  double y = 0;
  double radius = 0;              // jammer region; emitters use radio_range when 0
  Tick start = 0;
  Tick end = -1;                  // exclusive; -1 means scenario end
  std::string group;              // spammer
  std::string payload;            // spammer
};

struct OutputConfig {
  bool trace_frames = false;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  Tick ticks = 1000;
  std::size_t frame_size = kDefaultFrameSize;
  double tick_seconds = 0.1;  // labelling only
  ArenaConfig arena;
  double radio_range = 100;
  NodesConfig nodes;
  MobilityConfig mobility;
  std::vector<GroupConfig> groups;
  NodePolicies node;
  std::vector<TrafficEntry> traffic;
  std::vector<AdversaryConfig> adversaries;
  OutputConfig output;
  Tick forget_interval = 64;

  Tick adversary_end(const AdversaryConfig& a) const { return a.end < 0 ? ticks : a.end; }
};

/// Reads YAML (default) or JSON (".json" extension) into a JSON tree.
nlohmann::json load_config_document(const std::string& path);

/// Applies "a.b.c=value". The value is parsed as JSON when possible and
/// kept as a string otherwise. Throws ConfigError on a malformed spec.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Fills defaults, expands generators, validates. Throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json& doc);

/// Fully resolved form. parse_config(to_json(c)) reproduces c exactly.
nlohmann::json to_json(const ScenarioConfig& config);

/// Stable identifier of a resolved config (hex prefix of its SHA-256).
std::string run_id(const ScenarioConfig& config);

/// Group keys after seed derivation, in declaration order.
std::vector<TrustGroup> resolve_groups(const ScenarioConfig& config);

/// Payload octets for traffic entry `index` of the resolved traffic list.
Bytes traffic_payload(const ScenarioConfig& config, std::size_t index);

Bytes spammer_payload(const ScenarioConfig& config, std::size_t adversary_index);

}  // namespace adtn
