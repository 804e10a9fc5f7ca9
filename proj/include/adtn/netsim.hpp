#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adtn/config.hpp"
#include "adtn/keyring.hpp"
#include "adtn/mobility.hpp"
#include "adtn/node.hpp"
#include "adtn/wire.hpp"

namespace adtn {

enum class EmissionKind { cover, real, garbage, spam };

const char* to_string(EmissionKind kind);

/// Ground-truth record of one emission. `kind`, `message` and `group` are
/// for scoring only; adversaries see tick, emitter, position and frame.
struct EmissionEvent {
  std::uint64_t seq = 0;
  Tick tick = 0;
  LinkId emitter = 0;
  Position position;
  Frame frame;  // empty when the run does not keep frames
  std::vector<NodeId> receivers;
  EmissionKind kind = EmissionKind::cover;
  std::optional<MessageId> message;
  std::optional<std::size_t> group;  // index into the scenario's group list
};

struct MessageTruth {
  MessageId id;
  LinkId origin = 0;
  Tick injected = 0;
  std::size_t size = 0;
  bool spam = false;
};

struct DeliveryRecord {
  NodeId node = 0;
  MessageId id;
  Tick tick = 0;
  bool originator = false;
};

struct JamRegion {
  Position center;
  double radius = 0;
  Tick start = 0;
  Tick end = 0;  // exclusive

  bool suppresses(Position receiver, Tick tick, const ArenaConfig& arena) const;
};

/// Phase offset of every node, drawn from the "phases" stream.
std::vector<Tick> draw_phases(const ScenarioConfig& config);

/// Per node, the scenario group indices of its keyring in trial order.
std::vector<std::vector<std::size_t>> node_group_indices(const ScenarioConfig& config);

/// Deterministic discrete-event world. Each step() runs one tick:
/// mobility, traffic injection, emissions, reception, periodic forgetting.
class World {
 public:
  World(const ScenarioConfig& config, bool keep_frames);

  std::vector<EmissionEvent> step();

  Tick tick() const { return tick_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::vector<Node>& nodes() { return nodes_; }
  const std::vector<Position>& positions() const { return mobility_.positions(); }
  const std::vector<Tick>& phases() const { return phases_; }
  const std::vector<MessageTruth>& messages() const { return messages_; }
  const std::vector<DeliveryRecord>& deliveries() const { return deliveries_; }
  const std::vector<JamRegion>& jammers() const { return jammers_; }
  const std::vector<TrustGroup>& groups() const { return groups_; }
  /// (adversary name, link id) for garbage emitters and spammers.
  const std::vector<std::pair<std::string, LinkId>>& adversary_links() const { return adversary_links_; }

 private:
  struct ActiveEmitter {
    std::size_t adversary = 0;
    LinkId link = 0;
    RandomStream rng;
    std::optional<GroupKey> key;
    std::optional<std::size_t> group;
    Bytes payload;
    double range = 0;
    bool announced = false;
  };

  std::size_t emissions_this_tick(const AdversaryConfig& a) const;

  const ScenarioConfig& config_;
  WireFormat format_;
  bool keep_frames_;
  Tick tick_ = 0;
  std::uint64_t next_seq_ = 0;
  Mobility mobility_;
  std::vector<TrustGroup> groups_;
  std::vector<std::vector<std::size_t>> node_groups_;
  std::vector<Tick> phases_;
  std::vector<Node> nodes_;
  std::vector<ActiveEmitter> emitters_;
  std::vector<JamRegion> jammers_;
  std::vector<std::pair<std::string, LinkId>> adversary_links_;
  std::vector<std::size_t> traffic_order_;
  std::size_t next_traffic_ = 0;
  std::vector<MessageTruth> messages_;
  std::vector<DeliveryRecord> deliveries_;
};

struct RunOptions {
  bool keep_frames = false;
};

struct RunReport {
  std::string run_id;
  ScenarioConfig config;
  std::vector<EmissionEvent> events;
  std::vector<MessageTruth> messages;
  std::vector<DeliveryRecord> deliveries;
  std::vector<NodeStats> node_stats;
  std::vector<Tick> phases;
  std::vector<TrustGroup> groups;
  std::vector<std::vector<std::size_t>> node_groups;
  std::vector<std::pair<std::string, LinkId>> adversary_links;
  bool frames_kept = false;
};

/// Runs config.ticks ticks. Frames are kept when requested, when the
/// config asks for frame traces, or when a passive adversary needs them.
RunReport run_scenario(const ScenarioConfig& config, RunOptions options = {});

}  // namespace adtn
