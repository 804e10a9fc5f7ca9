#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "adtn/keyring.hpp"
#include "adtn/random.hpp"
#include "adtn/types.hpp"
#include "adtn/wire.hpp"

namespace adtn {

enum class SchedulerPolicy { fifo, least_popular };

/// Trial-decryption order. `most_recent_first` moves the last key that
/// opened a frame to the front; it never changes what goes on the wire.
enum class KeyOrder { declaration, most_recent_first };

struct SourceCachePolicy {
  bool enabled = false;
  std::uint32_t fail_threshold = 3;  // consecutive failures before a source is skipped
  Tick expiry = 500;                 // idle ticks before an entry is forgotten
};

struct NodePolicies {
  Tick tx_period = 10;
  Tick freshness_age = 2000;
  std::uint32_t overheard_cap = 20;
  std::uint32_t retransmit_cap = 10;
  SchedulerPolicy scheduler = SchedulerPolicy::fifo;
  SourceCachePolicy source_cache;
  Tick seen_forget = 4000;
  std::size_t pool_cap = 256;
  KeyOrder key_order = KeyOrder::declaration;

  /// Throws ConfigError naming the offending `node.*` field.
  void validate() const;
};

struct SeenRecord {
  MessageId id;
  Tick first_seen = 0;
  std::uint32_t overheard_count = 0;
  std::uint32_t retransmit_count = 0;
  bool delivered_up = false;
};

/// Plaintext pool entry; encryption happens at emission time so every
/// emission gets a fresh nonce.
struct PoolEntry {
  MessageId id;
  std::shared_ptr<const Bytes> payload;
  std::size_t group = 0;  // index into the owner's keyring
};

enum class ReceiveOutcome {
  discarded_unreadable,
  discarded_stale,
  duplicate,
  delivered,      // delivered upward and enqueued for every owned group
  skipped_source  // source cache said not to try; no decryption attempted
};

struct ReceiveResult {
  ReceiveOutcome outcome = ReceiveOutcome::discarded_unreadable;
  std::uint32_t decrypt_attempts = 0;
  std::optional<MessageId> id;
  std::optional<std::size_t> group;  // keyring index that opened the frame
};

struct Transmission {
  Frame frame;
  std::optional<MessageId> id;       // nullopt for cover
  std::optional<std::size_t> group;  // keyring index used
};

struct Delivery {
  MessageId id;
  Tick tick = 0;
  Bytes payload;
};

struct NodeStats {
  std::uint64_t emissions = 0;
  std::uint64_t cover_emissions = 0;
  std::uint64_t receptions = 0;
  std::uint64_t readable_receptions = 0;
  std::uint64_t decrypt_attempts = 0;
  std::uint64_t skipped_frames = 0;
  std::uint64_t deliveries = 0;
  std::uint64_t stale_drops = 0;
  std::uint64_t overflow_drops = 0;
  std::optional<Tick> first_stale_tick;
  std::optional<Tick> first_overflow_tick;
};

/// True iff the record has aged past freshness_age, has been overheard
/// overheard_cap times, or has been retransmitted retransmit_cap times.
bool is_stale(const SeenRecord& record, Tick now, const NodePolicies& policies);

struct SourceEntry {
  std::uint32_t consecutive_failures = 0;
  bool whitelisted = false;
  Tick last_heard = 0;
};

/// Per-node protocol engine. Single-threaded; the simulator owns the clock
/// and calls on_transmit_slot once per slot.
class Node {
 public:
  Node(NodeId id, Keyring keyring, NodePolicies policies, WireFormat format, RandomStream rng,
       Tick phase = 0);

  NodeId id() const { return id_; }
  Tick phase() const { return phase_; }
  bool is_slot(Tick now) const { return now % policies_.tx_period == phase_; }

  /// Originates a message. Returns false if the node already knows it.
  bool submit_message(Bytes payload, Tick now);

  ReceiveResult on_frame_received(const Frame& frame, LinkId source, Tick now);

  /// Always returns exactly one frame: a real pool entry or cover.
  Transmission on_transmit_slot(Tick now);

  bool source_cache_should_try(LinkId source, Tick now);
  void source_cache_update(LinkId source, bool success, Tick now);

  void forget_old_seen(Tick now);

  const Keyring& keyring() const { return keyring_; }
  const NodePolicies& policies() const { return policies_; }
  const NodeStats& stats() const { return stats_; }
  const std::deque<PoolEntry>& pool() const { return pool_; }
  const std::map<MessageId, SeenRecord>& seen() const { return seen_; }
  const std::map<LinkId, SourceEntry>& source_cache() const { return source_cache_; }
  const std::vector<std::size_t>& trial_order() const { return trial_order_; }
  const SeenRecord* find_seen(const MessageId& id) const;

  /// Deliveries since the last call, oldest first.
  std::vector<Delivery> take_deliveries();

 private:
  void enqueue_all_groups(const MessageId& id, const std::shared_ptr<const Bytes>& payload,
                          Tick now);
  void evict_most_popular(Tick now);
  std::size_t select_entry() const;
  void note_stale(Tick now);
  std::uint64_t popularity(const MessageId& id) const;

  NodeId id_;
  Keyring keyring_;
  NodePolicies policies_;
  WireFormat format_;
  RandomStream rng_;
  Tick phase_;

  std::map<MessageId, SeenRecord> seen_;
  std::set<MessageId> delivered_ids_;  // survives forget_old_seen
  std::deque<PoolEntry> pool_;
  std::map<LinkId, SourceEntry> source_cache_;
  std::vector<std::size_t> trial_order_;
  std::vector<Delivery> pending_deliveries_;
  NodeStats stats_;
};

}  // namespace adtn
