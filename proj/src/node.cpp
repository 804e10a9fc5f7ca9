#include "adtn/node.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace adtn {

void NodePolicies::validate() const {
  if (tx_period <= 0) throw ConfigError("node.tx_period", "must be positive");
  if (freshness_age <= 0) throw ConfigError("node.freshness_age", "must be positive");
  if (overheard_cap == 0) throw ConfigError("node.overheard_cap", "must be positive");
  if (retransmit_cap == 0) throw ConfigError("node.retransmit_cap", "must be positive");
  if (seen_forget <= 0) throw ConfigError("node.seen_forget", "must be positive");
  if (seen_forget < freshness_age) {
    throw ConfigError("node.seen_forget", "must be >= node.freshness_age");
  }
  if (pool_cap == 0) throw ConfigError("node.pool_cap", "must be positive");
  if (source_cache.enabled) {
    if (source_cache.fail_threshold == 0) {
      throw ConfigError("node.source_cache.fail_threshold", "must be positive");
    }
    if (source_cache.expiry <= 0) throw ConfigError("node.source_cache.expiry", "must be positive");
  }
}

bool is_stale(const SeenRecord& record, Tick now, const NodePolicies& policies) {
  return now - record.first_seen > policies.freshness_age ||
         record.overheard_count >= policies.overheard_cap ||
         record.retransmit_count >= policies.retransmit_cap;
}

Node::Node(NodeId id, Keyring keyring, NodePolicies policies, WireFormat format, RandomStream rng,
           Tick phase)
    : id_(id),
      keyring_(std::move(keyring)),
      policies_(policies),
      format_(format),
      rng_(std::move(rng)),
      phase_(phase),
      trial_order_(keyring_.keys.size()) {
  policies_.validate();
  std::iota(trial_order_.begin(), trial_order_.end(), std::size_t{0});
}

const SeenRecord* Node::find_seen(const MessageId& id) const {
  auto it = seen_.find(id);
  return it == seen_.end() ? nullptr : &it->second;
}

std::vector<Delivery> Node::take_deliveries() {
  std::vector<Delivery> out;
  out.swap(pending_deliveries_);
  return out;
}

void Node::note_stale(Tick now) {
  if (!stats_.first_stale_tick) stats_.first_stale_tick = now;
}

std::uint64_t Node::popularity(const MessageId& id) const {
  const SeenRecord* rec = find_seen(id);
  return rec ? std::uint64_t{rec->overheard_count} + rec->retransmit_count : 0;
}

bool Node::submit_message(Bytes payload, Tick now) {
  if (payload.size() > format_.max_payload()) {
    throw WireError("payload too large: " + std::to_string(payload.size()) + " > " +
                    std::to_string(format_.max_payload()));
  }
  const MessageId id = message_id(payload);
  if (seen_.contains(id) || delivered_ids_.contains(id)) return false;
  seen_.emplace(id, SeenRecord{id, now, 0, 0, true});
  delivered_ids_.insert(id);
  enqueue_all_groups(id, std::make_shared<const Bytes>(std::move(payload)), now);
  return true;
}

void Node::enqueue_all_groups(const MessageId& id, const std::shared_ptr<const Bytes>& payload,
                              Tick now) {
  for (std::size_t g = 0; g < keyring_.keys.size(); ++g) {
    const bool present = std::any_of(pool_.begin(), pool_.end(), [&](const PoolEntry& e) {
      return e.id == id && e.group == g;
    });
    if (present) continue;
    pool_.push_back(PoolEntry{id, payload, g});
    if (pool_.size() > policies_.pool_cap) evict_most_popular(now);
  }
}

// Overflow victim: highest popularity, then oldest first_seen, then the
// larger MessageId, then the later pool position.
void Node::evict_most_popular(Tick now) {
  auto key = [&](std::size_t i) {
    const SeenRecord* rec = find_seen(pool_[i].id);
    const Tick first = rec ? rec->first_seen : 0;
    return std::make_tuple(popularity(pool_[i].id), -first, pool_[i].id, i);
  };
  std::size_t victim = 0;
  for (std::size_t i = 1; i < pool_.size(); ++i) {
    if (key(i) > key(victim)) victim = i;
  }
  pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(victim));
  ++stats_.overflow_drops;
  if (!stats_.first_overflow_tick) stats_.first_overflow_tick = now;
}

bool Node::source_cache_should_try(LinkId source, Tick now) {
  auto it = source_cache_.find(source);
  if (it == source_cache_.end()) return true;
  if (now - it->second.last_heard > policies_.source_cache.expiry) {
    source_cache_.erase(it);
    return true;
  }
  if (it->second.whitelisted) return true;
  return it->second.consecutive_failures < policies_.source_cache.fail_threshold;
}

void Node::source_cache_update(LinkId source, bool success, Tick now) {
  SourceEntry& entry = source_cache_[source];
  entry.last_heard = now;
  if (success) {
    entry.whitelisted = true;
    entry.consecutive_failures = 0;
  } else {
    ++entry.consecutive_failures;
  }
}

ReceiveResult Node::on_frame_received(const Frame& frame, LinkId source, Tick now) {
  ++stats_.receptions;
  ReceiveResult result;
  const bool caching = policies_.source_cache.enabled;
  if (caching && !source_cache_should_try(source, now)) {
    source_cache_[source].last_heard = now;
    ++stats_.skipped_frames;
    result.outcome = ReceiveOutcome::skipped_source;
    return result;
  }

  std::optional<Plaintext> plain;
  std::size_t opened_by = 0;
  for (std::size_t pos = 0; pos < trial_order_.size(); ++pos) {
    const std::size_t k = trial_order_[pos];
    ++result.decrypt_attempts;
    plain = try_decrypt(format_, frame, keyring_.keys[k]);
    if (plain) {
      opened_by = k;
      if (policies_.key_order == KeyOrder::most_recent_first && pos != 0) {
        trial_order_.erase(trial_order_.begin() + static_cast<std::ptrdiff_t>(pos));
        trial_order_.insert(trial_order_.begin(), k);
      }
      break;
    }
  }
  stats_.decrypt_attempts += result.decrypt_attempts;
  if (caching) source_cache_update(source, plain.has_value(), now);
  if (!plain) {
    result.outcome = ReceiveOutcome::discarded_unreadable;
    return result;
  }

  ++stats_.readable_receptions;
  const MessageId id = message_id(plain->payload);
  result.id = id;
  result.group = opened_by;

  auto it = seen_.find(id);
  if (it == seen_.end()) {
    if (delivered_ids_.contains(id)) {
      // Record was forgotten; the message was already handled.
      result.outcome = ReceiveOutcome::duplicate;
      return result;
    }
    it = seen_.emplace(id, SeenRecord{id, now, 1, 0, false}).first;
    if (is_stale(it->second, now, policies_)) {
      note_stale(now);
      result.outcome = ReceiveOutcome::discarded_stale;
      return result;
    }
    it->second.delivered_up = true;
    delivered_ids_.insert(id);
    ++stats_.deliveries;
    pending_deliveries_.push_back(Delivery{id, now, plain->payload});
    enqueue_all_groups(id, std::make_shared<const Bytes>(std::move(plain->payload)), now);
    result.outcome = ReceiveOutcome::delivered;
    return result;
  }

  ++it->second.overheard_count;
  if (is_stale(it->second, now, policies_)) {
    note_stale(now);
    result.outcome = ReceiveOutcome::discarded_stale;
  } else {
    result.outcome = ReceiveOutcome::duplicate;
  }
  return result;
}

// fifo: front of the rotation. least_popular: lowest overheard+retransmit,
// then oldest first_seen, then lowest MessageId, then pool position.
std::size_t Node::select_entry() const {
  if (policies_.scheduler == SchedulerPolicy::fifo) return 0;
  auto key = [&](std::size_t i) {
    const SeenRecord* rec = find_seen(pool_[i].id);
    const Tick first = rec ? rec->first_seen : 0;
    return std::make_tuple(popularity(pool_[i].id), first, pool_[i].id, i);
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < pool_.size(); ++i) {
    if (key(i) < key(best)) best = i;
  }
  return best;
}

Transmission Node::on_transmit_slot(Tick now) {
  ++stats_.emissions;
  while (!pool_.empty()) {
    const std::size_t idx = select_entry();
    PoolEntry entry = pool_[idx];
    auto rec = seen_.find(entry.id);
    if (rec == seen_.end() || is_stale(rec->second, now, policies_)) {
      const auto before = pool_.size();
      std::erase_if(pool_, [&](const PoolEntry& e) { return e.id == entry.id; });
      stats_.stale_drops += before - pool_.size();
      note_stale(now);
      continue;
    }
    // Same construction path for originated and forwarded messages.
    Frame frame = encode_frame(format_, *entry.payload, keyring_.keys[entry.group], rng_);
    ++rec->second.retransmit_count;
    pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(idx));
    pool_.push_back(entry);
    return Transmission{std::move(frame), entry.id, entry.group};
  }
  ++stats_.cover_emissions;
  return Transmission{make_cover_frame(format_, rng_), std::nullopt, std::nullopt};
}

void Node::forget_old_seen(Tick now) {
  std::vector<MessageId> forgotten;
  for (auto it = seen_.begin(); it != seen_.end();) {
    if (now - it->second.first_seen > policies_.seen_forget) {
      forgotten.push_back(it->first);
      it = seen_.erase(it);
    } else {
      ++it;
    }
  }
  if (forgotten.empty()) return;
  std::erase_if(pool_, [&](const PoolEntry& e) {
    return std::find(forgotten.begin(), forgotten.end(), e.id) != forgotten.end();
  });
}

}  // namespace adtn
