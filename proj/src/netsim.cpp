#include "adtn/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adtn {

const char* to_string(EmissionKind kind) {
  switch (kind) {
    case EmissionKind::cover: return "cover";
    case EmissionKind::real: return "real";
    case EmissionKind::garbage: return "garbage";
    case EmissionKind::spam: return "spam";
  }
  return "cover";
}

bool JamRegion::suppresses(Position receiver, Tick tick, const ArenaConfig& arena) const {
  return tick >= start && tick < end && in_range(receiver, center, radius, arena);
}

std::vector<Tick> draw_phases(const ScenarioConfig& config) {
  RandomStream rng(config.seed, "phases");
  std::vector<Tick> phases(config.nodes.count);
  for (auto& p : phases) p = static_cast<Tick>(rng.below(static_cast<std::uint64_t>(config.node.tx_period)));
  return phases;
}

std::vector<std::vector<std::size_t>> node_group_indices(const ScenarioConfig& config) {
  std::vector<std::vector<std::size_t>> out(config.nodes.count);
  for (std::size_t g = 0; g < config.groups.size(); ++g) {
    for (NodeId m : config.groups[g].members) out[m].push_back(g);
  }
  return out;
}

World::World(const ScenarioConfig& config, bool keep_frames)
    : config_(config),
      format_(config.frame_size),
      keep_frames_(keep_frames),
      mobility_(config),
      groups_(resolve_groups(config)),
      node_groups_(node_group_indices(config)),
      phases_(draw_phases(config)) {
  auto rings = build_keyrings(groups_, config.nodes.count);
  nodes_.reserve(config.nodes.count);
  for (std::size_t n = 0; n < config.nodes.count; ++n) {
    nodes_.emplace_back(static_cast<NodeId>(n), std::move(rings[n]), config.node, format_,
                        RandomStream(config.seed, "node", n), phases_[n]);
  }

  LinkId next_link = static_cast<LinkId>(config.nodes.count);
  for (std::size_t i = 0; i < config.adversaries.size(); ++i) {
    const auto& a = config.adversaries[i];
    if (a.type == AdversaryType::jammer) {
      jammers_.push_back(JamRegion{{a.x, a.y}, a.radius, a.start, config.adversary_end(a)});
    } else if (a.type == AdversaryType::garbage || a.type == AdversaryType::spammer) {
      ActiveEmitter e{i, next_link++, RandomStream(config.seed, "adversary", i), std::nullopt,
                      std::nullopt, {}, a.radius > 0 ? a.radius : config.radio_range, false};
      if (a.type == AdversaryType::spammer) {
        for (std::size_t g = 0; g < groups_.size(); ++g) {
          if (groups_[g].group_id == a.group) {
            e.key = groups_[g].key;
            e.group = g;
          }
        }
        e.payload = spammer_payload(config, i);
      }
      adversary_links_.emplace_back(a.name, e.link);
      emitters_.push_back(std::move(e));
    }
  }

  traffic_order_.resize(config.traffic.size());
  std::iota(traffic_order_.begin(), traffic_order_.end(), std::size_t{0});
  std::stable_sort(traffic_order_.begin(), traffic_order_.end(), [&](std::size_t a, std::size_t b) {
    return config.traffic[a].tick < config.traffic[b].tick;
  });
}

// Fractional rates are spread evenly: emissions up to tick t total
// floor((t - start + 1) * rate).
std::size_t World::emissions_this_tick(const AdversaryConfig& a) const {
  if (tick_ < a.start || tick_ >= config_.adversary_end(a)) return 0;
  const double k = static_cast<double>(tick_ - a.start);
  return static_cast<std::size_t>(std::floor((k + 1) * a.rate) - std::floor(k * a.rate));
}

std::vector<EmissionEvent> World::step() {
  const Tick t = tick_;
  if (t > 0) mobility_.advance();
  const auto& pos = mobility_.positions();

  while (next_traffic_ < traffic_order_.size() &&
         config_.traffic[traffic_order_[next_traffic_]].tick == t) {
    const std::size_t idx = traffic_order_[next_traffic_++];
    const NodeId origin = config_.traffic[idx].node;
    Bytes payload = traffic_payload(config_, idx);
    const MessageId id = message_id(payload);
    const std::size_t size = payload.size();
    if (nodes_[origin].submit_message(std::move(payload), t)) {
      const bool known = std::any_of(messages_.begin(), messages_.end(),
                                     [&](const MessageTruth& m) { return m.id == id; });
      if (!known) messages_.push_back(MessageTruth{id, origin, t, size, false});
      deliveries_.push_back(DeliveryRecord{origin, id, t, true});
    }
  }

  std::vector<EmissionEvent> events;
  for (auto& node : nodes_) {
    if (!node.is_slot(t)) continue;
    Transmission tx = node.on_transmit_slot(t);
    EmissionEvent ev;
    ev.tick = t;
    ev.emitter = node.id();
    ev.position = pos[node.id()];
    ev.frame = std::move(tx.frame);
    ev.kind = tx.id ? EmissionKind::real : EmissionKind::cover;
    ev.message = tx.id;
    if (tx.group) ev.group = node_groups_[node.id()][*tx.group];
    events.push_back(std::move(ev));
  }
  std::vector<double> ranges(events.size(), config_.radio_range);

  for (auto& e : emitters_) {
    const auto& a = config_.adversaries[e.adversary];
    const std::size_t count = emissions_this_tick(a);
    for (std::size_t k = 0; k < count; ++k) {
      EmissionEvent ev;
      ev.tick = t;
      ev.emitter = e.link;
      ev.position = {a.x, a.y};
      if (e.key) {
        ev.frame = encode_frame(format_, e.payload, *e.key, e.rng);
        ev.kind = EmissionKind::spam;
        ev.message = message_id(e.payload);
        ev.group = e.group;
        if (!e.announced) {
          messages_.push_back(MessageTruth{*ev.message, e.link, t, e.payload.size(), true});
          e.announced = true;
        }
      } else {
        ev.frame = make_cover_frame(format_, e.rng);
        ev.kind = EmissionKind::garbage;
      }
      events.push_back(std::move(ev));
      ranges.push_back(e.range);
    }
  }

  for (std::size_t i = 0; i < events.size(); ++i) {
    auto& ev = events[i];
    ev.seq = next_seq_++;
    for (NodeId r = 0; r < nodes_.size(); ++r) {
      if (r == ev.emitter) continue;
      if (!in_range(ev.position, pos[r], ranges[i], config_.arena)) continue;
      const bool jammed = std::any_of(jammers_.begin(), jammers_.end(), [&](const JamRegion& j) {
        return j.suppresses(pos[r], t, config_.arena);
      });
      if (!jammed) ev.receivers.push_back(r);
    }
  }

  for (auto& ev : events) {
    for (NodeId r : ev.receivers) nodes_[r].on_frame_received(ev.frame, ev.emitter, t);
    if (!keep_frames_) {
      ev.frame.bytes.clear();
      ev.frame.bytes.shrink_to_fit();
    }
  }

  for (auto& node : nodes_) {
    for (auto& d : node.take_deliveries()) {
      deliveries_.push_back(DeliveryRecord{node.id(), d.id, d.tick, false});
    }
  }
  if ((t + 1) % config_.forget_interval == 0) {
    for (auto& node : nodes_) node.forget_old_seen(t);
  }
  ++tick_;
  return events;
}

RunReport run_scenario(const ScenarioConfig& config, RunOptions options) {
  const bool has_observer =
      std::any_of(config.adversaries.begin(), config.adversaries.end(),
                  [](const AdversaryConfig& a) { return a.type == AdversaryType::passive; });
  const bool keep = options.keep_frames || config.output.trace_frames || has_observer;

  RunReport report;
  report.run_id = run_id(config);
  report.config = config;
  report.frames_kept = keep;
  World world(report.config, keep);
  for (Tick t = 0; t < config.ticks; ++t) {
    auto events = world.step();
    std::move(events.begin(), events.end(), std::back_inserter(report.events));
  }
  report.messages = world.messages();
  report.deliveries = world.deliveries();
  for (const auto& node : world.nodes()) report.node_stats.push_back(node.stats());
  report.phases = world.phases();
  report.groups = world.groups();
  report.node_groups = node_group_indices(config);
  report.adversary_links = world.adversary_links();
  return report;
}

}  // namespace adtn
