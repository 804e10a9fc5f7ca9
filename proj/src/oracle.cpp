#include "adtn/oracle.hpp"

#include <algorithm>

namespace adtn {
namespace {

bool within(Position a, Position b, double range, const ArenaConfig& arena) {
  double dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  double dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  if (arena.torus) {
    if (arena.width - dx < dx) dx = arena.width - dx;
    if (arena.height - dy < dy) dy = arena.height - dy;
  }
  return dx * dx + dy * dy <= range * range;
}

}  // namespace

std::vector<std::optional<Tick>> contact_oracle(const OracleInput& in) {
  const std::size_t n = in.node_groups.size();
  std::vector<std::optional<Tick>> arrival(n);
  std::vector<std::size_t> slots_used(n, 0);
  if (in.origin >= n) return arrival;
  arrival[in.origin] = in.injected;

  const Tick horizon = static_cast<Tick>(in.positions.size());
  for (Tick t = in.injected; t < horizon; ++t) {
    const auto& pos = in.positions[static_cast<std::size_t>(t)];
    std::vector<NodeId> reached;
    for (NodeId u = 0; u < n; ++u) {
      if (!arrival[u]) continue;
      const Tick speaks_from = u == in.origin ? *arrival[u] : *arrival[u] + 1;
      if (t < speaks_from || t % in.tx_period != in.phases[u]) continue;
      const auto& mine = in.node_groups[u];
      const std::size_t g = mine[slots_used[u]++ % mine.size()];
      for (NodeId v : in.group_members[g]) {
        if (v != u && !arrival[v] && within(pos[u], pos[v], in.radio_range, in.arena)) {
          reached.push_back(v);
        }
      }
    }
    for (NodeId v : reached) {
      if (!arrival[v]) arrival[v] = t;
    }
  }
  return arrival;
}

OracleInput make_oracle_input(const ScenarioConfig& config) {
  if (config.traffic.size() != 1) {
    throw ConfigError("traffic", "the contact oracle needs exactly one traffic entry");
  }
  OracleInput in;
  in.positions = record_positions(config);
  in.arena = config.arena;
  in.radio_range = config.radio_range;
  in.tx_period = config.node.tx_period;
  in.phases = draw_phases(config);
  for (const auto& g : config.groups) in.group_members.push_back(g.members);
  in.node_groups = node_group_indices(config);
  in.origin = config.traffic.front().node;
  in.injected = config.traffic.front().tick;
  return in;
}

OracleComparison compare_with_oracle(const ScenarioConfig& config) {
  OracleComparison cmp;
  auto invalid = [&](std::string reason) {
    cmp.valid = false;
    cmp.invalid_reason = std::move(reason);
    return cmp;
  };
  if (config.traffic.size() != 1) return invalid("scenario must inject exactly one message");
  if (config.node.scheduler != SchedulerPolicy::fifo) return invalid("scheduler is not fifo");
  if (config.node.source_cache.enabled) return invalid("source cache is enabled");
  for (const auto& a : config.adversaries) {
    if (a.type == AdversaryType::jammer || a.type == AdversaryType::spammer) {
      return invalid("scenario contains a " +
                     std::string(a.type == AdversaryType::jammer ? "jammer" : "spammer"));
    }
  }

  cmp.oracle = contact_oracle(make_oracle_input(config));
  const RunReport run = run_scenario(config);

  cmp.protocol.assign(config.nodes.count, std::nullopt);
  if (!run.messages.empty()) {
    const MessageId id = run.messages.front().id;
    for (const auto& d : run.deliveries) {
      if (d.id == id && !cmp.protocol[d.node]) cmp.protocol[d.node] = d.tick;
    }
  }

  Tick last_arrival = 0;
  for (const auto& a : cmp.oracle) {
    if (a) last_arrival = std::max(last_arrival, *a);
  }
  for (std::size_t n = 0; n < run.node_stats.size(); ++n) {
    const auto& s = run.node_stats[n];
    if (s.first_stale_tick && *s.first_stale_tick <= last_arrival) {
      return invalid("node " + std::to_string(n) + " hit a staleness cap at tick " +
                     std::to_string(*s.first_stale_tick));
    }
    if (s.first_overflow_tick && *s.first_overflow_tick <= last_arrival) {
      return invalid("node " + std::to_string(n) + " overflowed its pool at tick " +
                     std::to_string(*s.first_overflow_tick));
    }
  }
  for (NodeId n = 0; n < cmp.oracle.size(); ++n) {
    if (cmp.oracle[n] != cmp.protocol[n]) cmp.mismatches.push_back(n);
  }
  return cmp;
}

}  // namespace adtn
