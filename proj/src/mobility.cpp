#include "adtn/mobility.hpp"

#include <cmath>

namespace adtn {

double distance_sq(Position a, Position b, const ArenaConfig& arena) {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  if (arena.torus) {
    dx = std::min(dx, arena.width - dx);
    dy = std::min(dy, arena.height - dy);
  }
  return dx * dx + dy * dy;
}

Position interpolate(const std::vector<Waypoint>& timeline, Tick tick) {
  if (tick <= timeline.front().tick) return {timeline.front().x, timeline.front().y};
  for (std::size_t i = 1; i < timeline.size(); ++i) {
    const Waypoint& a = timeline[i - 1];
    const Waypoint& b = timeline[i];
    if (tick <= b.tick) {
      const double f = static_cast<double>(tick - a.tick) / static_cast<double>(b.tick - a.tick);
      return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
    }
  }
  return {timeline.back().x, timeline.back().y};
}

Mobility::Mobility(const ScenarioConfig& config) : config_(config) {
  const std::size_t n = config.nodes.count;
  if (config.mobility.model == MobilityModel::trace) {
    for (const auto& timeline : config.mobility.traces) positions_.push_back(interpolate(timeline, 0));
    return;
  }
  if (config.nodes.placement == Placement::explicit_positions) {
    positions_ = config.nodes.positions;
  } else {
    RandomStream rng(config.seed, "placement");
    for (std::size_t i = 0; i < n; ++i) {
      const double x = rng.uniform(0, config.arena.width);
      const double y = rng.uniform(0, config.arena.height);
      positions_.push_back({x, y});
    }
  }
  if (config.mobility.model == MobilityModel::random_waypoint) {
    for (std::size_t i = 0; i < n; ++i) {
      walkers_.push_back(Walker{{}, 0, 0, RandomStream(config.seed, "mobility", i)});
      pick_leg(walkers_.back());
    }
  }
}

void Mobility::pick_leg(Walker& walker) {
  walker.target = {walker.rng.uniform(0, config_.arena.width),
                   walker.rng.uniform(0, config_.arena.height)};
  walker.speed = walker.rng.uniform(config_.mobility.speed_min, config_.mobility.speed_max);
}

void Mobility::advance() {
  ++tick_;
  switch (config_.mobility.model) {
    case MobilityModel::static_positions:
      return;
    case MobilityModel::trace:
      for (std::size_t i = 0; i < positions_.size(); ++i) {
        positions_[i] = interpolate(config_.mobility.traces[i], tick_);
      }
      return;
    case MobilityModel::random_waypoint:
      for (std::size_t i = 0; i < positions_.size(); ++i) {
        Walker& w = walkers_[i];
        if (w.pause_left > 0) {
          --w.pause_left;
          continue;
        }
        Position& p = positions_[i];
        const double dx = w.target.x - p.x;
        const double dy = w.target.y - p.y;
        const double dist = std::sqrt(dx * dx + dy * dy);
        if (dist <= w.speed) {
          p = w.target;
          w.pause_left = config_.mobility.pause;
          pick_leg(w);
        } else {
          p.x += dx / dist * w.speed;
          p.y += dy / dist * w.speed;
        }
      }
      return;
  }
}

std::vector<std::vector<Position>> record_positions(const ScenarioConfig& config) {
  std::vector<std::vector<Position>> out;
  out.reserve(static_cast<std::size_t>(config.ticks));
  Mobility mobility(config);
  for (Tick t = 0; t < config.ticks; ++t) {
    if (t > 0) mobility.advance();
    out.push_back(mobility.positions());
  }
  return out;
}

}  // namespace adtn
