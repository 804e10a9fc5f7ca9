#pragma once

#include <vector>

#include "adtn/config.hpp"
#include "adtn/random.hpp"

namespace adtn {

/// Squared distance, wrapping around the arena edges when it is a torus.
double distance_sq(Position a, Position b, const ArenaConfig& arena);

inline bool in_range(Position a, Position b, double range, const ArenaConfig& arena) {
  return distance_sq(a, b, arena) <= range * range;
}

/// Position of a scripted timeline at `tick` (linear interpolation,
/// clamped to the first and last waypoint).
Position interpolate(const std::vector<Waypoint>& timeline, Tick tick);

/// Node positions over time. Tick 0 is the initial placement; advance()
/// moves every node to the next tick.
class Mobility {
 public:
  explicit Mobility(const ScenarioConfig& config);

  const std::vector<Position>& positions() const { return positions_; }
  Tick tick() const { return tick_; }

  void advance();

 private:
  struct Walker {
    Position target;
    double speed = 0;
    Tick pause_left = 0;
    RandomStream rng;
  };

  void pick_leg(Walker& walker);

  const ScenarioConfig& config_;
  Tick tick_ = 0;
  std::vector<Position> positions_;
  std::vector<Walker> walkers_;
};

/// positions[t][n] for t in [0, ticks), produced by the same model the
/// simulator uses.
std::vector<std::vector<Position>> record_positions(const ScenarioConfig& config);

}  // namespace adtn
