#pragma once

#include <cstdint>
#include <vector>

namespace adtn {

using Bytes = std::vector<std::uint8_t>;

/// Simulation time quantum. One scheduling slot granularity.
using Tick = std::int64_t;

/// Protocol participants are numbered 0..N-1.
using NodeId = std::uint32_t;

/// Link-layer source identifier as seen on air. Nodes use their NodeId;
/// adversarial emitters get ids >= N.
using LinkId = std::uint32_t;

}  // namespace adtn
