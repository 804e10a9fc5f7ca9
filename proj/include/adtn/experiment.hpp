#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "adtn/config.hpp"

namespace adtn {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitOracleMismatch = 4;
inline constexpr int kExitTrace = 5;

struct ScenarioSource {
  std::string path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;  // "key=value"
  bool trace_frames = false;
};

/// Loads, overrides, seeds and validates a scenario.
ScenarioConfig load_scenario(const ScenarioSource& source);

struct RunCommand {
  ScenarioSource scenario;
  std::string out_dir;
};

struct SweepCommand {
  ScenarioSource scenario;
  std::vector<std::string> grid;  // "key=v1,v2,..."
  std::string out_dir;
  std::size_t threads = 0;        // 0: ADTN_SIM_THREADS or hardware concurrency
};

struct AttackCommand {
  std::string trace_dir;
  std::string adversary = "external";  // external | internal
  std::vector<std::string> keys;       // group ids, or "*"
  std::string scope = "global";        // global | disk:x,y,r
  std::string name = "attack";
  std::string out_dir;
  std::optional<ScenarioSource> scenario;  // cross-checked against the trace run id
};

struct OracleCommand {
  ScenarioSource scenario;
};

/// Parameters `sweep` accepts.
const std::vector<std::string>& sweepable_parameters();

int cmd_run(const RunCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_attack(const AttackCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleCommand& cmd, std::ostream& out, std::ostream& err);

}  // namespace adtn
