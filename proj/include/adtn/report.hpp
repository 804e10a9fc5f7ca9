#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "adtn/adversary.hpp"
#include "adtn/netsim.hpp"

namespace adtn {

/// Trace directory is incomplete or its files come from different runs.
class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything one observer learned, scored against ground truth.
struct AdversaryReport {
  std::string name;
  std::vector<std::string> keys;  // compromised group ids
  ObservationScope scope;
  std::size_t observed_frames = 0;
  LinkerResult linker;
  Distinguishability distinguishability;
  std::vector<AnonymityEntry> anonymity;  // node-originated messages
  SocialGraph social;

  bool internal() const { return !keys.empty(); }
};

/// `key_ids` may contain "*" for every group.
AdversaryReport evaluate_adversary(const std::string& name, const std::vector<std::string>& key_ids,
                                   const ObservationScope& scope,
                                   std::span<const EmissionEvent> events,
                                   std::span<const MessageTruth> messages,
                                   const NetworkTruth& truth, const ScenarioConfig& config);

/// Reports for every passive adversary declared in the scenario.
std::vector<AdversaryReport> evaluate_configured_adversaries(const RunReport& run);

nlohmann::json to_json(const AdversaryReport& report, const ArenaConfig& arena);

nlohmann::json summary_json(const RunReport& run, const PerformanceReport& perf,
                            const std::vector<AdversaryReport>& adversaries);

/// Writes summary.json, metrics.csv, metrics.md, events.jsonl,
/// messages.jsonl, groups.json and one observed_<name>.jsonl per passive
/// adversary. Throws IoError.
void write_run_outputs(const RunReport& run, const PerformanceReport& perf,
                       const std::vector<AdversaryReport>& adversaries,
                       const std::filesystem::path& out_dir);

void write_anonymity_outputs(const AdversaryReport& report, const std::string& run_id,
                             const ArenaConfig& arena, const std::filesystem::path& out_dir);

/// Column documentation for every CSV this tool writes.
std::string metrics_markdown(const std::vector<std::string>& adversary_names,
                             const std::vector<std::string>& sweep_parameters = {});

/// Trace files read back for offline attacks.
struct TraceData {
  std::string run_id;
  std::size_t node_count = 0;
  std::size_t frame_size = 0;
  ArenaConfig arena;
  std::uint64_t seed = 0;
  std::vector<TrustGroup> groups;
  std::vector<MessageTruth> messages;
  std::vector<EmissionEvent> events;
  bool has_frames = false;
};

TraceData read_trace(const std::filesystem::path& dir);

std::string format_double(double value);
std::string format_optional(const std::optional<double>& value);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace adtn
