#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adtn/config.hpp"
#include "adtn/netsim.hpp"
#include "adtn/wire.hpp"

namespace adtn {

// ---------------------------------------------------------------------------
// What an adversary gets to see.

struct ObservationScope {
  bool global = true;
  Position center;
  double radius = 0;
  std::vector<Waypoint> trajectory;  // mobile observer when non-empty

  static ObservationScope from_config(const ScopeConfig& c);
  bool contains(Position emitter, Tick tick, const ArenaConfig& arena) const;
};

/// seq is the emission's position in the run's emission order, which any
/// observer knows; it doubles as the join key for ground-truth scoring.
struct Observation {
  std::uint64_t seq = 0;
  Tick tick = 0;
  LinkId link = 0;
  Position position;
  Frame frame;
};

/// Emissions whose emitter lay in scope. No group, payload or MessageId.
struct ObservationLog {
  ObservationScope scope;
  std::vector<Observation> entries;
};

ObservationLog observe(std::span<const EmissionEvent> events, const ObservationScope& scope,
                       const ArenaConfig& arena);

/// No keys: external adversary. Any keys: internal.
struct AdversaryView {
  std::vector<GroupKey> compromised_keys;
  ObservationLog log;

  bool internal() const { return !compromised_keys.empty(); }
};

/// Ground truth the scorers need about the network (never given to an
/// adversary's inference step).
struct NetworkTruth {
  std::size_t node_count = 0;
  std::vector<TrustGroup> groups;
};

NetworkTruth network_truth(const RunReport& run);

// ---------------------------------------------------------------------------
// Attacks.

struct LinkerResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // indices into the log
  std::size_t true_links = 0;
  std::optional<double> precision;  // nullopt when nothing was linked
};

/// Links every pair of log entries with byte-identical frames. `truth`,
/// when given, is indexed by seq and used only to score the links.
LinkerResult equality_linker(const ObservationLog& log,
                             std::span<const EmissionEvent> truth = {});

struct Distinguishability {
  enum class Status { ok, underpowered, single_class };

  Status status = Status::ok;
  std::size_t frames = 0;
  std::size_t cover = 0;
  std::size_t real = 0;
  double chi2_statistic = 0;  // summed over positions
  double chi2_dof = 0;
  double chi2_p_value = 1;
  double min_position_p_value = 1;
  std::size_t positions_below_001 = 0;
  std::optional<double> classifier_accuracy;
  std::size_t classifier_samples = 0;
};

inline constexpr std::size_t kMinDistinguishFrames = 10000;
inline constexpr std::size_t kMinDistinguishPerClass = 100;

const char* to_string(Distinguishability::Status status);

/// Per-position byte chi-square against uniform (aggregated over all
/// positions) plus the 5-fold cross-validated accuracy of a byte-histogram
/// naive Bayes classifier on a class-balanced subsample. Labels are ground
/// truth and used only for scoring.
Distinguishability distinguishability_test(std::span<const Frame> frames,
                                           std::span<const bool> is_cover, std::uint64_t seed);

Distinguishability distinguishability_test(const ObservationLog& log,
                                           std::span<const EmissionEvent> truth,
                                           std::uint64_t seed);

struct AnonymityEntry {
  MessageId message;
  LinkId true_origin = 0;
  std::vector<LinkId> candidates;  // sorted
  double sender_anonymity = 0;
  std::size_t recipient_candidates = 0;
  double recipient_anonymity = 0;

  bool identified() const { return candidates.size() == 1; }
  bool sound() const;
};

struct SocialGraph {
  std::set<std::pair<LinkId, LinkId>> edges;        // u < v
  std::set<std::pair<LinkId, LinkId>> truth_edges;  // co-membership in compromised groups
  std::optional<double> precision;
  double recall = 0;
};

/// Decrypts an adversary view once and answers questions about it.
class AdversaryAnalysis {
 public:
  AdversaryAnalysis(AdversaryView view, WireFormat format);

  const AdversaryView& view() const { return view_; }

  /// External: every node is a candidate. Internal: the emitters of the
  /// earliest observed decryptable copy, closed over the groups through
  /// which the message could have travelled unseen (the non-compromised
  /// groups under global scope, every group otherwise). Candidate sets
  /// are never empty.
  AnonymityEntry sender_anonymity(const MessageId& target, LinkId true_origin,
                                  const NetworkTruth& truth) const;

  SocialGraph social_graph(const NetworkTruth& truth) const;

 private:
  struct Opened {
    MessageId id;
    std::size_t key = 0;  // index into compromised_keys
  };

  AdversaryView view_;
  WireFormat format_;
  std::vector<std::optional<Opened>> opened_;  // parallel to log entries
};

/// 1 - 1/|set|.
double anonymity_from_set_size(std::size_t size);

// ---------------------------------------------------------------------------
// Performance.

struct MessageMetrics {
  MessageId id;
  LinkId origin = 0;
  Tick injected = 0;
  std::size_t size = 0;
  std::size_t delivered_nodes = 0;  // excluding the originator
  double delivery_ratio = 0;        // delivered_nodes / (N - 1)
  std::vector<Tick> latencies;
  std::optional<double> mean_latency;
  std::optional<Tick> diffusion_50;   // ticks after injection until >= p*N nodes hold it
  std::optional<Tick> diffusion_90;
  std::optional<Tick> diffusion_100;
};

struct PerformanceReport {
  std::vector<MessageMetrics> messages;  // node-originated messages only
  double delivery_ratio = 0;
  std::optional<double> mean_latency;
  std::size_t undelivered_messages = 0;
  std::uint64_t emissions_total = 0;  // protocol nodes only
  std::uint64_t cover_emissions = 0;
  std::uint64_t adversary_emissions = 0;
  double cover_fraction = 0;
  std::vector<std::uint64_t> decrypt_attempts;  // per node
  std::uint64_t decrypt_attempts_total = 0;
};

/// First tick at which at least ceil(p*N) nodes hold the message, relative
/// to injection. Holding includes the originator.
std::optional<Tick> diffusion_time(std::vector<Tick> holding_ticks, Tick injected,
                                   std::size_t node_count, double p);

PerformanceReport performance_metrics(const RunReport& run);

}  // namespace adtn
