#include "adtn/adversary.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "adtn/mobility.hpp"
#include "adtn/random.hpp"

namespace adtn {

ObservationScope ObservationScope::from_config(const ScopeConfig& c) {
  ObservationScope s;
  s.global = c.global;
  s.center = {c.x, c.y};
  s.radius = c.radius;
  s.trajectory = c.trajectory;
  return s;
}

bool ObservationScope::contains(Position emitter, Tick tick, const ArenaConfig& arena) const {
  if (global) return true;
  const Position c = trajectory.empty() ? center : interpolate(trajectory, tick);
  return in_range(emitter, c, radius, arena);
}

ObservationLog observe(std::span<const EmissionEvent> events, const ObservationScope& scope,
                       const ArenaConfig& arena) {
  ObservationLog log;
  log.scope = scope;
  for (const auto& ev : events) {
    if (!scope.contains(ev.position, ev.tick, arena)) continue;
    log.entries.push_back(Observation{ev.seq, ev.tick, ev.emitter, ev.position, ev.frame});
  }
  return log;
}

NetworkTruth network_truth(const RunReport& run) {
  return NetworkTruth{run.config.nodes.count, run.groups};
}

LinkerResult equality_linker(const ObservationLog& log, std::span<const EmissionEvent> truth) {
  LinkerResult result;
  std::unordered_map<std::string_view, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < log.entries.size(); ++i) {
    const auto& bytes = log.entries[i].frame.bytes;
    if (bytes.empty()) continue;
    std::string_view key(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    buckets[key].push_back(i);
  }
  for (auto& [key, idx] : buckets) {
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) result.pairs.emplace_back(idx[a], idx[b]);
    }
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  if (!truth.empty()) {
    for (const auto& [a, b] : result.pairs) {
      const auto sa = log.entries[a].seq;
      const auto sb = log.entries[b].seq;
      if (sa < truth.size() && sb < truth.size() && truth[sa].message &&
          truth[sa].message == truth[sb].message) {
        ++result.true_links;
      }
    }
  }
  if (!result.pairs.empty()) {
    result.precision = static_cast<double>(result.true_links) / static_cast<double>(result.pairs.size());
  }
  return result;
}

const char* to_string(Distinguishability::Status status) {
  switch (status) {
    case Distinguishability::Status::ok: return "ok";
    case Distinguishability::Status::underpowered: return "underpowered";
    case Distinguishability::Status::single_class: return "single_class";
  }
  return "ok";
}

namespace {

using Histogram = std::array<std::uint32_t, 256>;

Histogram byte_histogram(const Frame& f) {
  Histogram h{};
  for (std::uint8_t b : f.bytes) ++h[b];
  return h;
}

template <class T>
void shuffle(std::vector<T>& v, RandomStream& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

// Multinomial naive Bayes over byte values, 5-fold cross-validated on a
// balanced sample.
std::pair<double, std::size_t> classifier_accuracy(std::span<const Frame> frames,
                                                   std::span<const bool> is_cover,
                                                   std::uint64_t seed) {
  constexpr std::size_t kFolds = 5;
  std::vector<std::size_t> cover, real;
  for (std::size_t i = 0; i < frames.size(); ++i) (is_cover[i] ? cover : real).push_back(i);
  RandomStream rng(seed, "classifier");
  shuffle(cover, rng);
  shuffle(real, rng);
  const std::size_t m = std::min(cover.size(), real.size());
  std::vector<std::pair<std::size_t, bool>> sample;
  for (std::size_t i = 0; i < m; ++i) {
    sample.emplace_back(cover[i], true);
    sample.emplace_back(real[i], false);
  }
  shuffle(sample, rng);

  // fold_totals[f][label] = summed byte counts of fold f, class label.
  std::vector<std::array<std::array<double, 256>, 2>> fold_totals(kFolds);
  for (auto& f : fold_totals) {
    f[0].fill(0);
    f[1].fill(0);
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const Histogram h = byte_histogram(frames[sample[i].first]);
    auto& dst = fold_totals[i % kFolds][sample[i].second ? 1 : 0];
    for (std::size_t b = 0; b < 256; ++b) dst[b] += h[b];
  }

  std::size_t correct = 0;
  for (std::size_t f = 0; f < kFolds; ++f) {
    std::array<double, 256> log_ratio{};
    std::array<double, 2> sums{0, 0};
    std::array<std::array<double, 256>, 2> train{};
    for (std::size_t g = 0; g < kFolds; ++g) {
      if (g == f) continue;
      for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t b = 0; b < 256; ++b) train[c][b] += fold_totals[g][c][b];
      }
    }
    for (std::size_t c = 0; c < 2; ++c) sums[c] = std::accumulate(train[c].begin(), train[c].end(), 0.0);
    for (std::size_t b = 0; b < 256; ++b) {
      const double p_cover = (train[1][b] + 1) / (sums[1] + 256);
      const double p_real = (train[0][b] + 1) / (sums[0] + 256);
      log_ratio[b] = std::log(p_cover) - std::log(p_real);
    }
    for (std::size_t i = f; i < sample.size(); i += kFolds) {
      const Histogram h = byte_histogram(frames[sample[i].first]);
      double score = 0;
      for (std::size_t b = 0; b < 256; ++b) score += h[b] * log_ratio[b];
      const bool predicted_cover = score > 0;
      if (predicted_cover == sample[i].second) ++correct;
    }
  }
  return {sample.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(sample.size()),
          sample.size()};
}

}  // namespace

Distinguishability distinguishability_test(std::span<const Frame> frames,
                                           std::span<const bool> is_cover, std::uint64_t seed) {
  Distinguishability d;
  d.frames = frames.size();
  d.cover = static_cast<std::size_t>(std::count(is_cover.begin(), is_cover.end(), true));
  d.real = d.frames - d.cover;
  if (d.cover == 0 || d.real == 0) {
    d.status = Distinguishability::Status::single_class;
  } else if (d.frames < kMinDistinguishFrames ||
             std::min(d.cover, d.real) < kMinDistinguishPerClass) {
    d.status = Distinguishability::Status::underpowered;
  }
  if (frames.empty()) return d;

  const std::size_t width = frames.front().bytes.size();
  std::vector<std::uint32_t> counts(width * 256, 0);
  for (const auto& f : frames) {
    if (f.bytes.size() != width) throw WireError("distinguishability_test: mixed frame sizes");
    for (std::size_t p = 0; p < width; ++p) ++counts[p * 256 + f.bytes[p]];
  }
  const double expected = static_cast<double>(frames.size()) / 256.0;
  d.chi2_dof = 255.0 * static_cast<double>(width);
  d.min_position_p_value = 1;
  for (std::size_t p = 0; p < width; ++p) {
    double chi2 = 0;
    for (std::size_t b = 0; b < 256; ++b) {
      const double diff = counts[p * 256 + b] - expected;
      chi2 += diff * diff / expected;
    }
    d.chi2_statistic += chi2;
    const double pv = boost::math::gamma_q(127.5, chi2 / 2);
    d.min_position_p_value = std::min(d.min_position_p_value, pv);
    if (pv < 0.01) ++d.positions_below_001;
  }
  d.chi2_p_value = boost::math::gamma_q(d.chi2_dof / 2, d.chi2_statistic / 2);

  if (d.status != Distinguishability::Status::single_class && std::min(d.cover, d.real) >= 10) {
    auto [acc, n] = classifier_accuracy(frames, is_cover, seed);
    d.classifier_accuracy = acc;
    d.classifier_samples = n;
  }
  return d;
}

Distinguishability distinguishability_test(const ObservationLog& log,
                                           std::span<const EmissionEvent> truth,
                                           std::uint64_t seed) {
  std::vector<Frame> frames;
  std::vector<char> labels;
  for (const auto& o : log.entries) {
    if (o.frame.bytes.empty()) continue;
    frames.push_back(o.frame);
    const auto kind = truth[o.seq].kind;
    labels.push_back(kind == EmissionKind::cover || kind == EmissionKind::garbage);
  }
  std::unique_ptr<bool[]> flags(new bool[labels.size()]);
  for (std::size_t i = 0; i < labels.size(); ++i) flags[i] = labels[i] != 0;
  return distinguishability_test(frames, std::span<const bool>(flags.get(), labels.size()), seed);
}

double anonymity_from_set_size(std::size_t size) {
  return size == 0 ? 0.0 : 1.0 - 1.0 / static_cast<double>(size);
}

bool AnonymityEntry::sound() const {
  return std::binary_search(candidates.begin(), candidates.end(), true_origin);
}

AdversaryAnalysis::AdversaryAnalysis(AdversaryView view, WireFormat format)
    : view_(std::move(view)), format_(format), opened_(view_.log.entries.size()) {
  for (std::size_t i = 0; i < view_.log.entries.size(); ++i) {
    const Frame& frame = view_.log.entries[i].frame;
    if (frame.bytes.size() != format_.frame_size()) continue;
    for (std::size_t k = 0; k < view_.compromised_keys.size(); ++k) {
      if (auto plain = try_decrypt(format_, frame, view_.compromised_keys[k])) {
        opened_[i] = Opened{message_id(plain->payload), k};
        break;
      }
    }
  }
}

AnonymityEntry AdversaryAnalysis::sender_anonymity(const MessageId& target, LinkId true_origin,
                                                   const NetworkTruth& truth) const {
  AnonymityEntry entry;
  entry.message = target;
  entry.true_origin = true_origin;
  entry.recipient_candidates = truth.node_count;
  entry.recipient_anonymity = anonymity_from_set_size(truth.node_count);

  auto everyone = [&] {
    std::vector<LinkId> all(truth.node_count);
    std::iota(all.begin(), all.end(), LinkId{0});
    return all;
  };

  std::optional<Tick> earliest;
  std::set<LinkId> seeds;
  for (std::size_t i = 0; i < opened_.size(); ++i) {
    if (!opened_[i] || opened_[i]->id != target) continue;
    const auto& obs = view_.log.entries[i];
    if (!earliest || obs.tick < *earliest) {
      earliest = obs.tick;
      seeds.clear();
    }
    if (obs.tick == *earliest) seeds.insert(obs.link);
  }
  if (!earliest) {
    entry.candidates = everyone();
    entry.sender_anonymity = anonymity_from_set_size(entry.candidates.size());
    return entry;
  }

  // Groups through which the message may have moved without being seen.
  std::vector<const TrustGroup*> hidden;
  for (const auto& g : truth.groups) {
    const bool compromised =
        std::any_of(view_.compromised_keys.begin(), view_.compromised_keys.end(),
                    [&](const GroupKey& k) { return k.key == g.key.key; });
    if (!view_.log.scope.global || !compromised) hidden.push_back(&g);
  }
  std::set<LinkId> closed(seeds.begin(), seeds.end());
  std::deque<LinkId> frontier(seeds.begin(), seeds.end());
  while (!frontier.empty()) {
    const LinkId u = frontier.front();
    frontier.pop_front();
    for (const TrustGroup* g : hidden) {
      if (!g->contains(u)) continue;
      for (NodeId v : g->members) {
        if (closed.insert(v).second) frontier.push_back(v);
      }
    }
  }
  entry.candidates.assign(closed.begin(), closed.end());
  entry.sender_anonymity = anonymity_from_set_size(entry.candidates.size());
  return entry;
}

SocialGraph AdversaryAnalysis::social_graph(const NetworkTruth& truth) const {
  SocialGraph graph;
  std::map<std::size_t, std::set<LinkId>> speakers;  // compromised key -> emitters
  for (std::size_t i = 0; i < opened_.size(); ++i) {
    if (opened_[i]) speakers[opened_[i]->key].insert(view_.log.entries[i].link);
  }
  for (const auto& [key, who] : speakers) {
    for (auto a = who.begin(); a != who.end(); ++a) {
      for (auto b = std::next(a); b != who.end(); ++b) graph.edges.emplace(*a, *b);
    }
  }
  for (const auto& g : truth.groups) {
    const bool compromised =
        std::any_of(view_.compromised_keys.begin(), view_.compromised_keys.end(),
                    [&](const GroupKey& k) { return k.key == g.key.key; });
    if (!compromised) continue;
    for (std::size_t a = 0; a < g.members.size(); ++a) {
      for (std::size_t b = a + 1; b < g.members.size(); ++b) {
        graph.truth_edges.emplace(g.members[a], g.members[b]);
      }
    }
  }
  std::size_t hits = 0;
  for (const auto& e : graph.edges) hits += graph.truth_edges.count(e);
  if (!graph.edges.empty()) {
    graph.precision = static_cast<double>(hits) / static_cast<double>(graph.edges.size());
  }
  graph.recall = graph.truth_edges.empty()
                     ? 0.0
                     : static_cast<double>(hits) / static_cast<double>(graph.truth_edges.size());
  return graph;
}

std::optional<Tick> diffusion_time(std::vector<Tick> holding_ticks, Tick injected,
                                   std::size_t node_count, double p) {
  const auto needed =
      static_cast<std::size_t>(std::ceil(p * static_cast<double>(node_count) - 1e-9));
  if (needed == 0) return 0;
  if (holding_ticks.size() < needed) return std::nullopt;
  std::sort(holding_ticks.begin(), holding_ticks.end());
  return holding_ticks[needed - 1] - injected;
}

PerformanceReport performance_metrics(const RunReport& run) {
  PerformanceReport r;
  const std::size_t n = run.config.nodes.count;

  std::map<MessageId, std::vector<const DeliveryRecord*>> by_message;
  for (const auto& d : run.deliveries) by_message[d.id].push_back(&d);

  std::size_t delivered_pairs = 0;
  std::size_t possible_pairs = 0;
  double latency_sum = 0;
  std::size_t latency_count = 0;
  for (const auto& m : run.messages) {
    if (m.spam) continue;
    MessageMetrics mm;
    mm.id = m.id;
    mm.origin = m.origin;
    mm.injected = m.injected;
    mm.size = m.size;
    std::vector<Tick> holding{m.injected};
    for (const DeliveryRecord* d : by_message[m.id]) {
      if (d->originator) continue;
      ++mm.delivered_nodes;
      mm.latencies.push_back(d->tick - m.injected);
      holding.push_back(d->tick);
    }
    mm.delivery_ratio = n > 1 ? static_cast<double>(mm.delivered_nodes) / static_cast<double>(n - 1) : 1.0;
    if (!mm.latencies.empty()) {
      double s = 0;
      for (Tick l : mm.latencies) s += static_cast<double>(l);
      mm.mean_latency = s / static_cast<double>(mm.latencies.size());
      latency_sum += s;
      latency_count += mm.latencies.size();
    } else {
      ++r.undelivered_messages;
    }
    mm.diffusion_50 = diffusion_time(holding, m.injected, n, 0.5);
    mm.diffusion_90 = diffusion_time(holding, m.injected, n, 0.9);
    mm.diffusion_100 = diffusion_time(holding, m.injected, n, 1.0);
    delivered_pairs += mm.delivered_nodes;
    possible_pairs += n - 1;
    r.messages.push_back(std::move(mm));
  }
  r.delivery_ratio = possible_pairs ? static_cast<double>(delivered_pairs) / static_cast<double>(possible_pairs) : 0.0;
  if (latency_count) r.mean_latency = latency_sum / static_cast<double>(latency_count);

  for (const auto& s : run.node_stats) {
    r.emissions_total += s.emissions;
    r.cover_emissions += s.cover_emissions;
    r.decrypt_attempts.push_back(s.decrypt_attempts);
    r.decrypt_attempts_total += s.decrypt_attempts;
  }
  for (const auto& ev : run.events) {
    if (ev.emitter >= n) ++r.adversary_emissions;
  }
  r.cover_fraction = r.emissions_total ? static_cast<double>(r.cover_emissions) / static_cast<double>(r.emissions_total) : 0.0;
  return r;
}

}  // namespace adtn
