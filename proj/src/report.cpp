#include "adtn/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace adtn {

using nlohmann::json;

namespace {

json scope_json(const ObservationScope& s) {
  if (s.global) return {{"kind", "global"}};
  json j{{"kind", "disk"}, {"x", s.center.x}, {"y", s.center.y}, {"radius", s.radius}};
  if (!s.trajectory.empty()) {
    json t = json::array();
    for (const auto& w : s.trajectory) t.push_back({{"tick", w.tick}, {"x", w.x}, {"y", w.y}});
    j["trajectory"] = t;
  }
  return j;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

std::string group_name(const std::vector<TrustGroup>& groups, std::optional<std::size_t> g) {
  return g && *g < groups.size() ? groups[*g].group_id : std::string();
}

MessageId parse_message_id(const std::string& hex) {
  MessageId id;
  const Bytes raw = from_hex(hex);
  if (raw.size() != id.digest.size()) throw TraceError("bad message id '" + hex + "'");
  std::copy(raw.begin(), raw.end(), id.digest.begin());
  return id;
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path.string() + "'");
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw TraceError("malformed line in '" + path.string() + "': " + e.what());
    }
  }
  if (out.empty() || !out.front().contains("run_id")) {
    throw TraceError("'" + path.string() + "' has no run header");
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::string format_optional(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_for_write(path);
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

AdversaryReport evaluate_adversary(const std::string& name, const std::vector<std::string>& key_ids,
                                   const ObservationScope& scope,
                                   std::span<const EmissionEvent> events,
                                   std::span<const MessageTruth> messages,
                                   const NetworkTruth& truth, const ScenarioConfig& config) {
  AdversaryReport report;
  report.name = name;
  report.scope = scope;
  AdversaryView view;
  const bool all = std::find(key_ids.begin(), key_ids.end(), "*") != key_ids.end();
  for (const auto& g : truth.groups) {
    if (all || std::find(key_ids.begin(), key_ids.end(), g.group_id) != key_ids.end()) {
      view.compromised_keys.push_back(g.key);
      report.keys.push_back(g.group_id);
    }
  }
  view.log = observe(events, scope, config.arena);
  report.observed_frames = view.log.entries.size();
  report.linker = equality_linker(view.log, events);
  report.distinguishability = distinguishability_test(view.log, events, config.seed);

  const AdversaryAnalysis analysis(std::move(view), WireFormat(config.frame_size));
  for (const auto& m : messages) {
    if (m.spam) continue;
    report.anonymity.push_back(analysis.sender_anonymity(m.id, m.origin, truth));
  }
  report.social = analysis.social_graph(truth);
  return report;
}

std::vector<AdversaryReport> evaluate_configured_adversaries(const RunReport& run) {
  std::vector<AdversaryReport> out;
  const NetworkTruth truth = network_truth(run);
  for (const auto& a : run.config.adversaries) {
    if (a.type != AdversaryType::passive) continue;
    out.push_back(evaluate_adversary(a.name, a.keys, ObservationScope::from_config(a.scope),
                                     run.events, run.messages, truth, run.config));
  }
  return out;
}

json to_json(const AdversaryReport& r, const ArenaConfig&) {
  json j;
  j["name"] = r.name;
  j["kind"] = r.internal() ? "internal" : "external";
  j["keys"] = r.keys;
  j["scope"] = scope_json(r.scope);
  j["observed_frames"] = r.observed_frames;

  json pairs = json::array();
  for (const auto& [a, b] : r.linker.pairs) pairs.push_back({a, b});
  j["equality_linker"] = {{"linked_pairs", r.linker.pairs.size()},
                          {"true_links", r.linker.true_links},
                          {"precision", optional_json(r.linker.precision)},
                          {"pairs", pairs}};

  const auto& d = r.distinguishability;
  j["distinguishability"] = {{"status", to_string(d.status)},
                             {"frames", d.frames},
                             {"cover", d.cover},
                             {"real", d.real},
                             {"chi2_statistic", d.chi2_statistic},
                             {"chi2_dof", d.chi2_dof},
                             {"chi2_p_value", d.chi2_p_value},
                             {"min_position_p_value", d.min_position_p_value},
                             {"positions_below_0.01", d.positions_below_001},
                             {"classifier_accuracy", optional_json(d.classifier_accuracy)},
                             {"classifier_samples", d.classifier_samples}};

  json anon = json::array();
  double sum = 0;
  std::size_t identified = 0;
  std::size_t unsound = 0;
  for (const auto& e : r.anonymity) {
    anon.push_back({{"message_id", e.message.hex()},
                    {"true_origin", e.true_origin},
                    {"candidates", e.candidates},
                    {"sender_anonymity", e.sender_anonymity},
                    {"recipient_candidates", e.recipient_candidates},
                    {"recipient_anonymity", e.recipient_anonymity},
                    {"identified_originator",
                     e.identified() ? json(e.candidates.front()) : json(nullptr)}});
    sum += e.sender_anonymity;
    identified += e.identified();
    unsound += !e.sound();
  }
  j["anonymity"] = {{"messages", anon},
                    {"mean_sender_anonymity",
                     r.anonymity.empty() ? json(nullptr) : json(sum / static_cast<double>(r.anonymity.size()))},
                    {"identified_originators", identified},
                    {"unsound_candidate_sets", unsound}};

  json edges = json::array();
  for (const auto& [a, b] : r.social.edges) edges.push_back({a, b});
  j["social_graph"] = {{"edges", edges},
                       {"truth_edges", r.social.truth_edges.size()},
                       {"precision", optional_json(r.social.precision)},
                       {"recall", r.social.recall}};
  return j;
}

json summary_json(const RunReport& run, const PerformanceReport& perf,
                  const std::vector<AdversaryReport>& adversaries) {
  json j;
  j["run_id"] = run.run_id;
  j["config"] = to_json(run.config);
  j["metrics"] = {{"delivery_ratio", perf.delivery_ratio},
                  {"mean_latency_ticks", optional_json(perf.mean_latency)},
                  {"mean_latency_seconds",
                   perf.mean_latency ? json(*perf.mean_latency * run.config.tick_seconds) : json(nullptr)},
                  {"messages", perf.messages.size()},
                  {"undelivered_messages", perf.undelivered_messages},
                  {"emissions_total", perf.emissions_total},
                  {"cover_emissions", perf.cover_emissions},
                  {"cover_fraction", perf.cover_fraction},
                  {"adversary_emissions", perf.adversary_emissions},
                  {"decrypt_attempts_total", perf.decrypt_attempts_total}};
  json nodes = json::array();
  for (std::size_t n = 0; n < run.node_stats.size(); ++n) {
    const auto& s = run.node_stats[n];
    nodes.push_back({{"id", n},
                     {"phase", run.phases[n]},
                     {"emissions", s.emissions},
                     {"cover_emissions", s.cover_emissions},
                     {"receptions", s.receptions},
                     {"readable_receptions", s.readable_receptions},
                     {"decrypt_attempts", s.decrypt_attempts},
                     {"skipped_frames", s.skipped_frames},
                     {"deliveries", s.deliveries},
                     {"stale_drops", s.stale_drops},
                     {"overflow_drops", s.overflow_drops}});
  }
  j["nodes"] = nodes;
  json advs = json::array();
  for (const auto& a : adversaries) advs.push_back(to_json(a, run.config.arena));
  j["adversaries"] = advs;
  json links = json::array();
  for (const auto& [name, link] : run.adversary_links) links.push_back({{"name", name}, {"link", link}});
  j["adversary_links"] = links;
  return j;
}

std::string metrics_markdown(const std::vector<std::string>& adversary_names,
                             const std::vector<std::string>& sweep_parameters) {
  std::ostringstream md;
  md << "# Output columns\n\n"
     << "Ticks are simulation quanta; multiply by `tick_seconds` from the echoed config for "
        "seconds.\n\n"
     << "## metrics.csv (one row per node-originated message)\n\n"
     << "| column | meaning |\n|---|---|\n"
     << "| message_id | hex SHA-256 of length-prefixed payload |\n"
     << "| origin | originating node id |\n"
     << "| injected_tick | tick the message was submitted |\n"
     << "| payload_size | payload octets |\n"
     << "| delivered_nodes | nodes other than the originator that delivered it |\n"
     << "| delivery_ratio | delivered_nodes / (N - 1) |\n"
     << "| mean_latency_ticks | mean delivery tick minus injection tick; empty if undelivered |\n"
     << "| diffusion_50_ticks | ticks until at least 50% of nodes hold it; empty if never |\n"
     << "| diffusion_90_ticks | same for 90% |\n"
     << "| diffusion_100_ticks | same for every node |\n";
  for (const auto& name : adversary_names) {
    md << "| " << name << "_candidates | size of adversary `" << name
       << "`'s sender candidate set |\n"
       << "| " << name << "_sender_anonymity | 1 - 1/" << name << "_candidates |\n"
       << "| " << name << "_recipient_anonymity | 1 - 1/N (no attack narrows recipients) |\n";
  }
  md << "\n## anonymity.csv (written by `attack`)\n\n"
     << "| column | meaning |\n|---|---|\n"
     << "| message_id | hex message id |\n"
     << "| true_origin | ground-truth originator (scoring only) |\n"
     << "| candidates | sender candidate set size |\n"
     << "| sender_anonymity | 1 - 1/candidates |\n"
     << "| recipient_anonymity | 1 - 1/N |\n"
     << "| identified_originator | the single candidate when the set has size 1, else empty |\n"
     << "\n## sweep.csv (written by `sweep`)\n\n"
     << "| column | meaning |\n|---|---|\n"
     << "| index | grid point number; its seed is base seed + index |\n"
     << "| seed | seed used for this point |\n";
  if (sweep_parameters.empty()) md << "| <parameter> | value of each swept parameter |\n";
  for (const auto& param : sweep_parameters) md << "| " << param << " | swept value of `" << param << "` |\n";
  md << "| run_id | identifier of the resolved config; equals `run` with the same --set/--seed |\n"
     << "| delivery_ratio | delivered (message, node) pairs / possible pairs |\n"
     << "| mean_latency_ticks | mean over all deliveries |\n"
     << "| mean_diffusion_90_ticks | mean over messages that reached 90% of nodes |\n"
     << "| undelivered_messages | messages no other node delivered |\n"
     << "| emissions_total | frames emitted by protocol nodes |\n"
     << "| cover_fraction | cover frames / emissions_total |\n"
     << "| decrypt_attempts_total | trial decryptions across all nodes |\n"
     << "| decrypt_attempts_per_node | decrypt_attempts_total / N |\n";
  return md.str();
}

void write_run_outputs(const RunReport& run, const PerformanceReport& perf,
                       const std::vector<AdversaryReport>& adversaries,
                       const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  write_text_file(out_dir / "summary.json", summary_json(run, perf, adversaries).dump(2) + "\n");

  std::vector<std::string> names;
  for (const auto& a : adversaries) names.push_back(a.name);
  {
    std::ostringstream csv;
    csv << "message_id,origin,injected_tick,payload_size,delivered_nodes,delivery_ratio,"
           "mean_latency_ticks,diffusion_50_ticks,diffusion_90_ticks,diffusion_100_ticks";
    for (const auto& n : names) {
      csv << "," << n << "_candidates," << n << "_sender_anonymity," << n << "_recipient_anonymity";
    }
    csv << "\n";
    auto tick_cell = [](const std::optional<Tick>& t) { return t ? std::to_string(*t) : std::string(); };
    for (std::size_t i = 0; i < perf.messages.size(); ++i) {
      const auto& m = perf.messages[i];
      csv << m.id.hex() << "," << m.origin << "," << m.injected << "," << m.size << ","
          << m.delivered_nodes << "," << format_double(m.delivery_ratio) << ","
          << format_optional(m.mean_latency) << "," << tick_cell(m.diffusion_50) << ","
          << tick_cell(m.diffusion_90) << "," << tick_cell(m.diffusion_100);
      for (const auto& a : adversaries) {
        const auto& e = a.anonymity.at(i);
        csv << "," << e.candidates.size() << "," << format_double(e.sender_anonymity) << ","
            << format_double(e.recipient_anonymity);
      }
      csv << "\n";
    }
    write_text_file(out_dir / "metrics.csv", csv.str());
  }
  write_text_file(out_dir / "metrics.md", metrics_markdown(names));

  {
    json groups = json::array();
    for (const auto& g : run.groups) {
      groups.push_back({{"id", g.group_id}, {"members", g.members}, {"key", to_hex(g.key.key)}});
    }
    json doc{{"run_id", run.run_id},
             {"node_count", run.config.nodes.count},
             {"frame_size", run.config.frame_size},
             {"seed", run.config.seed},
             {"arena",
              {{"width", run.config.arena.width},
               {"height", run.config.arena.height},
               {"torus", run.config.arena.torus}}},
             {"groups", groups}};
    write_text_file(out_dir / "groups.json", doc.dump(2) + "\n");
  }

  {
    auto out = open_for_write(out_dir / "messages.jsonl");
    out << json{{"run_id", run.run_id}, {"record", "header"}}.dump() << "\n";
    for (const auto& m : run.messages) {
      json delivered = json::array();
      for (const auto& d : run.deliveries) {
        if (d.id == m.id && !d.originator) delivered.push_back({d.node, d.tick});
      }
      out << json{{"message_id", m.id.hex()}, {"origin", m.origin}, {"injected", m.injected},
                  {"size", m.size},          {"spam", m.spam},     {"delivered", delivered}}
                 .dump()
          << "\n";
    }
    if (!out) throw IoError("failed writing messages.jsonl");
  }

  {
    auto out = open_for_write(out_dir / "events.jsonl");
    out << json{{"run_id", run.run_id},
                {"record", "header"},
                {"frames", run.config.output.trace_frames && run.frames_kept}}
               .dump()
        << "\n";
    const bool frames = run.config.output.trace_frames && run.frames_kept;
    for (const auto& ev : run.events) {
      json line{{"seq", ev.seq},
                {"tick", ev.tick},
                {"emitter", ev.emitter},
                {"x", ev.position.x},
                {"y", ev.position.y},
                {"receivers", ev.receivers},
                {"kind", to_string(ev.kind)}};
      if (frames) line["frame_hex"] = to_hex(ev.frame.bytes);
      if (ev.message) line["message_id"] = ev.message->hex();
      if (ev.group) line["group"] = group_name(run.groups, ev.group);
      out << line.dump() << "\n";
    }
    if (!out) throw IoError("failed writing events.jsonl");
  }

  for (const auto& a : run.config.adversaries) {
    if (a.type != AdversaryType::passive || !run.frames_kept) continue;
    const ObservationScope scope = ObservationScope::from_config(a.scope);
    const ObservationLog log = observe(run.events, scope, run.config.arena);
    auto out = open_for_write(out_dir / ("observed_" + a.name + ".jsonl"));
    out << json{{"run_id", run.run_id}, {"record", "header"}, {"adversary", a.name},
                {"scope", scope_json(scope)}}
               .dump()
        << "\n";
    for (const auto& o : log.entries) {
      out << json{{"seq", o.seq}, {"tick", o.tick}, {"link", o.link}, {"x", o.position.x},
                  {"y", o.position.y}, {"frame_hex", to_hex(o.frame.bytes)}}
                 .dump()
          << "\n";
    }
    if (!out) throw IoError("failed writing observation log");
  }
}

void write_anonymity_outputs(const AdversaryReport& report, const std::string& run_id,
                             const ArenaConfig& arena, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  json doc = to_json(report, arena);
  doc["run_id"] = run_id;
  write_text_file(out_dir / "anonymity.json", doc.dump(2) + "\n");
  std::ostringstream csv;
  csv << "message_id,true_origin,candidates,sender_anonymity,recipient_anonymity,"
         "identified_originator\n";
  for (const auto& e : report.anonymity) {
    csv << e.message.hex() << "," << e.true_origin << "," << e.candidates.size() << ","
        << format_double(e.sender_anonymity) << "," << format_double(e.recipient_anonymity) << ","
        << (e.identified() ? std::to_string(e.candidates.front()) : std::string()) << "\n";
  }
  write_text_file(out_dir / "anonymity.csv", csv.str());
  write_text_file(out_dir / "metrics.md", metrics_markdown({}));
}

TraceData read_trace(const std::filesystem::path& dir) {
  TraceData data;
  const auto groups_path = dir / "groups.json";
  std::ifstream gin(groups_path);
  if (!gin) throw IoError("cannot open trace file '" + groups_path.string() + "'");
  json groups;
  try {
    groups = json::parse(gin);
    data.run_id = groups.at("run_id").get<std::string>();
    data.node_count = groups.at("node_count").get<std::size_t>();
    data.frame_size = groups.at("frame_size").get<std::size_t>();
    data.seed = groups.at("seed").get<std::uint64_t>();
    data.arena.width = groups.at("arena").at("width").get<double>();
    data.arena.height = groups.at("arena").at("height").get<double>();
    data.arena.torus = groups.at("arena").at("torus").get<bool>();
    for (const auto& g : groups.at("groups")) {
      TrustGroup tg;
      tg.group_id = g.at("id").get<std::string>();
      tg.members = g.at("members").get<std::vector<NodeId>>();
      tg.key.group_id = tg.group_id;
      const Bytes key = from_hex(g.at("key").get<std::string>());
      if (key.size() != kKeyLen) throw TraceError("bad key in groups.json");
      std::copy(key.begin(), key.end(), tg.key.key.begin());
      data.groups.push_back(std::move(tg));
    }
  } catch (const json::exception& e) {
    throw TraceError(std::string("malformed groups.json: ") + e.what());
  }

  auto check_run = [&](const json& header, const char* file) {
    if (header.at("run_id").get<std::string>() != data.run_id) {
      throw TraceError(std::string(file) + " belongs to run " + header.at("run_id").get<std::string>() +
                       ", groups.json to run " + data.run_id);
    }
  };

  try {
    const auto messages = read_jsonl(dir / "messages.jsonl");
    check_run(messages.front(), "messages.jsonl");
    for (std::size_t i = 1; i < messages.size(); ++i) {
      const auto& m = messages[i];
      data.messages.push_back(MessageTruth{parse_message_id(m.at("message_id").get<std::string>()),
                                           m.at("origin").get<LinkId>(), m.at("injected").get<Tick>(),
                                           m.at("size").get<std::size_t>(), m.at("spam").get<bool>()});
    }

    const auto events = read_jsonl(dir / "events.jsonl");
    check_run(events.front(), "events.jsonl");
    data.has_frames = events.front().value("frames", false);
    for (std::size_t i = 1; i < events.size(); ++i) {
      const auto& e = events[i];
      EmissionEvent ev;
      ev.seq = e.at("seq").get<std::uint64_t>();
      ev.tick = e.at("tick").get<Tick>();
      ev.emitter = e.at("emitter").get<LinkId>();
      ev.position = {e.at("x").get<double>(), e.at("y").get<double>()};
      ev.receivers = e.at("receivers").get<std::vector<NodeId>>();
      const std::string kind = e.at("kind").get<std::string>();
      ev.kind = kind == "real"      ? EmissionKind::real
                : kind == "garbage" ? EmissionKind::garbage
                : kind == "spam"    ? EmissionKind::spam
                                    : EmissionKind::cover;
      if (e.contains("frame_hex")) ev.frame.bytes = from_hex(e.at("frame_hex").get<std::string>());
      if (e.contains("message_id")) ev.message = parse_message_id(e.at("message_id").get<std::string>());
      if (e.contains("group")) {
        const std::string g = e.at("group").get<std::string>();
        for (std::size_t k = 0; k < data.groups.size(); ++k) {
          if (data.groups[k].group_id == g) ev.group = k;
        }
      }
      if (ev.seq != data.events.size()) throw TraceError("events.jsonl is not in emission order");
      data.events.push_back(std::move(ev));
    }
  } catch (const json::exception& e) {
    throw TraceError(std::string("malformed trace: ") + e.what());
  } catch (const WireError& e) {
    throw TraceError(std::string("malformed trace: ") + e.what());
  }
  return data;
}

}  // namespace adtn
