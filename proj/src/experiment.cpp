#include "adtn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "adtn/adversary.hpp"
#include "adtn/netsim.hpp"
#include "adtn/oracle.hpp"
#include "adtn/report.hpp"

namespace adtn {

using nlohmann::json;

namespace {

// Maps library exceptions onto exit codes with a message-class prefix.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const TraceError& e) {
    err << "trace error: " << e.what() << "\n";
    return kExitTrace;
  } catch (const WireError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

json build_document(const ScenarioSource& source) {
  json doc = load_config_document(source.path);
  for (const auto& o : source.overrides) apply_override(doc, o);
  if (source.seed) doc["seed"] = *source.seed;
  if (source.trace_frames) doc["output"]["trace_frames"] = true;
  return doc;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("ADTN_SIM_THREADS")) n = std::strtoul(env, nullptr, 10);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

}  // namespace

ScenarioConfig load_scenario(const ScenarioSource& source) {
  return parse_config(build_document(source));
}

const std::vector<std::string>& sweepable_parameters() {
  static const std::vector<std::string> params{"auto_groups.size", "node.tx_period",
                                               "node.freshness_age", "frame_size",
                                               "nodes.count", "mobility.speed"};
  return params;
}

int cmd_run(const RunCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig config = load_scenario(cmd.scenario);
    const RunReport run = run_scenario(config);
    const PerformanceReport perf = performance_metrics(run);
    const auto adversaries = evaluate_configured_adversaries(run);
    write_run_outputs(run, perf, adversaries, cmd.out_dir);
    out << "run " << run.run_id << ": " << perf.messages.size() << " messages, delivery ratio "
        << format_double(perf.delivery_ratio) << ", cover fraction "
        << format_double(perf.cover_fraction) << " -> " << cmd.out_dir << "\n";
    return kExitOk;
  });
}

int cmd_sweep(const SweepCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (cmd.grid.empty()) throw ConfigError("--grid", "empty parameter grid");
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    for (const auto& spec : cmd.grid) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) throw ConfigError("--grid", "expected key=v1,v2,... got '" + spec + "'");
      const std::string key = spec.substr(0, eq);
      const auto& allowed = sweepable_parameters();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ConfigError("--grid", "unknown sweep parameter '" + key + "'");
      }
      auto values = split(spec.substr(eq + 1), ',');
      if (values.empty()) throw ConfigError("--grid", "no values for '" + key + "'");
      axes.emplace_back(key, std::move(values));
    }

    const json base = build_document(cmd.scenario);
    const std::uint64_t base_seed = parse_config(base).seed;

    // Expand the grid (first axis varies slowest) and validate every point
    // before running anything.
    std::size_t points = 1;
    for (const auto& a : axes) points *= a.second.size();
    std::vector<ScenarioConfig> configs;
    std::vector<std::vector<std::string>> assignments;
    for (std::size_t i = 0; i < points; ++i) {
      json doc = base;
      std::vector<std::string> values;
      std::size_t rest = i;
      for (std::size_t a = axes.size(); a-- > 0;) {
        const auto& [key, vals] = axes[a];
        values.insert(values.begin(), vals[rest % vals.size()]);
        rest /= vals.size();
      }
      for (std::size_t a = 0; a < axes.size(); ++a) {
        // A group-size axis switches the scenario to generated groups.
        if (axes[a].first == "auto_groups.size") doc.erase("groups");
        apply_override(doc, axes[a].first + "=" + values[a]);
      }
      doc["seed"] = base_seed + i;
      configs.push_back(parse_config(doc));
      assignments.push_back(std::move(values));
    }

    std::vector<std::string> rows(points);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::size_t i = next++; i < points; i = next++) {
        try {
          const RunReport run = run_scenario(configs[i]);
          const PerformanceReport perf = performance_metrics(run);
          double diffusion = 0;
          std::size_t reached = 0;
          for (const auto& m : perf.messages) {
            if (m.diffusion_90) {
              diffusion += static_cast<double>(*m.diffusion_90);
              ++reached;
            }
          }
          std::ostringstream row;
          row << i << "," << configs[i].seed;
          for (const auto& v : assignments[i]) row << "," << v;
          row << "," << run.run_id << "," << format_double(perf.delivery_ratio) << ","
              << format_optional(perf.mean_latency) << ","
              << (reached ? format_double(diffusion / static_cast<double>(reached)) : std::string())
              << "," << perf.undelivered_messages << "," << perf.emissions_total << ","
              << format_double(perf.cover_fraction) << "," << perf.decrypt_attempts_total << ","
              << format_double(static_cast<double>(perf.decrypt_attempts_total) /
                               static_cast<double>(configs[i].nodes.count));
          rows[i] = row.str();
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    const std::size_t n_workers = worker_count(cmd.threads, points);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::ostringstream csv;
    csv << "index,seed";
    for (const auto& a : axes) csv << "," << a.first;
    csv << ",run_id,delivery_ratio,mean_latency_ticks,mean_diffusion_90_ticks,"
           "undelivered_messages,emissions_total,cover_fraction,decrypt_attempts_total,"
           "decrypt_attempts_per_node\n";
    for (const auto& r : rows) csv << r << "\n";
    std::error_code ec;
    std::filesystem::create_directories(cmd.out_dir, ec);
    if (ec) throw IoError("cannot create '" + cmd.out_dir + "': " + ec.message());
    write_text_file(std::filesystem::path(cmd.out_dir) / "sweep.csv", csv.str());
    std::vector<std::string> params;
    for (const auto& a : axes) params.push_back(a.first);
    write_text_file(std::filesystem::path(cmd.out_dir) / "metrics.md", metrics_markdown({}, params));
    out << "sweep: " << points << " points on " << n_workers << " worker(s) -> " << cmd.out_dir
        << "/sweep.csv\n";
    return kExitOk;
  });
}

namespace {

ObservationScope parse_scope(const std::string& spec) {
  ObservationScope scope;
  if (spec == "global") return scope;
  if (spec.rfind("disk:", 0) == 0) {
    const auto parts = split(spec.substr(5), ',');
    if (parts.size() == 3) {
      try {
        scope.global = false;
        scope.center = {std::stod(parts[0]), std::stod(parts[1])};
        scope.radius = std::stod(parts[2]);
        if (scope.radius > 0) return scope;
      } catch (const std::exception&) {
      }
    }
  }
  throw ConfigError("--scope", "expected 'global' or 'disk:x,y,radius', got '" + spec + "'");
}

}  // namespace

int cmd_attack(const AttackCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (cmd.adversary != "external" && cmd.adversary != "internal") {
      throw ConfigError("--adversary", "expected 'external' or 'internal'");
    }
    if (cmd.adversary == "external" && !cmd.keys.empty()) {
      throw ConfigError("--keys", "an external adversary holds no keys");
    }
    if (cmd.adversary == "internal" && cmd.keys.empty()) {
      throw ConfigError("--keys", "an internal adversary needs at least one group key");
    }
    const ObservationScope scope = parse_scope(cmd.scope);
    if (!std::filesystem::is_directory(cmd.trace_dir)) {
      throw IoError("trace directory '" + cmd.trace_dir + "' does not exist");
    }
    const TraceData trace = read_trace(cmd.trace_dir);
    if (cmd.scenario) {
      const std::string expected = run_id(load_scenario(*cmd.scenario));
      if (expected != trace.run_id) {
        throw TraceError("trace run " + trace.run_id + " does not match scenario run " + expected);
      }
    }
    if (!trace.has_frames) {
      throw TraceError("trace has no frames; rerun the scenario with --trace-frames");
    }
    for (const auto& k : cmd.keys) {
      if (k != "*" && std::none_of(trace.groups.begin(), trace.groups.end(),
                                   [&](const TrustGroup& g) { return g.group_id == k; })) {
        throw ConfigError("--keys", "unknown group '" + k + "'");
      }
    }

    ScenarioConfig shape;
    shape.seed = trace.seed;
    shape.frame_size = trace.frame_size;
    shape.arena = trace.arena;
    const NetworkTruth truth{trace.node_count, trace.groups};
    const AdversaryReport report =
        evaluate_adversary(cmd.name, cmd.keys, scope, trace.events, trace.messages, truth, shape);
    write_anonymity_outputs(report, trace.run_id, trace.arena, cmd.out_dir);

    std::size_t identified = 0;
    for (const auto& e : report.anonymity) identified += e.identified();
    out << "attack " << cmd.name << " (" << cmd.adversary << ") on run " << trace.run_id << ": "
        << report.observed_frames << " frames observed, " << report.anonymity.size()
        << " messages, " << identified << " originators identified -> " << cmd.out_dir << "\n";
    return kExitOk;
  });
}

int cmd_oracle(const OracleCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const ScenarioConfig config = load_scenario(cmd.scenario);
    const OracleComparison cmp = compare_with_oracle(config);
    if (!cmp.valid) {
      out << "oracle-invalid: " << cmp.invalid_reason << "\n";
      return kExitOk;
    }
    auto cell = [](const std::optional<Tick>& t) { return t ? std::to_string(*t) : std::string("unreachable"); };
    out << "node oracle protocol\n";
    for (std::size_t n = 0; n < cmp.oracle.size(); ++n) {
      const bool differs = cmp.oracle[n] != cmp.protocol[n];
      out << n << " " << cell(cmp.oracle[n]) << " " << cell(cmp.protocol[n]) << (differs ? " DIFF" : "")
          << "\n";
    }
    if (!cmp.mismatches.empty()) {
      err << "oracle mismatch on " << cmp.mismatches.size() << " node(s)\n";
      return kExitOracleMismatch;
    }
    out << "oracle agrees\n";
    return kExitOk;
  });
}

}  // namespace adtn
