#include "adtn/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>

#include "adtn/random.hpp"

namespace adtn {

using nlohmann::json;

namespace {

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Undefined:
    case YAML::NodeType::Null:
      return nullptr;
    case YAML::NodeType::Scalar: {
      const std::string& s = node.Scalar();
      if (node.Tag() == "!") return s;  // quoted: always a string
      std::int64_t i = 0;
      auto [pi, ei] = std::from_chars(s.data(), s.data() + s.size(), i);
      if (ei == std::errc{} && pi == s.data() + s.size() && !s.empty()) return i;
      double d = 0;
      auto [pd, ed] = std::from_chars(s.data(), s.data() + s.size(), d);
      if (ed == std::errc{} && pd == s.data() + s.size() && !s.empty()) return d;
      if (s == "true" || s == "True") return true;
      if (s == "false" || s == "False") return false;
      if (s == "null" || s == "~") return nullptr;
      return s;
    }
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
  }
  return nullptr;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected a table");
  for (const auto& [key, value] : obj.items()) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!ok) throw ConfigError(join(path, key), "unknown field");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double get_number(const json& obj, const char* key, const std::string& path, double def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_number()) throw ConfigError(join(path, key), "expected a number");
  return v->get<double>();
}

std::int64_t get_int(const json& obj, const char* key, const std::string& path,
                     std::int64_t def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (v->is_number_integer() || v->is_number_unsigned()) return v->get<std::int64_t>();
  if (v->is_number_float()) {
    double d = v->get<double>();
    if (d == static_cast<double>(static_cast<std::int64_t>(d))) return static_cast<std::int64_t>(d);
  }
  throw ConfigError(join(path, key), "expected an integer");
}

std::uint64_t get_uint(const json& obj, const char* key, const std::string& path,
                       std::uint64_t def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  std::int64_t i = get_int(obj, key, path, 0);
  if (i < 0) throw ConfigError(join(path, key), "must be non-negative");
  return static_cast<std::uint64_t>(i);
}

bool get_bool(const json& obj, const char* key, const std::string& path, bool def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v->get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& path,
                       const std::string& def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (v->is_string()) return v->get<std::string>();
  if (v->is_number()) return v->dump();
  throw ConfigError(join(path, key), "expected a string");
}

const json& get_array(const json& obj, const char* key, const std::string& path) {
  static const json empty = json::array();
  const json* v = find(obj, key);
  if (!v) return empty;
  if (!v->is_array()) throw ConfigError(join(path, key), "expected a list");
  return *v;
}

std::vector<Waypoint> parse_waypoints(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ConfigError(path, "expected a list of {tick, x, y}");
  std::vector<Waypoint> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = index_path(path, i);
    check_keys(arr[i], p, {"tick", "x", "y"});
    out.push_back(Waypoint{get_int(arr[i], "tick", p, 0), get_number(arr[i], "x", p, 0),
                           get_number(arr[i], "y", p, 0)});
    if (i > 0 && out[i].tick <= out[i - 1].tick) {
      throw ConfigError(p + ".tick", "waypoint ticks must be strictly increasing");
    }
  }
  if (out.empty()) throw ConfigError(path, "needs at least one waypoint");
  return out;
}

json waypoints_to_json(const std::vector<Waypoint>& wps) {
  json arr = json::array();
  for (const auto& w : wps) arr.push_back({{"tick", w.tick}, {"x", w.x}, {"y", w.y}});
  return arr;
}

const std::map<std::string, AdversaryType>& adversary_types() {
  static const std::map<std::string, AdversaryType> types{
      {"passive", AdversaryType::passive},
      {"garbage", AdversaryType::garbage},
      {"jammer", AdversaryType::jammer},
      {"spammer", AdversaryType::spammer}};
  return types;
}

std::string adversary_type_name(AdversaryType t) {
  for (const auto& [name, type] : adversary_types()) {
    if (type == t) return name;
  }
  return "passive";
}

void check_inside(const ArenaConfig& arena, double x, double y, const std::string& path) {
  if (x < 0 || y < 0 || x > arena.width || y > arena.height) {
    throw ConfigError(path, "position lies outside the arena");
  }
}

}  // namespace

json load_config_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  try {
    if (is_json) return json::parse(text);
    YAML::Node root = YAML::Load(text);
    return yaml_to_json(root);
  } catch (const json::exception& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  } catch (const YAML::Exception& e) {
    throw ConfigError("<root>", std::string("invalid YAML: ") + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set", "expected key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;
  }

  json* cur = &doc;
  std::stringstream segments(key);
  std::string seg;
  std::vector<std::string> parts;
  while (std::getline(segments, seg, '.')) parts.push_back(seg);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    const bool last = i + 1 == parts.size();
    if (cur->is_array()) {
      std::size_t idx = 0;
      auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), idx);
      if (ec != std::errc{} || p != part.data() + part.size() || idx >= cur->size()) {
        throw ConfigError(key, "no list element '" + part + "'");
      }
      cur = &(*cur)[idx];
    } else {
      if (cur->is_null()) *cur = json::object();
      if (!cur->is_object()) throw ConfigError(key, "cannot descend into a scalar");
      cur = &(*cur)[part];
    }
    if (last) *cur = value;
  }
}

ScenarioConfig parse_config(const json& doc) {
  check_keys(doc, "",
             {"seed", "ticks", "frame_size", "tick_seconds", "arena", "radio_range", "nodes",
              "mobility", "groups", "auto_groups", "node", "traffic", "traffic_generator",
              "adversaries", "output", "forget_interval"});
  ScenarioConfig c;
  c.seed = get_uint(doc, "seed", "", c.seed);
  c.ticks = get_int(doc, "ticks", "", c.ticks);
  if (c.ticks <= 0) throw ConfigError("ticks", "must be positive");
  c.frame_size = get_uint(doc, "frame_size", "", c.frame_size);
  try {
    WireFormat check(c.frame_size);
  } catch (const WireError& e) {
    throw ConfigError("frame_size", e.what());
  }
  const WireFormat format(c.frame_size);
  c.tick_seconds = get_number(doc, "tick_seconds", "", c.tick_seconds);
  if (c.tick_seconds <= 0) throw ConfigError("tick_seconds", "must be positive");
  c.radio_range = get_number(doc, "radio_range", "", c.radio_range);
  if (c.radio_range <= 0) throw ConfigError("radio_range", "must be positive");
  c.forget_interval = get_int(doc, "forget_interval", "", c.forget_interval);
  if (c.forget_interval <= 0) throw ConfigError("forget_interval", "must be positive");

  if (const json* a = find(doc, "arena")) {
    check_keys(*a, "arena", {"width", "height", "torus"});
    c.arena.width = get_number(*a, "width", "arena", c.arena.width);
    c.arena.height = get_number(*a, "height", "arena", c.arena.height);
    c.arena.torus = get_bool(*a, "torus", "arena", c.arena.torus);
  }
  if (c.arena.width <= 0) throw ConfigError("arena.width", "must be positive");
  if (c.arena.height <= 0) throw ConfigError("arena.height", "must be positive");

  if (const json* n = find(doc, "nodes")) {
    check_keys(*n, "nodes", {"count", "placement", "positions"});
    c.nodes.count = get_uint(*n, "count", "nodes", c.nodes.count);
    const std::string placement = get_string(*n, "placement", "nodes", "random");
    if (placement == "random") {
      c.nodes.placement = Placement::random;
    } else if (placement == "explicit") {
      c.nodes.placement = Placement::explicit_positions;
      const json& pos = get_array(*n, "positions", "nodes");
      for (std::size_t i = 0; i < pos.size(); ++i) {
        const std::string p = index_path("nodes.positions", i);
        if (!pos[i].is_array() || pos[i].size() != 2 || !pos[i][0].is_number() ||
            !pos[i][1].is_number()) {
          throw ConfigError(p, "expected [x, y]");
        }
        c.nodes.positions.push_back(Position{pos[i][0].get<double>(), pos[i][1].get<double>()});
        check_inside(c.arena, c.nodes.positions.back().x, c.nodes.positions.back().y, p);
      }
      if (!find(*n, "count")) c.nodes.count = c.nodes.positions.size();
      if (c.nodes.positions.size() != c.nodes.count) {
        throw ConfigError("nodes.positions", "expected " + std::to_string(c.nodes.count) +
                                                 " positions, got " +
                                                 std::to_string(c.nodes.positions.size()));
      }
    } else {
      throw ConfigError("nodes.placement", "expected 'random' or 'explicit'");
    }
  }
  if (c.nodes.count == 0) throw ConfigError("nodes.count", "must be positive");

  if (const json* m = find(doc, "mobility")) {
    check_keys(*m, "mobility", {"model", "speed", "speed_min", "speed_max", "pause", "traces"});
    const std::string model = get_string(*m, "model", "mobility", "static");
    if (model == "static") {
      c.mobility.model = MobilityModel::static_positions;
    } else if (model == "random_waypoint") {
      c.mobility.model = MobilityModel::random_waypoint;
    } else if (model == "trace") {
      c.mobility.model = MobilityModel::trace;
    } else {
      throw ConfigError("mobility.model", "expected 'static', 'random_waypoint' or 'trace'");
    }
    c.mobility.speed_min = get_number(*m, "speed_min", "mobility", c.mobility.speed_min);
    c.mobility.speed_max = get_number(*m, "speed_max", "mobility", c.mobility.speed_max);
    // A single `speed` pins both bounds and wins over speed_min/speed_max.
    if (find(*m, "speed")) {
      c.mobility.speed_min = c.mobility.speed_max = get_number(*m, "speed", "mobility", 0);
    }
    c.mobility.pause = get_int(*m, "pause", "mobility", c.mobility.pause);
    const json& traces = get_array(*m, "traces", "mobility");
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const std::string p = index_path("mobility.traces", i);
      c.mobility.traces.push_back(parse_waypoints(traces[i], p));
      for (std::size_t w = 0; w < c.mobility.traces.back().size(); ++w) {
        const auto& wp = c.mobility.traces.back()[w];
        check_inside(c.arena, wp.x, wp.y, index_path(p, w));
      }
    }
  }
  if (c.mobility.speed_min < 0 || c.mobility.speed_max < c.mobility.speed_min) {
    throw ConfigError("mobility.speed_min", "need 0 <= speed_min <= speed_max");
  }
  if (c.mobility.model == MobilityModel::random_waypoint && c.mobility.speed_max <= 0) {
    throw ConfigError("mobility.speed_max", "random_waypoint needs a positive speed");
  }
  if (c.mobility.pause < 0) throw ConfigError("mobility.pause", "must be non-negative");
  if (c.mobility.model == MobilityModel::trace && c.mobility.traces.size() != c.nodes.count) {
    throw ConfigError("mobility.traces", "trace mobility needs one timeline per node");
  }

  if (find(doc, "auto_groups") && find(doc, "groups")) {
    throw ConfigError("auto_groups", "give either groups or auto_groups, not both");
  }
  if (const json* ag = find(doc, "auto_groups")) {
    check_keys(*ag, "auto_groups", {"size", "overlap"});
    AutoGroups auto_groups;
    auto_groups.size = get_uint(*ag, "size", "auto_groups", auto_groups.size);
    auto_groups.overlap = get_uint(*ag, "overlap", "auto_groups", auto_groups.overlap);
    if (auto_groups.size < 2) throw ConfigError("auto_groups.size", "must be at least 2");
    if (auto_groups.overlap >= auto_groups.size) {
      throw ConfigError("auto_groups.overlap", "must be smaller than auto_groups.size");
    }
    const std::size_t stride = auto_groups.size - auto_groups.overlap;
    for (std::size_t start = 0, g = 0; start < c.nodes.count; start += stride, ++g) {
      GroupConfig group;
      group.id = "G" + std::to_string(g);
      for (std::size_t n = start; n < start + auto_groups.size; ++n) {
        group.members.push_back(static_cast<NodeId>(n % c.nodes.count));
      }
      std::sort(group.members.begin(), group.members.end());
      group.members.erase(std::unique(group.members.begin(), group.members.end()),
                          group.members.end());
      c.groups.push_back(std::move(group));
      if (start + auto_groups.size >= c.nodes.count) break;
    }
  } else {
    const json& groups = get_array(doc, "groups", "");
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const std::string p = index_path("groups", g);
      check_keys(groups[g], p, {"id", "members", "key"});
      GroupConfig group;
      group.id = get_string(groups[g], "id", p, "G" + std::to_string(g));
      const json& members = get_array(groups[g], "members", p);
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (!members[i].is_number_integer() || members[i].get<std::int64_t>() < 0) {
          throw ConfigError(p + ".members", "member ids must be non-negative integers");
        }
        group.members.push_back(members[i].get<NodeId>());
      }
      std::sort(group.members.begin(), group.members.end());
      group.members.erase(std::unique(group.members.begin(), group.members.end()),
                          group.members.end());
      const std::string key_hex = get_string(groups[g], "key", p, "");
      if (!key_hex.empty()) {
        Bytes key;
        try {
          key = from_hex(key_hex);
        } catch (const WireError& e) {
          throw ConfigError(p + ".key", e.what());
        }
        if (key.size() != kKeyLen) throw ConfigError(p + ".key", "expected 64 hex digits");
        std::array<std::uint8_t, kKeyLen> arr{};
        std::copy(key.begin(), key.end(), arr.begin());
        group.key = arr;
      }
      c.groups.push_back(std::move(group));
    }
  }
  if (c.groups.empty()) throw ConfigError("groups", "at least one trust group is required");
  for (std::size_t g = 0; g < c.groups.size(); ++g) {
    if (!c.groups[g].key) {
      RandomStream rng(c.seed, "group-key", g);
      std::array<std::uint8_t, kKeyLen> key{};
      rng.fill(key);
      c.groups[g].key = key;
    }
  }
  build_keyrings(resolve_groups(c), c.nodes.count);

  if (const json* n = find(doc, "node")) {
    check_keys(*n, "node",
               {"tx_period", "freshness_age", "overheard_cap", "retransmit_cap", "scheduler",
                "source_cache", "seen_forget", "pool_cap", "key_order"});
    auto& p = c.node;
    p.tx_period = get_int(*n, "tx_period", "node", p.tx_period);
    p.freshness_age = get_int(*n, "freshness_age", "node", p.freshness_age);
    p.overheard_cap =
        static_cast<std::uint32_t>(get_uint(*n, "overheard_cap", "node", p.overheard_cap));
    p.retransmit_cap =
        static_cast<std::uint32_t>(get_uint(*n, "retransmit_cap", "node", p.retransmit_cap));
    // Keep seen_forget consistent with a raised freshness_age unless set.
    p.seen_forget = get_int(*n, "seen_forget", "node", std::max(p.seen_forget, 2 * p.freshness_age));
    p.pool_cap = get_uint(*n, "pool_cap", "node", p.pool_cap);
    const std::string sched = get_string(*n, "scheduler", "node", "fifo");
    if (sched == "fifo") {
      p.scheduler = SchedulerPolicy::fifo;
    } else if (sched == "least_popular") {
      p.scheduler = SchedulerPolicy::least_popular;
    } else {
      throw ConfigError("node.scheduler", "expected 'fifo' or 'least_popular'");
    }
    const std::string order = get_string(*n, "key_order", "node", "declaration");
    if (order == "declaration") {
      p.key_order = KeyOrder::declaration;
    } else if (order == "most_recent_first") {
      p.key_order = KeyOrder::most_recent_first;
    } else {
      throw ConfigError("node.key_order", "expected 'declaration' or 'most_recent_first'");
    }
    if (const json* sc = find(*n, "source_cache")) {
      check_keys(*sc, "node.source_cache", {"enabled", "fail_threshold", "expiry"});
      p.source_cache.enabled = get_bool(*sc, "enabled", "node.source_cache", false);
      p.source_cache.fail_threshold = static_cast<std::uint32_t>(get_uint(
          *sc, "fail_threshold", "node.source_cache", p.source_cache.fail_threshold));
      p.source_cache.expiry = get_int(*sc, "expiry", "node.source_cache", p.source_cache.expiry);
    }
  }
  c.node.validate();

  const json& traffic = get_array(doc, "traffic", "");
  std::map<std::string, std::size_t> literal_seen;
  for (std::size_t i = 0; i < traffic.size(); ++i) {
    const std::string p = index_path("traffic", i);
    check_keys(traffic[i], p, {"tick", "node", "payload", "size"});
    TrafficEntry e;
    e.tick = get_int(traffic[i], "tick", p, 0);
    const std::int64_t node = get_int(traffic[i], "node", p, 0);
    if (node < 0 || static_cast<std::size_t>(node) >= c.nodes.count) {
      throw ConfigError(p + ".node", "node " + std::to_string(node) + " does not exist");
    }
    e.node = static_cast<NodeId>(node);
    if (find(traffic[i], "payload")) {
      e.payload = get_string(traffic[i], "payload", p, "");
      e.size = e.payload->size();
      auto [it, fresh] = literal_seen.emplace(*e.payload, i);
      if (!fresh) {
        throw ConfigError(p + ".payload",
                          "duplicates traffic[" + std::to_string(it->second) + "].payload");
      }
    } else {
      e.size = get_uint(traffic[i], "size", p, 64);
    }
    c.traffic.push_back(std::move(e));
  }
  if (const json* gen = find(doc, "traffic_generator")) {
    check_keys(*gen, "traffic_generator", {"messages", "start", "end", "size"});
    TrafficGenerator tg;
    tg.messages = get_uint(*gen, "messages", "traffic_generator", 0);
    tg.start = get_int(*gen, "start", "traffic_generator", 0);
    tg.end = get_int(*gen, "end", "traffic_generator", 0);
    tg.size = get_uint(*gen, "size", "traffic_generator", tg.size);
    if (tg.end == 0) tg.end = c.ticks;
    if (tg.messages > 0 && (tg.start < 0 || tg.end <= tg.start)) {
      throw ConfigError("traffic_generator.end", "need 0 <= start < end");
    }
    RandomStream rng(c.seed, "traffic");
    std::vector<TrafficEntry> generated;
    for (std::size_t i = 0; i < tg.messages; ++i) {
      TrafficEntry e;
      e.tick = tg.start + static_cast<Tick>(rng.below(static_cast<std::uint64_t>(tg.end - tg.start)));
      e.node = static_cast<NodeId>(rng.below(c.nodes.count));
      e.size = tg.size;
      generated.push_back(e);
    }
    std::stable_sort(generated.begin(), generated.end(),
                     [](const TrafficEntry& a, const TrafficEntry& b) { return a.tick < b.tick; });
    c.traffic.insert(c.traffic.end(), generated.begin(), generated.end());
  }
  for (std::size_t i = 0; i < c.traffic.size(); ++i) {
    const std::string p = index_path("traffic", i);
    if (c.traffic[i].tick < 0 || c.traffic[i].tick >= c.ticks) {
      throw ConfigError(p + ".tick", "outside [0, ticks)");
    }
    if (c.traffic[i].size > format.max_payload()) {
      throw ConfigError(p + ".size", "payload exceeds max_payload " +
                                         std::to_string(format.max_payload()));
    }
  }

  const json& advs = get_array(doc, "adversaries", "");
  std::set<std::string> names;
  for (std::size_t i = 0; i < advs.size(); ++i) {
    const std::string p = index_path("adversaries", i);
    check_keys(advs[i], p,
               {"name", "type", "scope", "keys", "rate", "x", "y", "radius", "start", "end",
                "group", "payload"});
    AdversaryConfig a;
    a.name = get_string(advs[i], "name", p, "adv" + std::to_string(i));
    if (!names.insert(a.name).second) throw ConfigError(p + ".name", "duplicate adversary name");
    const std::string type = get_string(advs[i], "type", p, "passive");
    auto it = adversary_types().find(type);
    if (it == adversary_types().end()) {
      throw ConfigError(p + ".type", "expected passive, garbage, jammer or spammer");
    }
    a.type = it->second;
    a.rate = get_number(advs[i], "rate", p, a.rate);
    a.x = get_number(advs[i], "x", p, 0);
    a.y = get_number(advs[i], "y", p, 0);
    a.radius = get_number(advs[i], "radius", p, 0);
    a.start = get_int(advs[i], "start", p, 0);
    a.end = get_int(advs[i], "end", p, -1);
    a.group = get_string(advs[i], "group", p, "");
    a.payload = get_string(advs[i], "payload", p, "");
    const json& keys = get_array(advs[i], "keys", p);
    for (const auto& k : keys) {
      std::string id = k.is_string() ? k.get<std::string>() : k.dump();
      if (id != "*" && std::none_of(c.groups.begin(), c.groups.end(),
                                    [&](const GroupConfig& g) { return g.id == id; })) {
        throw ConfigError(p + ".keys", "unknown group '" + id + "'");
      }
      a.keys.push_back(id);
    }
    if (const json* s = find(advs[i], "scope")) {
      check_keys(*s, p + ".scope", {"kind", "x", "y", "radius", "trajectory"});
      const std::string kind = get_string(*s, "kind", p + ".scope", "global");
      if (kind == "global") {
        a.scope.global = true;
      } else if (kind == "disk") {
        a.scope.global = false;
        a.scope.x = get_number(*s, "x", p + ".scope", 0);
        a.scope.y = get_number(*s, "y", p + ".scope", 0);
        a.scope.radius = get_number(*s, "radius", p + ".scope", 0);
        if (a.scope.radius <= 0) throw ConfigError(p + ".scope.radius", "must be positive");
        if (const json* tr = find(*s, "trajectory")) {
          a.scope.trajectory = parse_waypoints(*tr, p + ".scope.trajectory");
        }
      } else {
        throw ConfigError(p + ".scope.kind", "expected 'global' or 'disk'");
      }
    }
    if (a.start < 0) throw ConfigError(p + ".start", "must be non-negative");
    if (a.end >= 0 && a.end <= a.start) throw ConfigError(p + ".end", "must exceed start");
    switch (a.type) {
      case AdversaryType::passive:
        break;
      case AdversaryType::garbage:
        if (a.rate <= 0) throw ConfigError(p + ".rate", "must be positive");
        check_inside(c.arena, a.x, a.y, p);
        break;
      case AdversaryType::jammer:
        if (a.radius <= 0) throw ConfigError(p + ".radius", "must be positive");
        break;
      case AdversaryType::spammer:
        if (a.rate <= 0) throw ConfigError(p + ".rate", "must be positive");
        check_inside(c.arena, a.x, a.y, p);
        if (std::none_of(c.groups.begin(), c.groups.end(),
                         [&](const GroupConfig& g) { return g.id == a.group; })) {
          throw ConfigError(p + ".group", "unknown group '" + a.group + "'");
        }
        if (a.payload.empty()) a.payload = "spam:" + a.name;
        if (a.payload.size() > format.max_payload()) {
          throw ConfigError(p + ".payload", "exceeds max_payload");
        }
        break;
    }
    c.adversaries.push_back(std::move(a));
  }

  if (const json* o = find(doc, "output")) {
    check_keys(*o, "output", {"trace_frames"});
    c.output.trace_frames = get_bool(*o, "trace_frames", "output", false);
  }
  return c;
}

json to_json(const ScenarioConfig& c) {
  json doc;
  doc["seed"] = c.seed;
  doc["ticks"] = c.ticks;
  doc["frame_size"] = c.frame_size;
  doc["tick_seconds"] = c.tick_seconds;
  doc["radio_range"] = c.radio_range;
  doc["forget_interval"] = c.forget_interval;
  doc["arena"] = {{"width", c.arena.width}, {"height", c.arena.height}, {"torus", c.arena.torus}};

  json nodes{{"count", c.nodes.count}};
  if (c.nodes.placement == Placement::explicit_positions) {
    nodes["placement"] = "explicit";
    json pos = json::array();
    for (const auto& p : c.nodes.positions) pos.push_back({p.x, p.y});
    nodes["positions"] = pos;
  } else {
    nodes["placement"] = "random";
  }
  doc["nodes"] = nodes;

  json mob;
  switch (c.mobility.model) {
    case MobilityModel::static_positions: mob["model"] = "static"; break;
    case MobilityModel::random_waypoint: mob["model"] = "random_waypoint"; break;
    case MobilityModel::trace: mob["model"] = "trace"; break;
  }
  mob["speed_min"] = c.mobility.speed_min;
  mob["speed_max"] = c.mobility.speed_max;
  mob["pause"] = c.mobility.pause;
  if (!c.mobility.traces.empty()) {
    json traces = json::array();
    for (const auto& t : c.mobility.traces) traces.push_back(waypoints_to_json(t));
    mob["traces"] = traces;
  }
  doc["mobility"] = mob;

  json groups = json::array();
  for (const auto& g : c.groups) {
    groups.push_back({{"id", g.id}, {"members", g.members}, {"key", to_hex(*g.key)}});
  }
  doc["groups"] = groups;

  const auto& p = c.node;
  doc["node"] = {
      {"tx_period", p.tx_period},
      {"freshness_age", p.freshness_age},
      {"overheard_cap", p.overheard_cap},
      {"retransmit_cap", p.retransmit_cap},
      {"scheduler", p.scheduler == SchedulerPolicy::fifo ? "fifo" : "least_popular"},
      {"source_cache",
       {{"enabled", p.source_cache.enabled},
        {"fail_threshold", p.source_cache.fail_threshold},
        {"expiry", p.source_cache.expiry}}},
      {"seen_forget", p.seen_forget},
      {"pool_cap", p.pool_cap},
      {"key_order", p.key_order == KeyOrder::declaration ? "declaration" : "most_recent_first"}};

  json traffic = json::array();
  for (const auto& e : c.traffic) {
    json entry{{"tick", e.tick}, {"node", e.node}};
    if (e.payload) {
      entry["payload"] = *e.payload;
    } else {
      entry["size"] = e.size;
    }
    traffic.push_back(entry);
  }
  doc["traffic"] = traffic;

  json advs = json::array();
  for (const auto& a : c.adversaries) {
    json entry{{"name", a.name}, {"type", adversary_type_name(a.type)}, {"start", a.start},
               {"end", a.end}};
    switch (a.type) {
      case AdversaryType::passive: {
        json scope;
        if (a.scope.global) {
          scope["kind"] = "global";
        } else {
          scope = {{"kind", "disk"}, {"x", a.scope.x}, {"y", a.scope.y}, {"radius", a.scope.radius}};
          if (!a.scope.trajectory.empty()) {
            scope["trajectory"] = waypoints_to_json(a.scope.trajectory);
          }
        }
        entry["scope"] = scope;
        entry["keys"] = a.keys;
        break;
      }
      case AdversaryType::garbage:
        entry["rate"] = a.rate;
        entry["x"] = a.x;
        entry["y"] = a.y;
        entry["radius"] = a.radius;
        break;
      case AdversaryType::jammer:
        entry["x"] = a.x;
        entry["y"] = a.y;
        entry["radius"] = a.radius;
        break;
      case AdversaryType::spammer:
        entry["rate"] = a.rate;
        entry["x"] = a.x;
        entry["y"] = a.y;
        entry["radius"] = a.radius;
        entry["group"] = a.group;
        entry["payload"] = a.payload;
        break;
    }
    advs.push_back(entry);
  }
  doc["adversaries"] = advs;
  doc["output"] = {{"trace_frames", c.output.trace_frames}};
  return doc;
}

std::string run_id(const ScenarioConfig& config) {
  const std::string text = to_json(config).dump();
  const auto digest = sha256(as_bytes(text));
  return to_hex(std::span<const std::uint8_t>(digest).first(12));
}

std::vector<TrustGroup> resolve_groups(const ScenarioConfig& config) {
  std::vector<TrustGroup> out;
  for (const auto& g : config.groups) {
    TrustGroup group;
    group.group_id = g.id;
    group.members = g.members;
    group.key.group_id = g.id;
    if (g.key) group.key.key = *g.key;
    out.push_back(std::move(group));
  }
  return out;
}

Bytes traffic_payload(const ScenarioConfig& config, std::size_t index) {
  const TrafficEntry& e = config.traffic.at(index);
  if (e.payload) return Bytes(e.payload->begin(), e.payload->end());
  Bytes out(e.size);
  RandomStream rng(config.seed, "payload", index);
  rng.fill(out);
  return out;
}

Bytes spammer_payload(const ScenarioConfig& config, std::size_t adversary_index) {
  const auto& a = config.adversaries.at(adversary_index);
  return Bytes(a.payload.begin(), a.payload.end());
}

}  // namespace adtn
