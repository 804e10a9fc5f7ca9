#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "adtn/config.hpp"
#include "fixtures.hpp"

namespace adtn {
namespace {

using testing::json;
using testing::parse;

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "adtn_config_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}

json minimal() {
  return json{{"nodes", {{"count", 4}}},
              {"groups", json::array({{{"id", "A"}, {"members", {0, 1, 2, 3}}}})}};
}

std::string field_of(const json& doc) {
  try {
    parse(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

TEST(Config, YamlScalarsAreTyped) {
  const auto path = write_temp("s.yaml",
                               "seed: 9\n"
                               "ticks: 50\n"
                               "radio_range: 12.5\n"
                               "arena: {width: 100, height: 100, torus: true}\n"
                               "nodes: {count: 3}\n"
                               "groups:\n"
                               "  - {id: '7', members: [0, 1, 2]}\n"
                               "traffic:\n"
                               "  - {tick: 1, node: 0, payload: hello}\n");
  const auto cfg = parse(load_config_document(path.string()));
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.ticks, 50);
  EXPECT_DOUBLE_EQ(cfg.radio_range, 12.5);
  EXPECT_TRUE(cfg.arena.torus);
  EXPECT_EQ(cfg.groups[0].id, "7");
  EXPECT_EQ(cfg.traffic[0].payload, "hello");
}

TEST(Config, JsonByExtension) {
  const auto path = write_temp("s.json", minimal().dump());
  EXPECT_EQ(parse(load_config_document(path.string())).nodes.count, 4u);
}

TEST(Config, MissingFileIsIoError) {
  EXPECT_THROW(load_config_document("/nonexistent/scenario.yaml"), IoError);
}

TEST(Config, BrokenSyntaxIsConfigError) {
  EXPECT_THROW(load_config_document(write_temp("bad.yaml", "a: [1, 2\n").string()), ConfigError);
  EXPECT_THROW(load_config_document(write_temp("bad.json", "{\"a\": ").string()), ConfigError);
}

TEST(Config, ErrorsNameTheField) {
  auto doc = minimal();
  doc["groups"][0]["members"] = {0, 1, 2, 3, 9};
  EXPECT_EQ(field_of(doc), "groups[0].members");
  doc = minimal();
  doc["frame_size"] = 63;
  EXPECT_EQ(field_of(doc), "frame_size");
  doc = minimal();
  doc["node"] = {{"tx_periods", 3}};
  EXPECT_EQ(field_of(doc), "node.tx_periods");
  doc = minimal();
  doc["bogus"] = 1;
  EXPECT_EQ(field_of(doc), "bogus");
  doc = minimal();
  doc["traffic"] = json::array({{{"tick", 0}, {"node", 7}, {"payload", "x"}}});
  EXPECT_EQ(field_of(doc), "traffic[0].node");
  doc = minimal();
  doc["nodes"]["count"] = 5;
  EXPECT_EQ(field_of(doc), "groups");
  doc = minimal();
  doc["node"] = {{"scheduler", "random"}};
  EXPECT_EQ(field_of(doc), "node.scheduler");
  doc = minimal();
  doc["auto_groups"] = {{"size", 2}};
  EXPECT_EQ(field_of(doc), "auto_groups");
}

TEST(Config, DuplicateLiteralPayloadRejected) {
  auto doc = minimal();
  doc["traffic"] = json::array({{{"tick", 0}, {"node", 0}, {"payload", "x"}},
                                {{"tick", 5}, {"node", 1}, {"payload", "x"}}});
  EXPECT_EQ(field_of(doc), "traffic[1].payload");
}

TEST(Config, OverridesFollowDottedPaths) {
  auto doc = minimal();
  apply_override(doc, "node.tx_period=5");
  apply_override(doc, "groups.0.id=Z");
  apply_override(doc, "arena.torus=true");
  const auto cfg = parse(doc);
  EXPECT_EQ(cfg.node.tx_period, 5);
  EXPECT_EQ(cfg.groups[0].id, "Z");
  EXPECT_TRUE(cfg.arena.torus);
  EXPECT_THROW(apply_override(doc, "novalue"), ConfigError);
  EXPECT_THROW(apply_override(doc, "groups.3.id=x"), ConfigError);
  EXPECT_THROW(apply_override(doc, "nodes.count.x=1"), ConfigError);
}

TEST(Config, EchoIsIdempotent) {
  auto doc = minimal();
  doc["mobility"] = {{"model", "random_waypoint"}, {"speed", 2}};
  doc["traffic_generator"] = {{"messages", 3}, {"size", 10}};
  doc["adversaries"] = json::array({{{"name", "e"}, {"type", "passive"}, {"keys", {"A"}},
                                     {"scope", {{"kind", "disk"}, {"x", 1}, {"y", 2}, {"radius", 3}}}},
                                    {{"name", "s"}, {"type", "spammer"}, {"group", "A"}}});
  const auto first = to_json(parse(doc));
  const auto second = to_json(parse(first));
  EXPECT_EQ(first, second);
  EXPECT_EQ(run_id(parse(doc)), run_id(parse(first)));
  EXPECT_EQ(first["traffic"].size(), 3u);
  EXPECT_EQ(first["adversaries"][1]["payload"], "spam:s");
  EXPECT_EQ(first["mobility"]["speed_min"], 2.0);
  EXPECT_EQ(first["mobility"]["speed_max"], 2.0);
  EXPECT_EQ(first["groups"][0]["key"].get<std::string>().size(), 64u);
}

TEST(Config, RunIdTracksEveryField) {
  auto doc = minimal();
  const auto base = run_id(parse(doc));
  EXPECT_EQ(base.size(), 24u);
  doc["seed"] = 2;
  EXPECT_NE(run_id(parse(doc)), base);
}

TEST(Config, GroupKeysDeriveFromSeedUnlessGiven) {
  auto doc = minimal();
  const auto a = parse(doc);
  doc["seed"] = 99;
  const auto b = parse(doc);
  EXPECT_NE(*a.groups[0].key, *b.groups[0].key);
  doc["groups"][0]["key"] = std::string(64, 'a');
  EXPECT_EQ((*parse(doc).groups[0].key)[0], 0xaa);
  doc["groups"][0]["key"] = "abcd";
  EXPECT_EQ(field_of(doc), "groups[0].key");
}

TEST(Config, AutoGroupsChainWithBridges) {
  auto doc = minimal();
  doc.erase("groups");
  doc["nodes"]["count"] = 10;
  doc["auto_groups"] = {{"size", 4}, {"overlap", 1}};
  const auto cfg = parse(doc);
  ASSERT_EQ(cfg.groups.size(), 3u);
  EXPECT_EQ(cfg.groups[0].members, (std::vector<NodeId>{0, 1, 2, 3}));
  EXPECT_EQ(cfg.groups[1].members, (std::vector<NodeId>{3, 4, 5, 6}));
  EXPECT_EQ(cfg.groups[2].members, (std::vector<NodeId>{6, 7, 8, 9}));
  doc["groups"] = minimal()["groups"];
  EXPECT_EQ(field_of(doc), "auto_groups");
}

TEST(Config, TrafficGeneratorStaysInWindow) {
  auto doc = minimal();
  doc["ticks"] = 1000;
  doc["traffic_generator"] = {{"messages", 50}, {"start", 100}, {"end", 200}, {"size", 16}};
  const auto cfg = parse(doc);
  ASSERT_EQ(cfg.traffic.size(), 50u);
  for (std::size_t i = 0; i < cfg.traffic.size(); ++i) {
    EXPECT_GE(cfg.traffic[i].tick, 100);
    EXPECT_LT(cfg.traffic[i].tick, 200);
    EXPECT_EQ(traffic_payload(cfg, i).size(), 16u);
  }
  EXPECT_NE(traffic_payload(cfg, 0), traffic_payload(cfg, 1));
}

}  // namespace
}  // namespace adtn

namespace adtn {
namespace {

TEST(Config, ShippedScenariosParse) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(ADTN_SCENARIO_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    ++seen;
    EXPECT_NO_THROW(parse_config(load_config_document(entry.path().string()))) << entry.path();
  }
  EXPECT_GE(seen, 4u);
}

}  // namespace
}  // namespace adtn
