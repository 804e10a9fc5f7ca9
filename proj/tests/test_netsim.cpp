#include <gtest/gtest.h>

#include <set>

#include "adtn/mobility.hpp"
#include "adtn/netsim.hpp"
#include "fixtures.hpp"

namespace adtn {
namespace {

using testing::json;
using testing::line_scenario;
using testing::parse;

json with_groups(json doc, json groups) {
  doc["groups"] = std::move(groups);
  return doc;
}

TEST(Netsim, TwoNodesInRangeHearEachOtherEveryTick) {
  auto doc = with_groups(line_scenario(2, 50, 60), json::array({{{"id", "A"}, {"members", {0, 1}}}}));
  doc["ticks"] = 40;
  const RunReport run = run_scenario(parse(doc));
  EXPECT_EQ(run.events.size(), 80u);
  EXPECT_EQ(run.node_stats[0].receptions, 40u);
  EXPECT_EQ(run.node_stats[1].receptions, 40u);
  for (const auto& e : run.events) EXPECT_EQ(e.receivers.size(), 1u);
}

TEST(Netsim, NodesOutOfRangeNeverHear) {
  auto doc = with_groups(line_scenario(2, 50, 49.9), json::array({{{"id", "A"}, {"members", {0, 1}}}}));
  const RunReport run = run_scenario(parse(doc));
  for (const auto& s : run.node_stats) EXPECT_EQ(s.receptions, 0u);
}

TEST(Netsim, RangeBoundaryIsInclusive) {
  auto doc = with_groups(line_scenario(2, 50, 50), json::array({{{"id", "A"}, {"members", {0, 1}}}}));
  doc["ticks"] = 5;
  EXPECT_EQ(run_scenario(parse(doc)).node_stats[1].receptions, 5u);
}

TEST(Netsim, JammedReceiverHearsNothingWhileActive) {
  auto doc = with_groups(line_scenario(3, 30, 100),
                         json::array({{{"id", "A"}, {"members", {0, 1, 2}}}}));
  doc["ticks"] = 100;
  // Node 0 sits at x=10; the jam disk covers it only.
  doc["adversaries"] = json::array(
      {{{"name", "j"}, {"type", "jammer"}, {"x", 10}, {"y", 50}, {"radius", 5}, {"start", 20}, {"end", 60}}});
  const RunReport run = run_scenario(parse(doc));
  for (const auto& e : run.events) {
    const bool heard = std::count(e.receivers.begin(), e.receivers.end(), 0u) > 0;
    if (e.emitter == 0) continue;
    EXPECT_EQ(heard, e.tick < 20 || e.tick >= 60) << "tick " << e.tick;
    EXPECT_EQ(std::count(e.receivers.begin(), e.receivers.end(), e.emitter == 1 ? 2u : 1u), 1);
  }
  EXPECT_EQ(run.node_stats[0].receptions, 2u * 60u);
}

TEST(Netsim, ConnectedSingleGroupDeliversEverywhere) {
  auto doc = with_groups(line_scenario(10, 20, 25),
                         json::array({{{"id", "A"}, {"members", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}}}}));
  doc["traffic"] = json::array({{{"tick", 0}, {"node", 4}, {"payload", "hello"}}});
  const RunReport run = run_scenario(parse(doc));
  std::set<NodeId> got;
  for (const auto& d : run.deliveries) got.insert(d.node);
  EXPECT_EQ(got.size(), 10u);
}

TEST(Netsim, DisjointGroupsNeverLeak) {
  auto doc = with_groups(line_scenario(6, 10, 100),
                         json::array({{{"id", "A"}, {"members", {0, 1, 2}}},
                                      {{"id", "B"}, {"members", {3, 4, 5}}}}));
  doc["traffic"] = json::array({{{"tick", 0}, {"node", 0}, {"payload", "inside"}}});
  const RunReport run = run_scenario(parse(doc));
  std::set<NodeId> got;
  for (const auto& d : run.deliveries) got.insert(d.node);
  EXPECT_EQ(got, (std::set<NodeId>{0, 1, 2}));
}

TEST(Netsim, BridgeCarriesAcrossGroups) {
  auto doc = with_groups(line_scenario(3, 40, 50),
                         json::array({{{"id", "A"}, {"members", {0, 1}}},
                                      {{"id", "B"}, {"members", {1, 2}}}}));
  doc["traffic"] = json::array({{{"tick", 0}, {"node", 0}, {"payload", "x"}}});
  const RunReport run = run_scenario(parse(doc));
  std::set<NodeId> got;
  for (const auto& d : run.deliveries) got.insert(d.node);
  EXPECT_TRUE(got.contains(2));
}

json mobile_doc(std::uint64_t seed) {
  json doc{{"seed", seed},
           {"ticks", 600},
           {"arena", {{"width", 300}, {"height", 300}}},
           {"radio_range", 70},
           {"nodes", {{"count", 12}}},
           {"mobility", {{"model", "random_waypoint"}, {"speed_min", 1}, {"speed_max", 3}, {"pause", 5}}},
           {"auto_groups", {{"size", 4}, {"overlap", 1}}},
           {"node", {{"tx_period", 7}}},
           {"traffic_generator", {{"messages", 6}, {"start", 0}, {"end", 400}, {"size", 100}}},
           {"output", {{"trace_frames", true}}}};
  return doc;
}

TEST(Netsim, DeterministicEventLog) {
  const auto cfg = parse(mobile_doc(5));
  const RunReport a = run_scenario(cfg);
  const RunReport b = run_scenario(cfg);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_EQ(a.events[i].frame, b.events[i].frame);
    EXPECT_EQ(a.events[i].receivers, b.events[i].receivers);
  }
  const RunReport c = run_scenario(parse(mobile_doc(6)));
  EXPECT_NE(a.events.front().frame, c.events.front().frame);
}

TEST(Netsim, ConservationAndConstantAggregateRate) {
  const auto cfg = parse(mobile_doc(9));
  const RunReport run = run_scenario(cfg);
  std::uint64_t receptions = 0;
  for (const auto& s : run.node_stats) receptions += s.receptions;
  std::uint64_t listed = 0;
  for (const auto& e : run.events) listed += e.receivers.size();
  EXPECT_EQ(receptions, listed);

  const Tick P = cfg.node.tx_period;
  std::uint64_t expected = 0;
  for (Tick phase : run.phases) expected += static_cast<std::uint64_t>((cfg.ticks - phase + P - 1) / P);
  EXPECT_EQ(run.events.size(), expected);
}

TEST(Netsim, NoTwoFramesAlike) {
  const RunReport run = run_scenario(parse(mobile_doc(3)));
  std::set<Bytes> frames;
  for (const auto& e : run.events) EXPECT_TRUE(frames.insert(e.frame.bytes).second);
  EXPECT_GT(std::count_if(run.events.begin(), run.events.end(),
                          [](const EmissionEvent& e) { return e.kind == EmissionKind::real; }),
            0);
}

TEST(Netsim, FramesDroppedUnlessKept) {
  auto doc = mobile_doc(3);
  doc["output"]["trace_frames"] = false;
  const RunReport run = run_scenario(parse(doc));
  EXPECT_FALSE(run.frames_kept);
  EXPECT_TRUE(run.events.front().frame.bytes.empty());
}

TEST(Netsim, GarbageEmitterRateIsSpreadEvenly) {
  auto doc = with_groups(line_scenario(2, 10, 50), json::array({{{"id", "A"}, {"members", {0, 1}}}}));
  doc["ticks"] = 100;
  doc["adversaries"] = json::array({{{"name", "g"}, {"type", "garbage"}, {"rate", 0.25}, {"x", 15}, {"y", 50}},
                                    {{"name", "h"}, {"type", "garbage"}, {"rate", 2}, {"x", 15}, {"y", 50}, {"start", 50}}});
  const RunReport run = run_scenario(parse(doc));
  ASSERT_EQ(run.adversary_links.size(), 2u);
  EXPECT_EQ(run.adversary_links[0].second, 2u);
  EXPECT_EQ(run.adversary_links[1].second, 3u);
  std::map<LinkId, int> count;
  for (const auto& e : run.events) {
    if (e.kind == EmissionKind::garbage) ++count[e.emitter];
  }
  EXPECT_EQ(count[2], 25);
  EXPECT_EQ(count[3], 100);
}

TEST(Mobility, TorusDistanceWraps) {
  ArenaConfig arena{100, 100, true};
  EXPECT_DOUBLE_EQ(distance_sq({1, 1}, {99, 1}, arena), 4.0);
  arena.torus = false;
  EXPECT_DOUBLE_EQ(distance_sq({1, 1}, {99, 1}, arena), 98.0 * 98.0);
}

TEST(Mobility, InterpolateClampsAndBlends) {
  const std::vector<Waypoint> tl{{10, 0, 0}, {20, 10, 20}};
  EXPECT_EQ(interpolate(tl, 0), (Position{0, 0}));
  EXPECT_EQ(interpolate(tl, 15), (Position{5, 10}));
  EXPECT_EQ(interpolate(tl, 99), (Position{10, 20}));
}

TEST(Mobility, RandomWaypointStaysInArenaAndRespectsSpeed) {
  const auto cfg = parse(mobile_doc(4));
  const auto trace = record_positions(cfg);
  ASSERT_EQ(trace.size(), static_cast<std::size_t>(cfg.ticks));
  for (std::size_t t = 0; t < trace.size(); ++t) {
    for (std::size_t n = 0; n < trace[t].size(); ++n) {
      const auto p = trace[t][n];
      EXPECT_GE(p.x, 0);
      EXPECT_LE(p.x, cfg.arena.width);
      EXPECT_GE(p.y, 0);
      EXPECT_LE(p.y, cfg.arena.height);
      if (t > 0) EXPECT_LE(distance_sq(p, trace[t - 1][n], cfg.arena), 9.0 + 1e-9);
    }
  }
  EXPECT_NE(trace.front(), trace.back());
}

TEST(Mobility, RecordedPositionsMatchTheWorld) {
  const auto cfg = parse(mobile_doc(8));
  const auto trace = record_positions(cfg);
  World world(cfg, false);
  for (Tick t = 0; t < 50; ++t) {
    world.step();
    EXPECT_EQ(world.positions(), trace[static_cast<std::size_t>(t)]);
  }
}

TEST(Mobility, TraceModelFollowsTimelines) {
  json doc = line_scenario(2, 10, 50);
  doc["mobility"] = {{"model", "trace"},
                     {"traces", json::array({json::array({{{"tick", 0}, {"x", 0}, {"y", 0}}, {{"tick", 10}, {"x", 10}, {"y", 0}}}),
                                             json::array({{{"tick", 0}, {"x", 5}, {"y", 5}}})})}};
  doc["groups"] = json::array({{{"id", "A"}, {"members", {0, 1}}}});
  const auto trace = record_positions(parse(doc));
  EXPECT_EQ(trace[5][0], (Position{5, 0}));
  EXPECT_EQ(trace[50][0], (Position{10, 0}));
  EXPECT_EQ(trace[50][1], (Position{5, 5}));
}

}  // namespace
}  // namespace adtn
