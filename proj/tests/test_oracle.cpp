#include <gtest/gtest.h>

#include "adtn/oracle.hpp"
#include "fixtures.hpp"

namespace adtn {
namespace {

using testing::json;
using testing::line_scenario;
using testing::parse;

json chain() {
  auto doc = line_scenario(3, 40, 50);
  doc["groups"] = json::array({{{"id", "A"}, {"members", {0, 1}}}, {{"id", "B"}, {"members", {1, 2}}}});
  doc["traffic"] = json::array({{{"tick", 0}, {"node", 0}, {"payload", "chain"}}});
  doc["node"] = {{"tx_period", 1}, {"freshness_age", 1000000}, {"overheard_cap", 1000000},
                 {"retransmit_cap", 1000000}};
  return doc;
}

// Hand-derived: node 0 speaks at tick 0, node 1 speaks in A at tick 1 and
// in B at tick 2, so node 2 first hears it at tick 2.
TEST(Oracle, ThreeNodeChainHandValues) {
  const auto cfg = parse(chain());
  const auto arrival = contact_oracle(make_oracle_input(cfg));
  ASSERT_EQ(arrival.size(), 3u);
  EXPECT_EQ(arrival[0], 0);
  EXPECT_EQ(arrival[1], 0);
  EXPECT_EQ(arrival[2], 2);
  const auto cmp = compare_with_oracle(cfg);
  EXPECT_TRUE(cmp.valid) << cmp.invalid_reason;
  EXPECT_TRUE(cmp.agrees());
}

TEST(Oracle, SlowerPeriodHandValues) {
  OracleInput in;
  in.positions.assign(100, {{0, 0}, {10, 0}, {20, 0}});
  in.radio_range = 10;
  in.tx_period = 4;
  in.phases = {1, 3, 0};
  in.group_members = {{0, 1}, {1, 2}};
  in.node_groups = {{0}, {0, 1}, {1}};
  in.origin = 0;
  in.injected = 2;
  // 0 speaks at 5 -> 1; 1 speaks in A at 7, in B at 11 -> 2.
  const auto a = contact_oracle(in);
  EXPECT_EQ(a[0], 2);
  EXPECT_EQ(a[1], 5);
  EXPECT_EQ(a[2], 11);
}

TEST(Oracle, DisconnectedPairBothUnreachable) {
  auto doc = line_scenario(2, 100, 50);
  doc["groups"] = json::array({{{"id", "A"}, {"members", {0, 1}}}});
  doc["traffic"] = json::array({{{"tick", 3}, {"node", 1}, {"payload", "alone"}}});
  const auto cmp = compare_with_oracle(parse(doc));
  ASSERT_TRUE(cmp.valid);
  EXPECT_FALSE(cmp.oracle[0]);
  EXPECT_FALSE(cmp.protocol[0]);
  EXPECT_EQ(cmp.oracle[1], 3);
  EXPECT_TRUE(cmp.agrees());
}

TEST(Oracle, SingleNodeHoldsOnlyItself) {
  OracleInput in;
  in.positions.assign(10, {{0, 0}});
  in.radio_range = 10;
  in.phases = {0};
  in.group_members = {{0}};
  in.node_groups = {{0}};
  const auto a = contact_oracle(in);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], 0);
}

TEST(Oracle, TinyOverheardCapIsFlaggedInvalid) {
  auto doc = line_scenario(5, 10, 100);
  doc["groups"] = json::array({{{"id", "A"}, {"members", {0, 1, 2, 3, 4}}}});
  doc["traffic"] = json::array({{{"tick", 0}, {"node", 0}, {"payload", "m"}}});
  doc["node"] = {{"tx_period", 1}, {"overheard_cap", 1}};
  const auto cmp = compare_with_oracle(parse(doc));
  EXPECT_FALSE(cmp.valid);
  EXPECT_NE(cmp.invalid_reason.find("staleness"), std::string::npos);
  EXPECT_TRUE(cmp.mismatches.empty());
}

TEST(Oracle, NonFifoOrMultiMessageIsInvalid) {
  auto doc = chain();
  doc["node"]["scheduler"] = "least_popular";
  EXPECT_FALSE(compare_with_oracle(parse(doc)).valid);
  doc = chain();
  doc["traffic"].push_back({{"tick", 1}, {"node", 2}, {"payload", "two"}});
  EXPECT_FALSE(compare_with_oracle(parse(doc)).valid);
}

TEST(Oracle, MobileScenariosAgree) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    json doc{{"seed", seed},
             {"ticks", 800},
             {"arena", {{"width", 250}, {"height", 250}}},
             {"radio_range", 60},
             {"nodes", {{"count", 10}}},
             {"mobility", {{"model", "random_waypoint"}, {"speed_min", 1}, {"speed_max", 4}}},
             {"auto_groups", {{"size", 4}, {"overlap", 1}}},
             {"node", {{"tx_period", 5}, {"freshness_age", 1000000}, {"overheard_cap", 1000000},
                       {"retransmit_cap", 1000000}}},
             {"traffic", json::array({{{"tick", 7}, {"node", seed % 10}, {"size", 50}}})}};
    const auto cmp = compare_with_oracle(parse(doc));
    ASSERT_TRUE(cmp.valid) << cmp.invalid_reason;
    EXPECT_TRUE(cmp.agrees()) << "seed " << seed;
  }
}

}  // namespace
}  // namespace adtn
