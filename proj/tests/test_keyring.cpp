#include <gtest/gtest.h>

#include "adtn/keyring.hpp"
#include "fixtures.hpp"

namespace adtn {
namespace {

using testing::make_group;

TEST(Keyring, BridgeHoldsBothKeys) {
  std::vector<TrustGroup> groups{make_group("A", {1, 2}), make_group("B", {2, 3})};
  groups.insert(groups.begin(), make_group("Z", {0, 1}));
  const auto rings = build_keyrings(groups, 4);
  EXPECT_EQ(rings[2].keys.size(), 2u);
  EXPECT_EQ(rings[1].keys.size(), 2u);  // Z and A
  EXPECT_EQ(rings[3].keys.size(), 1u);
  EXPECT_EQ(rings[2].keys[0].group_id, "A");
  EXPECT_EQ(rings[2].keys[1].group_id, "B");
}

TEST(Keyring, SingleGroupGivesEveryoneTheSameKey) {
  const std::vector<TrustGroup> groups{make_group("all", {0, 1, 2, 3, 4})};
  const auto rings = build_keyrings(groups, 5);
  for (const auto& r : rings) {
    ASSERT_EQ(r.keys.size(), 1u);
    EXPECT_EQ(r.keys[0].key, groups[0].key.key);
  }
}

TEST(Keyring, NodeInNoGroupIsConfigError) {
  const std::vector<TrustGroup> groups{make_group("A", {0, 1}), make_group("B", {1, 2})};
  try {
    build_keyrings(groups, 5);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
}

TEST(Keyring, RejectsBadGroups) {
  EXPECT_THROW(build_keyrings(std::vector{make_group("A", {0})}, 1), ConfigError);
  EXPECT_THROW(build_keyrings(std::vector{make_group("A", {0, 7})}, 2), ConfigError);
  auto a = make_group("A", {0, 1});
  auto b = make_group("A", {0, 1});
  b.key = testing::make_key("other");
  EXPECT_THROW(build_keyrings(std::vector{a, b}, 2), ConfigError);
  auto c = make_group("C", {0, 1});
  c.key = a.key;
  c.key.group_id = "C";
  EXPECT_THROW(build_keyrings(std::vector{a, c}, 2), ConfigError);
}

// Exhaustive: a frame under group g opens at node n iff n is a member of g.
TEST(Keyring, PossessionIsExactlyMembership) {
  const std::vector<TrustGroup> groups{make_group("A", {0, 1}), make_group("B", {1, 2, 3}),
                                       make_group("C", {0, 3})};
  const auto rings = build_keyrings(groups, 4);
  WireFormat fmt(64);
  RandomStream rng(11, "t");
  for (const auto& g : groups) {
    const Frame f = encode_frame(fmt, as_bytes("m"), g.key, rng);
    for (NodeId n = 0; n < 4; ++n) {
      bool opened = false;
      for (const auto& k : rings[n].keys) opened |= try_decrypt(fmt, f, k).has_value();
      EXPECT_EQ(opened, g.contains(n)) << g.group_id << " node " << n;
    }
  }
}

}  // namespace
}  // namespace adtn
