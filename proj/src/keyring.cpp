#include "adtn/keyring.hpp"

#include <algorithm>
#include <set>

namespace adtn {

bool TrustGroup::contains(NodeId node) const {
  return std::binary_search(members.begin(), members.end(), node);
}

std::vector<Keyring> build_keyrings(std::span<const TrustGroup> groups, std::size_t node_count) {
  std::vector<Keyring> rings(node_count);
  for (std::size_t n = 0; n < node_count; ++n) rings[n].owner = static_cast<NodeId>(n);

  std::set<std::array<std::uint8_t, kKeyLen>> seen_keys;
  std::set<std::string> seen_ids;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& group = groups[g];
    const std::string where = "groups[" + std::to_string(g) + "]";
    if (!seen_ids.insert(group.group_id).second) {
      throw ConfigError(where + ".id", "duplicate group id '" + group.group_id + "'");
    }
    if (!seen_keys.insert(group.key.key).second) {
      throw ConfigError(where + ".key", "key shared with another group");
    }
    std::set<NodeId> unique(group.members.begin(), group.members.end());
    if (unique.size() < 2) {
      throw ConfigError(where + ".members", "a trust group needs at least two members");
    }
    for (NodeId member : unique) {
      if (member >= node_count) {
        throw ConfigError(where + ".members",
                          "node " + std::to_string(member) + " does not exist (node count " +
                              std::to_string(node_count) + ")");
      }
      rings[member].keys.push_back(group.key);
    }
  }
  for (const auto& ring : rings) {
    if (ring.keys.empty()) {
      throw ConfigError("groups", "node " + std::to_string(ring.owner) +
                                      " belongs to no group and could never communicate");
    }
  }
  return rings;
}

}  // namespace adtn
