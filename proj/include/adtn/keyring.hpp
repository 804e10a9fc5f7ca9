#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adtn/types.hpp"
#include "adtn/wire.hpp"

namespace adtn {

/// Scenario-level configuration problem. `field` names the offending
/// config path, e.g. "groups[1].members".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct TrustGroup {
  std::string group_id;
  std::vector<NodeId> members;  // sorted, unique
  GroupKey key;

  bool contains(NodeId node) const;
};

/// Keys a node holds, in trial-decryption order (group declaration order).
struct Keyring {
  NodeId owner = 0;
  std::vector<GroupKey> keys;
};

/// Result is indexed by NodeId. Throws ConfigError for members outside
/// [0, node_count), groups with fewer than two members, duplicate keys, or
/// a node that belongs to no group.
std::vector<Keyring> build_keyrings(std::span<const TrustGroup> groups, std::size_t node_count);

}  // namespace adtn
