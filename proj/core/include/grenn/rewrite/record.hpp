#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "grenn/host_graph.hpp"

namespace grenn::rewrite {

/// Everything one rule application did, in commit order, with enough data to
/// replay it forward or invert it exactly.
struct ApplicationRecord {
  struct CreatedNode {
    NodeId id;
    std::string type;
    std::map<std::string, Value> attrs;
    bool operator==(const CreatedNode&) const = default;
  };
  struct CreatedEdge {
    EdgeId id;
    std::string type;
    NodeId src;
    NodeId tgt;
    bool operator==(const CreatedEdge&) const = default;
  };
  struct AttrWrite {
    NodeId node;
    std::string attr;
    Value old_value;
    Value new_value;
    bool operator==(const AttrWrite&) const = default;
  };

  std::string rule;
  std::vector<CreatedNode> created_nodes;
  std::vector<CreatedEdge> created_edges;
  std::vector<CreatedNode> deleted_nodes;  // same shape: id, type, attrs
  std::vector<CreatedEdge> deleted_edges;
  std::vector<AttrWrite> writes;           // applied in order, last write wins
  std::map<std::string, NodeId> out_bindings;
  std::int64_t next_id_before = 0;
  std::int64_t next_id_after = 0;

  bool operator==(const ApplicationRecord&) const = default;
};

/// Reapplies a record to a graph in the pre-application state.
void replay_record(HostGraph& g, const ApplicationRecord& rec);

/// Undoes a record on a graph in the post-application state, restoring the
/// pre-state exactly (including the id counter).
void invert_record(HostGraph& g, const ApplicationRecord& rec);

}  // namespace grenn::rewrite
