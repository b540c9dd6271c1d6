#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "grenn/host_graph.hpp"
#include "grenn/rewrite/rule.hpp"

namespace grenn::rewrite {

/// Cumulative binding of pattern element ids to host element ids. Node
/// elements map to node ids, edge elements to edge ids. A binding at a
/// quantification level includes the bindings of all ancestor levels.
using Binding = std::map<ElemId, std::int64_t>;

/// One match of a quantification level plus the complete sets of sub-matches
/// of its child levels. Sub-match lists are sorted lexicographically over the
/// mapped host ids in pattern-element-id order.
struct MatchNode {
  LevelId level = 0;
  Binding binding;
  std::map<LevelId, std::vector<MatchNode>> children;

  bool operator==(const MatchNode&) const = default;
};

/// A complete match forest: the root match with all universal sub-matches.
/// Captures the graph revision it was computed against; application rejects
/// forests whose graph has changed since.
struct MatchForest {
  MatchNode root;
  std::uint64_t revision = 0;

  bool operator==(const MatchForest&) const = default;
};

}  // namespace grenn::rewrite
