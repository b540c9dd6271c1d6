#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grenn/host_graph.hpp"
#include "grenn/rewrite/match.hpp"
#include "grenn/rewrite/record.hpp"
#include "grenn/rewrite/rule.hpp"

namespace grenn::rewrite {

class ApplyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Host node ids for the rule's `in` parameters, keyed by parameter name.
using ParamBinding = std::map<std::string, NodeId>;

/// Enumerates every complete match forest of `rule` in `g`.
///
/// Matching is injective per level: pattern nodes bound at the same level map
/// to distinct host nodes, while an element may share its host node with an
/// element of an ancestor level. Guards are checked as soon as their referenced
/// elements are bound; embargo sub-patterns reject a match if any injective
/// extension into the host graph exists. A UniversalNonEmpty level with zero
/// sub-matches invalidates its parent match. Forests and all sub-match lists
/// come back sorted lexicographically over mapped host ids in element-id
/// order, so equal graphs yield identical results.
///
/// A rule whose root has no match yields an empty vector. A rule whose root
/// pattern has no matchable elements yields exactly one forest.
std::vector<MatchForest> find_match_forests(const Rule& rule,
                                            const HostGraph& g,
                                            const ParamBinding& params = {});

/// Evaluates an expression in the context of one match (a node of a forest).
/// Aggregates range over `ctx.children` of the named level. All reads go to
/// the current graph state, so evaluation against a pre-state snapshot is the
/// caller's (or apply's) concern. When `rule` is given, a sum over an empty
/// level yields the zero of the body's static sort; otherwise real 0.0.
Value eval_expr(const ExprPtr& e, const MatchNode& ctx, const HostGraph& g,
                const Rule* rule = nullptr);

/// Applies one forest: evaluates every expression against the pre-state, then
/// atomically deletes eraser matches (dangling edges cascade), instantiates
/// creators once per match of their level (CreatorIfAbsent only for contexts
/// without a pre-state counterpart), and applies attribute writes in
/// deterministic order. Throws ApplyError if the forest is stale, i.e. the
/// graph changed since matching.
ApplicationRecord apply(const Rule& rule, HostGraph& g,
                        const MatchForest& forest);

/// Finds all forests and applies the first in deterministic order.
/// Returns nothing when the rule has no match ("the rule fails").
std::optional<ApplicationRecord> apply_once(const Rule& rule, HostGraph& g,
                                            const ParamBinding& params = {});

}  // namespace grenn::rewrite
