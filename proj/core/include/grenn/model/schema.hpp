#pragma once

#include <string>
#include <vector>

#include "grenn/host_graph.hpp"
#include "grenn/type_graph.hpp"

namespace grenn::model {

/// The recommender schema: User, Post, Engagement and a single bookkeeping
/// Error node, wired by `by` (Engagement->User), `on` (Engagement->Post) and
/// `author` (Post->User) edges.
///
///   User       { upd: bool }
///   Post       { weight: real }
///   Engagement { strength: real, error: real, obs: bool, upd: bool, count: int }
///   Error      { error: real, delta: real }
const TypeGraph& recommender_schema();

/// Structural invariants beyond plain schema conformance:
///   - exactly one Error node,
///   - every Engagement has count == 1,
///   - every Engagement has exactly one `by` and one `on` edge,
///   - no two Engagements link the same (user, post) pair.
/// Returns one human-readable line per violated invariant; empty means valid.
std::vector<std::string> check_model_invariants(const HostGraph& g);

}  // namespace grenn::model
