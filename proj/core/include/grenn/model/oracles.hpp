#pragma once

#include "grenn/host_graph.hpp"

namespace grenn::model {

/// Strength the infer rule would assign to an engagement of `user` with a
/// post by `author`, computed directly from the graph:
///
///     sum over observed engagements e on posts p by `author` of
///     p.weight * e.strength, divided by their number.
///
/// All observed engagements on the author's posts contribute, whoever made
/// them; `user` identifies the pair being scored but does not change the
/// value. Requires at least one contributing engagement.
double oracle_inferred_strength(const HostGraph& g, NodeId user, NodeId author);

/// Global error computed directly from the graph: the sum over observed
/// engagements e of user u with a post by a flagged author a (u != a) of
/// |e.strength - oracle_inferred_strength(g, u, a)|.
double oracle_global_error(const HostGraph& g);

}  // namespace grenn::model
