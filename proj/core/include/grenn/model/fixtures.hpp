#pragma once

#include "grenn/host_graph.hpp"

namespace grenn::model {

/// Two users, three posts (all by the flagged user u2, weights 0.5/1.0/1.0)
/// and two observed engagements by u1 (strengths 0.4 and 0.8). Small enough
/// to trace training by hand.
HostGraph mini_graph();

/// Three users, three posts (one per author, weight 1.0) and six observed
/// engagements: every user engages with both other users' posts. All users
/// start flagged for training.
HostGraph seed_graph();

}  // namespace grenn::model
