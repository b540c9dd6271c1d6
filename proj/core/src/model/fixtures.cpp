#include "grenn/model/fixtures.hpp"

#include <cstdint>

#include "grenn/model/schema.hpp"

namespace grenn::model {

namespace {

NodeId add_user(HostGraph& g, bool upd) {
  return g.add_node("User", {{"upd", upd}});
}

NodeId add_post(HostGraph& g, double weight, NodeId author) {
  NodeId p = g.add_node("Post", {{"weight", weight}});
  g.add_edge("author", p, author);
  return p;
}

NodeId add_observed(HostGraph& g, NodeId user, NodeId post, double strength) {
  NodeId e = g.add_node("Engagement", {{"strength", strength},
                                       {"error", 0.0},
                                       {"obs", true},
                                       {"upd", false},
                                       {"count", std::int64_t{1}}});
  g.add_edge("by", e, user);
  g.add_edge("on", e, post);
  return e;
}

NodeId add_error_node(HostGraph& g) {
  // delta starts at 1.0 so the first training cycle is never cut short by
  // the stopping guard.
  return g.add_node("Error", {{"error", 0.0}, {"delta", 1.0}});
}

}  // namespace

HostGraph mini_graph() {
  HostGraph g(recommender_schema());
  NodeId u1 = add_user(g, false);
  NodeId u2 = add_user(g, true);
  NodeId p1 = add_post(g, 0.5, u2);
  NodeId p2 = add_post(g, 1.0, u2);
  add_post(g, 1.0, u2);
  add_observed(g, u1, p1, 0.4);
  add_observed(g, u1, p2, 0.8);
  add_error_node(g);
  return g;
}

HostGraph seed_graph() {
  HostGraph g(recommender_schema());
  NodeId u1 = add_user(g, true);
  NodeId u2 = add_user(g, true);
  NodeId u3 = add_user(g, true);
  NodeId p1 = add_post(g, 1.0, u1);
  NodeId p2 = add_post(g, 1.0, u2);
  NodeId p3 = add_post(g, 1.0, u3);
  add_observed(g, u2, p1, 0.8);
  add_observed(g, u3, p1, 0.4);
  add_observed(g, u1, p2, 0.2);
  add_observed(g, u3, p2, 0.8);
  add_observed(g, u1, p3, 0.4);
  add_observed(g, u2, p3, 0.2);
  add_error_node(g);
  return g;
}

}  // namespace grenn::model
