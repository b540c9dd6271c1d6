#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "grenn/model/schema.hpp"
#include "grenn/rewrite/engine.hpp"
#include "support/brute_force.hpp"
#include "support/generators.hpp"
#include "support/probes.hpp"
#include "support/rule_builder.hpp"

using namespace grenn;
using namespace grenn::rewrite;
using grenn::test::RB;

namespace {

const TypeGraph& schema() { return model::recommender_schema(); }

std::vector<Binding> engine_root_bindings(const Rule& rule, const HostGraph& g,
                                          const ParamBinding& params = {}) {
  std::vector<Binding> out;
  for (const auto& f : find_match_forests(rule, g, params))
    out.push_back(f.root.binding);
  return out;
}

}  // namespace

TEST_CASE("matching agrees with exhaustive search on random graphs") {
  std::vector<Rule> probes = test::probe_rules();
  std::mt19937_64 rng(611953);
  int nonempty = 0;
  for (int round = 0; round < 120; ++round) {
    HostGraph g = test::random_schema_graph(rng);
    for (const Rule& rule : probes) {
      auto got = engine_root_bindings(rule, g);
      auto want = test::brute_force_matches(rule, g);
      REQUIRE_MESSAGE(got == want, "rule ", rule.name, " round ", round);
      if (!got.empty()) ++nonempty;
    }
  }
  CHECK(nonempty > 50);  // the corpus actually exercises the probes
}

TEST_CASE("matching is injective within a level") {
  HostGraph g(schema());
  g.add_node("User", {{"upd", false}});
  g.add_node("User", {{"upd", false}});

  Rule two = RB("two_users")
                 .node(0, "User", 0)
                 .node(1, "User", 0)
                 .done(schema());
  auto ms = engine_root_bindings(two, g);
  CHECK(ms.size() == 2);  // ordered pairs of distinct nodes, not 4
  for (const auto& b : ms) CHECK(b.at(0) != b.at(1));
}

TEST_CASE("a nested element may reuse an ancestor's host node") {
  HostGraph g(schema());
  NodeId u = g.add_node("User", {{"upd", false}});
  NodeId v = g.add_node("User", {{"upd", false}});

  Rule nest = RB("all_users_below")
                  .level(1, LevelKind::Universal, 0)
                  .node(0, "User", 0)
                  .node(1, "User", 1)
                  .done(schema());
  auto forests = find_match_forests(nest, g);
  REQUIRE(forests.size() == 2);
  for (const auto& f : forests) {
    const auto& kids = f.root.children.at(1);
    REQUIRE(kids.size() == 2);  // both users, including the root's own node
    CHECK(kids[0].binding.at(1) == u);
    CHECK(kids[1].binding.at(1) == v);
  }
}

TEST_CASE("non-empty universal levels invalidate matches without children") {
  HostGraph g(schema());
  NodeId u1 = g.add_node("User", {{"upd", false}});
  NodeId u2 = g.add_node("User", {{"upd", false}});
  NodeId e = g.add_node("Engagement", {{"strength", 0.4},
                                       {"error", 0.0},
                                       {"obs", true},
                                       {"upd", false},
                                       {"count", std::int64_t{1}}});
  g.add_edge("by", e, u1);

  auto shape = [&](LevelKind kind) {
    return RB("engagers")
        .level(1, kind, 0)
        .node(0, "User", 0)
        .node(1, "Engagement", 1)
        .edge(2, "by", 1, 0, 1)
        .done(schema());
  };

  auto plain = find_match_forests(shape(LevelKind::Universal), g);
  REQUIRE(plain.size() == 2);  // u2 matches with an empty child list
  CHECK(plain[1].root.binding.at(0) == u2);
  CHECK(plain[1].root.children.at(1).empty());

  auto strict = find_match_forests(shape(LevelKind::UniversalNonEmpty), g);
  REQUIRE(strict.size() == 1);
  CHECK(strict[0].root.binding.at(0) == u1);
}

TEST_CASE("emptiness propagates through intermediate levels") {
  // Root over the error node, a universal middle level over users, and a
  // non-empty bottom level requiring an engagement by that user. Users
  // without engagements must vanish from the middle level rather than
  // invalidating the root.
  HostGraph g(schema());
  NodeId u1 = g.add_node("User", {{"upd", false}});
  g.add_node("User", {{"upd", false}});
  NodeId e = g.add_node("Engagement", {{"strength", 0.2},
                                       {"error", 0.0},
                                       {"obs", true},
                                       {"upd", false},
                                       {"count", std::int64_t{1}}});
  g.add_edge("by", e, u1);
  g.add_node("Error", {{"error", 0.0}, {"delta", 1.0}});

  Rule r = RB("users_with_engagements")
               .level(1, LevelKind::Universal, 0)
               .level(2, LevelKind::UniversalNonEmpty, 1)
               .node(0, "Error", 0)
               .node(1, "User", 1)
               .node(2, "Engagement", 2)
               .edge(3, "by", 2, 1, 2)
               .done(schema());
  auto forests = find_match_forests(r, g);
  REQUIRE(forests.size() == 1);
  const auto& mids = forests[0].root.children.at(1);
  REQUIRE(mids.size() == 1);  // u2 was dropped, root survives
  CHECK(mids[0].binding.at(1) == u1);
}

TEST_CASE("a root with no matchable elements yields exactly one forest") {
  HostGraph g(schema());
  Rule r = RB("empty_root")
               .level(1, LevelKind::Universal, 0)
               .node(0, "User", 1)
               .done(schema());
  auto forests = find_match_forests(r, g);
  REQUIRE(forests.size() == 1);
  CHECK(forests[0].root.binding.empty());
  CHECK(forests[0].root.children.at(1).empty());
}

TEST_CASE("arithmetic stays exact on integers and promotes on mixing") {
  HostGraph g(schema());
  NodeId e = g.add_node("Engagement", {{"strength", 0.8},
                                       {"error", -0.25},
                                       {"obs", true},
                                       {"upd", false},
                                       {"count", std::int64_t{7}}});
  MatchNode ctx;
  ctx.binding[0] = e;

  auto ev = [&](const ExprPtr& x) { return eval_expr(x, ctx, g); };

  CHECK(std::get<std::int64_t>(ev(add(lit(std::int64_t{2}), lit(std::int64_t{3})))) == 5);
  CHECK(std::get<std::int64_t>(ev(div(attr_ref(0, "count"), lit(std::int64_t{2})))) == 3);
  CHECK(std::get<double>(ev(div(lit(std::int64_t{7}), lit(2.0)))) == doctest::Approx(3.5));
  CHECK(std::get<double>(ev(mul(attr_ref(0, "strength"), lit(std::int64_t{2})))) == doctest::Approx(1.6));
  CHECK(std::get<double>(ev(abs(attr_ref(0, "error")))) == doctest::Approx(0.25));
  CHECK(std::get<std::int64_t>(ev(neg(attr_ref(0, "count")))) == -7);

  CHECK_THROWS_AS(ev(div(lit(std::int64_t{1}), lit(std::int64_t{0}))), EvalError);
  CHECK_THROWS_AS(ev(div(lit(1.0), lit(0.0))), EvalError);
  CHECK_THROWS_AS(ev(add(lit(true), lit(std::int64_t{1}))), EvalError);
  CHECK_THROWS_AS(ev(attr_ref(9, "x")), EvalError);  // unbound element
}

TEST_CASE("aggregates range over child matches; empty sums are typed zeros") {
  HostGraph g(schema());
  NodeId u = g.add_node("User", {{"upd", false}});
  for (double w : {0.5, 1.0, 2.0}) {
    NodeId p = g.add_node("Post", {{"weight", w}});
    g.add_edge("author", p, u);
  }
  NodeId loner = g.add_node("User", {{"upd", false}});

  Rule r = RB("post_stats")
               .level(1, LevelKind::Universal, 0)
               .node(0, "User", 0)
               .node(1, "Post", 1)
               .edge(2, "author", 1, 0, 1)
               .done(schema());
  auto forests = find_match_forests(r, g);
  REQUIRE(forests.size() == 2);

  ExprPtr total = sum(1, attr_ref(1, "weight"));
  ExprPtr n = count(1);

  CHECK(std::get<double>(eval_expr(total, forests[0].root, g, &r)) == doctest::Approx(3.5));
  CHECK(std::get<std::int64_t>(eval_expr(n, forests[0].root, g, &r)) == 3);

  CHECK(forests[1].root.binding.at(0) == loner);
  CHECK(std::get<double>(eval_expr(total, forests[1].root, g, &r)) == 0.0);
  CHECK(std::get<std::int64_t>(eval_expr(n, forests[1].root, g, &r)) == 0);

  // Integer body: the empty sum is an integer zero when the rule is known.
  ExprPtr counts = sum(1, lit(std::int64_t{1}));
  Rule ri = RB("int_sum")
                .level(1, LevelKind::Universal, 0)
                .node(0, "User", 0)
                .node(1, "Post", 1)
                .edge(2, "author", 1, 0, 1)
                .done(schema());
  MatchNode lone_ctx = forests[1].root;
  CHECK(std::get<std::int64_t>(eval_expr(counts, lone_ctx, g, &ri)) == 0);
  CHECK(std::get<double>(eval_expr(counts, lone_ctx, g, nullptr)) == 0.0);
}

TEST_CASE("assignments read the pre-state: attribute swap works") {
  HostGraph g(schema());
  NodeId a = g.add_node("Post", {{"weight", 1.0}});
  NodeId b = g.add_node("Post", {{"weight", 2.0}});
  NodeId u = g.add_node("User", {{"upd", false}});
  g.add_edge("author", a, u);
  g.add_edge("author", b, u);

  Rule swap = RB("swap_weights")
                  .node(0, "Post", 0)
                  .node(1, "Post", 0)
                  .node(2, "User", 0)
                  .edge(3, "author", 0, 2, 0)
                  .edge(4, "author", 1, 2, 0)
                  .assign(0, 0, "weight", attr_ref(1, "weight"))
                  .assign(0, 1, "weight", attr_ref(0, "weight"))
                  .done(schema());
  auto rec = apply_once(swap, g);
  REQUIRE(rec.has_value());
  // First forest binds (a, b) in that order; both writes saw the old values.
  CHECK(std::get<double>(g.attr(a, "weight")) == 2.0);
  CHECK(std::get<double>(g.attr(b, "weight")) == 1.0);
  REQUIRE(rec->writes.size() == 2);
  CHECK(std::get<double>(rec->writes[0].old_value) == 1.0);
  CHECK(std::get<double>(rec->writes[0].new_value) == 2.0);
}

TEST_CASE("erasing a node drags its unmatched incident edges along") {
  HostGraph g(schema());
  NodeId u = g.add_node("User", {{"upd", false}});
  NodeId p = g.add_node("Post", {{"weight", 1.0}});
  g.add_edge("author", p, u);
  NodeId e = g.add_node("Engagement", {{"strength", 0.2},
                                       {"error", 0.0},
                                       {"obs", true},
                                       {"upd", false},
                                       {"count", std::int64_t{1}}});
  EdgeId by = g.add_edge("by", e, u);
  EdgeId on = g.add_edge("on", e, p);

  Rule drop = RB("drop_engagement")
                  .node(0, "Engagement", 0, ElementRole::Eraser)
                  .done(schema());
  HostGraph before = g;
  auto rec = apply_once(drop, g);
  REQUIRE(rec.has_value());
  CHECK_FALSE(g.has_node(e));
  CHECK_FALSE(g.has_edge(by));
  CHECK_FALSE(g.has_edge(on));
  CHECK(g.check_conformance().empty());
  REQUIRE(rec->deleted_nodes.size() == 1);
  CHECK(rec->deleted_nodes[0].id == e);
  CHECK(rec->deleted_edges.size() == 2);  // cascaded, not in the pattern

  // The record round-trips in both directions.
  HostGraph replayed = before;
  replay_record(replayed, *rec);
  CHECK(replayed == g);
  invert_record(replayed, *rec);
  CHECK(replayed == before);
}

TEST_CASE("a created edge may not lean on a node the application deletes") {
  HostGraph g(schema());
  g.add_node("User", {{"upd", false}});

  // Root erases a user; the nested level re-matches possibly the same user
  // and hangs a fresh engagement onto it. With a single user the nested
  // element can only share the erased node, which must be rejected.
  Rule bad = RB("edge_to_erased")
                 .level(1, LevelKind::Universal, 0)
                 .node(0, "User", 0, ElementRole::Eraser)
                 .node(1, "User", 1)
                 .node(2, "Engagement", 1, ElementRole::Creator)
                 .edge(3, "by", 2, 1, 1, ElementRole::Creator)
                 .assign(1, 2, "strength", lit(0.0))
                 .assign(1, 2, "error", lit(0.0))
                 .assign(1, 2, "obs", lit(false))
                 .assign(1, 2, "upd", lit(false))
                 .assign(1, 2, "count", lit(std::int64_t{1}))
                 .done(schema());
  CHECK_THROWS_AS(apply_once(bad, g), ApplyError);
}

TEST_CASE("stale forests are rejected") {
  HostGraph g(schema());
  g.add_node("User", {{"upd", false}});
  Rule r = RB("user").node(0, "User", 0).done(schema());
  auto forests = find_match_forests(r, g);
  REQUIRE(forests.size() == 1);
  g.add_node("User", {{"upd", true}});  // any mutation invalidates
  CHECK_THROWS_AS(apply(r, g, forests[0]), ApplyError);
}

TEST_CASE("conditional creation skips contexts with a pre-state counterpart") {
  HostGraph g(schema());
  NodeId u = g.add_node("User", {{"upd", false}});
  NodeId p1 = g.add_node("Post", {{"weight", 1.0}});
  NodeId p2 = g.add_node("Post", {{"weight", 1.0}});
  NodeId e = g.add_node("Engagement", {{"strength", 0.9},
                                       {"error", 0.0},
                                       {"obs", true},
                                       {"upd", false},
                                       {"count", std::int64_t{1}}});
  g.add_edge("by", e, u);
  g.add_edge("on", e, p1);

  Rule link_all = RB("link_all")
                      .level(1, LevelKind::Universal, 0)
                      .node(0, "User", 0)
                      .node(1, "Post", 1)
                      .node(2, "Engagement", 1, ElementRole::CreatorIfAbsent)
                      .edge(3, "by", 2, 0, 1, ElementRole::CreatorIfAbsent)
                      .edge(4, "on", 2, 1, 1, ElementRole::CreatorIfAbsent)
                      .assign(1, 2, "strength", lit(0.1))
                      .assign(1, 2, "error", lit(0.0))
                      .assign(1, 2, "obs", lit(false))
                      .assign(1, 2, "upd", lit(false))
                      .assign(1, 2, "count", lit(std::int64_t{1}))
                      .done(schema());
  auto rec = apply_once(link_all, g);
  REQUIRE(rec.has_value());
  // p1 already carried an engagement by u: only the p2 context creates.
  REQUIRE(rec->created_nodes.size() == 1);
  NodeId fresh = rec->created_nodes[0].id;
  CHECK(std::get<double>(g.attr(e, "strength")) == 0.9);  // untouched
  CHECK(std::get<double>(g.attr(fresh, "strength")) == doctest::Approx(0.1));
  CHECK(g.edges_matching("on", fresh, p2).size() == 1);
  CHECK(rec->created_edges.size() == 2);

  // A second application finds counterparts everywhere and creates nothing.
  auto rec2 = apply_once(link_all, g);
  REQUIRE(rec2.has_value());
  CHECK(rec2->created_nodes.empty());
  CHECK(rec2->created_edges.empty());
}

TEST_CASE("counterparts must reach the same endpoints") {
  HostGraph g(schema());
  NodeId u1 = g.add_node("User", {{"upd", false}});
  NodeId u2 = g.add_node("User", {{"upd", false}});
  NodeId p = g.add_node("Post", {{"weight", 1.0}});
  NodeId e = g.add_node("Engagement", {{"strength", 0.5},
                                       {"error", 0.0},
                                       {"obs", true},
                                       {"upd", false},
                                       {"count", std::int64_t{1}}});
  g.add_edge("by", e, u2);  // engagement belongs to the *other* user
  g.add_edge("on", e, p);

  Rule link = RB("link_user_post")
                  .node(0, "User", 0)
                  .node(1, "Post", 0)
                  .node(2, "Engagement", 0, ElementRole::CreatorIfAbsent)
                  .edge(3, "by", 2, 0, 0, ElementRole::CreatorIfAbsent)
                  .edge(4, "on", 2, 1, 0, ElementRole::CreatorIfAbsent)
                  .assign(0, 2, "strength", lit(0.1))
                  .assign(0, 2, "error", lit(0.0))
                  .assign(0, 2, "obs", lit(false))
                  .assign(0, 2, "upd", lit(false))
                  .assign(0, 2, "count", lit(std::int64_t{1}))
                  .param("u", ParamDir::In, "User", 0)
                  .done(schema());
  auto rec = apply_once(link, g, {{"u", u1}});
  REQUIRE(rec.has_value());
  REQUIRE(rec->created_nodes.size() == 1);  // u2's engagement is no counterpart

  auto rec2 = apply_once(link, g, {{"u", u2}});
  REQUIRE(rec2.has_value());
  CHECK(rec2->created_nodes.empty());
}

TEST_CASE("input parameters pre-bind and constrain the root") {
  HostGraph g(schema());
  NodeId u1 = g.add_node("User", {{"upd", false}});
  NodeId u2 = g.add_node("User", {{"upd", false}});
  NodeId p = g.add_node("Post", {{"weight", 1.0}});
  g.add_edge("author", p, u1);

  Rule authored = RB("authored_by")
                      .node(0, "User", 0)
                      .node(1, "Post", 0)
                      .edge(2, "author", 1, 0, 0)
                      .param("u", ParamDir::In, "User", 0)
                      .param("p", ParamDir::Out, "Post", 1)
                      .done(schema());

  auto rec = apply_once(authored, g, {{"u", u1}});
  REQUIRE(rec.has_value());
  CHECK(rec->out_bindings.at("p") == p);
  CHECK_FALSE(apply_once(authored, g, {{"u", u2}}).has_value());

  CHECK_THROWS_AS(apply_once(authored, g), ApplyError);                // missing
  CHECK_THROWS_AS(apply_once(authored, g, {{"u", p}}), ApplyError);    // wrong type
  CHECK_THROWS_AS(apply_once(authored, g, {{"u", 404}}), ApplyError);  // unknown id
  CHECK_THROWS_AS(apply_once(authored, g, {{"u", u1}, {"x", u2}}), ApplyError);
}

TEST_CASE("forests come back sorted and identical across runs") {
  std::mt19937_64 rng(77001);
  Rule probe = test::rule_by_pair();
  for (int round = 0; round < 20; ++round) {
    HostGraph g = test::random_schema_graph(rng);
    auto a = find_match_forests(probe, g);
    auto b = find_match_forests(probe, g);
    CHECK(a == b);
    CHECK(std::is_sorted(a.begin(), a.end(),
                         [](const MatchForest& x, const MatchForest& y) {
                           return x.root.binding < y.root.binding;
                         }));
  }
}

TEST_CASE("records replay and invert exactly on random graphs") {
  std::mt19937_64 rng(99102);
  Rule probe = RB("bump_weight")
                   .level(1, LevelKind::Universal, 0)
                   .node(0, "User", 0)
                   .node(1, "Post", 1)
                   .edge(2, "author", 1, 0, 1)
                   .assign(1, 1, "weight",
                           add(attr_ref(1, "weight"), lit(0.125)))
                   .done(schema());
  Rule drop = RB("drop_any_engagement")
                  .node(0, "Engagement", 0, ElementRole::Eraser)
                  .done(schema());
  int applied = 0;
  for (int round = 0; round < 40; ++round) {
    HostGraph g = test::random_model_graph(rng);
    for (const Rule* r : {&probe, &drop}) {
      HostGraph before = g;
      auto rec = apply_once(*r, g);
      if (!rec) continue;
      ++applied;
      HostGraph fwd = before;
      replay_record(fwd, *rec);
      CHECK(fwd == g);
      invert_record(fwd, *rec);
      CHECK(fwd == before);
      CHECK(g.check_conformance().empty());
    }
  }
  CHECK(applied > 30);
}

TEST_CASE("validation rejects malformed rules") {
  // Unknown node type.
  CHECK_THROWS_AS(RB("r1").node(0, "Widget", 0).done(schema()), RuleError);
  // Edge endpoints of the wrong node type.
  CHECK_THROWS_AS(RB("r2")
                      .node(0, "User", 0)
                      .node(1, "Post", 0)
                      .edge(2, "by", 0, 1, 0)
                      .done(schema()),
                  RuleError);
  // Level tree with an orphan parent.
  CHECK_THROWS_AS(RB("r3").level(1, LevelKind::Universal, 7).node(0, "User", 1)
                      .done(schema()),
                  RuleError);
  // Guard with an aggregate.
  CHECK_THROWS_AS(RB("r4")
                      .level(1, LevelKind::Universal, 0)
                      .node(0, "User", 0)
                      .node(1, "Post", 1)
                      .edge(2, "author", 1, 0, 1)
                      .cmp(0, CmpOp::Gt, count(1), lit(std::int64_t{0}))
                      .done(schema()),
                  RuleError);
  // Assignment referring to a deeper level's element.
  CHECK_THROWS_AS(RB("r5")
                      .level(1, LevelKind::Universal, 0)
                      .node(0, "User", 0)
                      .node(1, "Post", 1)
                      .edge(2, "author", 1, 0, 1)
                      .assign(0, 0, "upd", attr_ref(1, "weight"))
                      .done(schema()),
                  RuleError);
  // Creator with a missing initial attribute.
  CHECK_THROWS_AS(RB("r6")
                      .node(0, "User", 0, ElementRole::Creator)
                      .done(schema()),
                  RuleError);
  // Ill-sorted assignment.
  CHECK_THROWS_AS(RB("r7")
                      .node(0, "Post", 0)
                      .assign(0, 0, "weight", lit(true))
                      .done(schema()),
                  RuleError);
  // Sum over a grandchild level: aggregates only see direct children.
  CHECK_THROWS_AS(RB("r8")
                      .level(1, LevelKind::Universal, 0)
                      .level(2, LevelKind::Universal, 1)
                      .node(0, "Error", 0)
                      .node(1, "User", 1)
                      .node(2, "Engagement", 2)
                      .edge(3, "by", 2, 1, 2)
                      .assign(0, 0, "error",
                              sum(2, attr_ref(2, "strength")))
                      .done(schema()),
                  RuleError);
}
