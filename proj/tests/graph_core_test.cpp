#include <algorithm>
#include <cstdint>
#include <random>

#include "doctest.h"
#include "grenn/host_graph.hpp"
#include "grenn/model/schema.hpp"
#include "support/generators.hpp"

using namespace grenn;

namespace {

TypeGraph tiny_schema() {
  return TypeGraph::build(
      {{"A", {{"x", Sort::Int}}}, {"B", {{"label", Sort::String}}}},
      {{"ab", "A", "B"}, {"loop", "A", "A"}});
}

}  // namespace

TEST_CASE("type graph rejects duplicate and dangling declarations") {
  CHECK_THROWS_AS(TypeGraph::build({{"A", {}}, {"A", {}}}, {}), GraphError);
  CHECK_THROWS_AS(TypeGraph::build({{"A", {{"x", Sort::Int}, {"x", Sort::Real}}}}, {}),
                  GraphError);
  CHECK_THROWS_AS(TypeGraph::build({{"A", {}}}, {{"e", "A", "Missing"}}),
                  GraphError);
  CHECK_THROWS_AS(TypeGraph::build({{"A", {}}}, {{"e", "e", "A"}, {"e", "A", "A"}}),
                  GraphError);
}

TEST_CASE("mutators enforce the schema") {
  HostGraph g(tiny_schema());

  CHECK_THROWS_AS(g.add_node("C", {}), GraphError);
  CHECK_THROWS_AS(g.add_node("A", {}), GraphError);  // x missing
  CHECK_THROWS_AS(g.add_node("A", {{"x", std::int64_t{1}}, {"y", false}}),
                  GraphError);
  CHECK_THROWS_AS(g.add_node("A", {{"x", 1.5}}), GraphError);  // real, not int

  NodeId a = g.add_node("A", {{"x", std::int64_t{1}}});
  NodeId b = g.add_node("B", {{"label", std::string("hi")}});

  CHECK_THROWS_AS(g.add_edge("nope", a, b), GraphError);
  CHECK_THROWS_AS(g.add_edge("ab", b, a), GraphError);  // endpoint types flipped
  CHECK_THROWS_AS(g.add_edge("ab", a, 999), GraphError);

  EdgeId ab = g.add_edge("ab", a, b);
  CHECK(g.edge(ab)->src == a);

  CHECK_THROWS_AS(g.set_attr(a, "y", std::int64_t{0}), GraphError);
  CHECK_THROWS_AS(g.set_attr(a, "x", false), GraphError);
  Value old = g.set_attr(a, "x", std::int64_t{7});
  CHECK(std::get<std::int64_t>(old) == 1);
  CHECK(std::get<std::int64_t>(g.attr(a, "x")) == 7);
}

TEST_CASE("node deletion cascades to incident edges and reports them") {
  HostGraph g(tiny_schema());
  NodeId a1 = g.add_node("A", {{"x", std::int64_t{1}}});
  NodeId a2 = g.add_node("A", {{"x", std::int64_t{2}}});
  NodeId b = g.add_node("B", {{"label", std::string("b")}});
  EdgeId e1 = g.add_edge("ab", a1, b);
  g.add_edge("ab", a2, b);
  EdgeId self = g.add_edge("loop", a1, a1);

  DeletedElements del = g.delete_node(a1);
  CHECK(del.node == a1);
  REQUIRE(del.edges.size() == 2);  // self-loop reported once
  CHECK(del.edges[0].first == e1);
  CHECK(del.edges[1].first == self);
  CHECK_FALSE(g.has_edge(e1));
  CHECK(g.edges().size() == 1);
  CHECK(g.check_conformance().empty());
}

TEST_CASE("ids are dense, never reused, and revision tracks every mutation") {
  HostGraph g(tiny_schema());
  NodeId a = g.add_node("A", {{"x", std::int64_t{0}}});
  NodeId b = g.add_node("B", {{"label", std::string("")}});
  EdgeId e = g.add_edge("ab", a, b);
  CHECK(a == 0);
  CHECK(b == 1);
  CHECK(e == 2);

  std::uint64_t r = g.revision();
  g.delete_edge(e);
  CHECK(g.revision() > r);
  CHECK(g.add_edge("ab", a, b) == 3);  // deleted id 2 is not recycled

  r = g.revision();
  g.set_attr(a, "x", std::int64_t{5});
  CHECK(g.revision() > r);
}

TEST_CASE("typed queries come back in ascending id order") {
  HostGraph g(tiny_schema());
  NodeId a1 = g.add_node("A", {{"x", std::int64_t{1}}});
  NodeId b1 = g.add_node("B", {{"label", std::string("x")}});
  NodeId a2 = g.add_node("A", {{"x", std::int64_t{2}}});
  NodeId b2 = g.add_node("B", {{"label", std::string("y")}});
  EdgeId e1 = g.add_edge("ab", a1, b1);
  EdgeId e2 = g.add_edge("ab", a2, b1);
  EdgeId e3 = g.add_edge("ab", a1, b2);

  CHECK(g.nodes_of_type("A") == std::vector<NodeId>{a1, a2});
  CHECK(g.edges_matching("ab", std::nullopt, std::nullopt) ==
        std::vector<EdgeId>{e1, e2, e3});
  CHECK(g.edges_matching("ab", a1, std::nullopt) ==
        std::vector<EdgeId>{e1, e3});
  CHECK(g.edges_matching("ab", std::nullopt, b1) ==
        std::vector<EdgeId>{e1, e2});
  CHECK(g.edges_matching("ab", a2, b2).empty());
  CHECK(g.edges_matching("loop", std::nullopt, std::nullopt).empty());
}

TEST_CASE("conformance reporting on graphs assembled from raw parts") {
  HostGraph g(tiny_schema());
  g.restore_node(4, "A", {{"x", std::int64_t{1}}});
  g.restore_node(9, "B", {{"label", std::string("ok")}});
  g.restore_edge(12, "ab", 4, 9);
  g.set_next_id(13);
  CHECK(g.check_conformance().empty());
  CHECK(g.nodes().begin()->first == 4);

  // Occupied ids and schema breaches throw instead of corrupting the graph.
  CHECK_THROWS_AS(g.restore_node(4, "A", {{"x", std::int64_t{0}}}), GraphError);
  CHECK_THROWS_AS(g.restore_edge(20, "ab", 4, 77), GraphError);
}

TEST_CASE("structural equality ignores construction history") {
  HostGraph g1(tiny_schema());
  NodeId a = g1.add_node("A", {{"x", std::int64_t{3}}});
  g1.add_node("B", {{"label", std::string("z")}});

  HostGraph g2(tiny_schema());
  g2.restore_node(0, "A", {{"x", std::int64_t{0}}});
  g2.restore_node(1, "B", {{"label", std::string("z")}});
  g2.set_next_id(2);
  CHECK(g1 != g2);
  g2.set_attr(0, "x", std::int64_t{3});
  CHECK(g1 == g2);

  g1.delete_node(a);
  CHECK(g1 != g2);
}

TEST_CASE("random mutation scripts keep model graphs conformant") {
  std::mt19937_64 rng(20240817);
  for (int round = 0; round < 25; ++round) {
    HostGraph g = grenn::test::random_model_graph(rng);
    REQUIRE(g.check_conformance().empty());

    // Random attribute writes and deletions, all through checked mutators.
    std::vector<NodeId> ids;
    for (const auto& [id, n] : g.nodes()) ids.push_back(id);
    std::shuffle(ids.begin(), ids.end(), rng);
    int edits = static_cast<int>(ids.size()) / 3;
    for (int i = 0; i < edits; ++i) {
      NodeId id = ids[static_cast<std::size_t>(i)];
      const NodeData* n = g.node(id);
      if (!n) continue;
      if (n->type == "Post" && (i % 2) == 0)
        g.set_attr(id, "weight", 0.25 * i);
      else if ((i % 3) == 0)
        g.delete_node(id);
    }
    CHECK(g.check_conformance().empty());
  }
}
