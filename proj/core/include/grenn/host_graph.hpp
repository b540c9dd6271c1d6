#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grenn/type_graph.hpp"
#include "grenn/value.hpp"

namespace grenn {

/// Node and edge ids share one id space per graph, assigned in creation order.
using NodeId = std::int64_t;
using EdgeId = std::int64_t;

struct NodeData {
  std::string type;
  std::map<std::string, Value> attrs;

  bool operator==(const NodeData&) const = default;
};

struct EdgeData {
  std::string type;
  NodeId src;
  NodeId tgt;

  bool operator==(const EdgeData&) const = default;
};

enum class ViolationKind {
  UnknownType,
  MissingAttr,
  ExtraAttr,
  SortMismatch,
  DanglingEdge,
  BadEndpointType,
};

/// One conformance defect found by HostGraph::check_conformance.
struct Violation {
  ViolationKind kind;
  std::int64_t subject_id;  // node or edge id
  std::string detail;

  bool operator==(const Violation&) const = default;
};

std::string to_string(ViolationKind k);

/// Elements removed by a node deletion: the node plus its incident edges.
struct DeletedElements {
  NodeId node;
  NodeData node_data;
  std::vector<std::pair<EdgeId, EdgeData>> edges;
};

/// Mutable typed attributed graph instance over a fixed TypeGraph.
///
/// Every mutating operation validates against the schema and throws GraphError
/// on misuse, so a graph reachable through this interface stays conformant.
/// Iteration order is ascending id everywhere, which makes graphs built by the
/// same operation sequence structurally identical.
class HostGraph {
 public:
  HostGraph() : type_graph_(std::make_shared<TypeGraph>()) {}
  explicit HostGraph(TypeGraph tg)
      : type_graph_(std::make_shared<TypeGraph>(std::move(tg))) {}
  explicit HostGraph(std::shared_ptr<const TypeGraph> tg)
      : type_graph_(std::move(tg)) {}

  const TypeGraph& type_graph() const { return *type_graph_; }
  std::shared_ptr<const TypeGraph> type_graph_ptr() const { return type_graph_; }

  /// Adds a node with exactly the declared attributes. Returns the fresh id.
  NodeId add_node(const std::string& type, std::map<std::string, Value> attrs);

  /// Adds an edge of a declared type between existing, correctly typed nodes.
  EdgeId add_edge(const std::string& type, NodeId src, NodeId tgt);

  /// Deletes a node together with all incident edges and reports what went.
  DeletedElements delete_node(NodeId id);

  /// Deletes a single edge.
  EdgeData delete_edge(EdgeId id);

  /// Overwrites one attribute, enforcing the declared sort. Returns the old value.
  Value set_attr(NodeId id, const std::string& attr, Value v);

  const Value& attr(NodeId id, const std::string& attr) const;

  bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
  bool has_edge(EdgeId id) const { return edges_.count(id) != 0; }
  const NodeData* node(NodeId id) const;
  const EdgeData* edge(EdgeId id) const;

  const std::map<NodeId, NodeData>& nodes() const { return nodes_; }
  const std::map<EdgeId, EdgeData>& edges() const { return edges_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Ascending ids of all nodes with the given type.
  std::vector<NodeId> nodes_of_type(const std::string& type) const;

  /// Ascending ids of edges matching type and optionally fixed endpoints.
  std::vector<EdgeId> edges_matching(const std::string& type,
                                     std::optional<NodeId> src,
                                     std::optional<NodeId> tgt) const;

  /// Full sweep; empty result on a graph built through this interface.
  /// Violations are ordered by subject id.
  std::vector<Violation> check_conformance() const;

  std::int64_t next_id() const { return next_id_; }

  /// Monotonic mutation counter; lets match results detect staleness.
  std::uint64_t revision() const { return revision_; }

  // Replay support: re-insert elements under explicit ids and restore the id
  // counter. Same schema checks as add_node/add_edge; occupied ids throw.
  void restore_node(NodeId id, const std::string& type,
                    std::map<std::string, Value> attrs);
  void restore_edge(EdgeId id, const std::string& type, NodeId src, NodeId tgt);
  void set_next_id(std::int64_t next);

  /// Structural equality: same schema, ids, attributes, edges and id counter.
  bool operator==(const HostGraph& other) const;

 private:
  void check_node_payload(const std::string& type,
                          const std::map<std::string, Value>& attrs) const;
  void check_edge_payload(const std::string& type, NodeId src, NodeId tgt,
                          const EdgeTypeDecl** out_decl) const;

  std::shared_ptr<const TypeGraph> type_graph_;
  std::map<NodeId, NodeData> nodes_;
  std::map<EdgeId, EdgeData> edges_;
  std::int64_t next_id_ = 0;
  std::uint64_t revision_ = 0;
};

}  // namespace grenn
