#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "grenn/value.hpp"

namespace grenn {

struct AttrDecl {
  std::string name;
  Sort sort;

  bool operator==(const AttrDecl&) const = default;
};

struct NodeTypeDecl {
  std::string name;
  std::vector<AttrDecl> attrs;

  const AttrDecl* attr(const std::string& attr_name) const;
  bool operator==(const NodeTypeDecl&) const = default;
};

/// Directed edge type with fixed endpoint node types. Edges carry no attributes.
struct EdgeTypeDecl {
  std::string name;
  std::string source;
  std::string target;

  bool operator==(const EdgeTypeDecl&) const = default;
};

enum class GraphErrorKind {
  DuplicateType,
  UnknownType,
  UnknownNode,
  UnknownAttr,
  MissingAttr,
  ExtraAttr,
  SortMismatch,
  DanglingEndpoint,
  BadEndpointType,
};

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  GraphErrorKind kind() const { return kind_; }

 private:
  GraphErrorKind kind_;
};

/// Immutable schema: node types with typed attributes plus directed edge types.
/// Validated on construction; lookup failures return nullptr.
class TypeGraph {
 public:
  TypeGraph() = default;

  /// Throws GraphError on duplicate type names or edge endpoints that do not
  /// name a declared node type.
  static TypeGraph build(std::vector<NodeTypeDecl> node_types,
                         std::vector<EdgeTypeDecl> edge_types);

  const NodeTypeDecl* node_type(const std::string& name) const;
  const EdgeTypeDecl* edge_type(const std::string& name) const;

  const std::vector<NodeTypeDecl>& node_types() const { return node_types_; }
  const std::vector<EdgeTypeDecl>& edge_types() const { return edge_types_; }

  bool operator==(const TypeGraph&) const = default;

 private:
  std::vector<NodeTypeDecl> node_types_;
  std::vector<EdgeTypeDecl> edge_types_;
  std::map<std::string, std::size_t> node_index_;
  std::map<std::string, std::size_t> edge_index_;
};

}  // namespace grenn
