#include "grenn/type_graph.hpp"

namespace grenn {

const AttrDecl* NodeTypeDecl::attr(const std::string& attr_name) const {
  for (const auto& a : attrs)
    if (a.name == attr_name) return &a;
  return nullptr;
}

TypeGraph TypeGraph::build(std::vector<NodeTypeDecl> node_types,
                           std::vector<EdgeTypeDecl> edge_types) {
  TypeGraph tg;
  tg.node_types_ = std::move(node_types);
  tg.edge_types_ = std::move(edge_types);

  for (std::size_t i = 0; i < tg.node_types_.size(); ++i) {
    const auto& nt = tg.node_types_[i];
    if (!tg.node_index_.emplace(nt.name, i).second)
      throw GraphError(GraphErrorKind::DuplicateType,
                       "duplicate node type '" + nt.name + "'");
    std::map<std::string, int> seen;
    for (const auto& a : nt.attrs)
      if (++seen[a.name] > 1)
        throw GraphError(GraphErrorKind::DuplicateType,
                         "duplicate attribute '" + a.name + "' on node type '" +
                             nt.name + "'");
  }
  for (std::size_t i = 0; i < tg.edge_types_.size(); ++i) {
    const auto& et = tg.edge_types_[i];
    if (!tg.edge_index_.emplace(et.name, i).second)
      throw GraphError(GraphErrorKind::DuplicateType,
                       "duplicate edge type '" + et.name + "'");
    if (tg.node_index_.count(et.source) == 0)
      throw GraphError(GraphErrorKind::BadEndpointType,
                       "edge type '" + et.name + "' has unknown source type '" +
                           et.source + "'");
    if (tg.node_index_.count(et.target) == 0)
      throw GraphError(GraphErrorKind::BadEndpointType,
                       "edge type '" + et.name + "' has unknown target type '" +
                           et.target + "'");
  }
  return tg;
}

const NodeTypeDecl* TypeGraph::node_type(const std::string& name) const {
  auto it = node_index_.find(name);
  return it == node_index_.end() ? nullptr : &node_types_[it->second];
}

const EdgeTypeDecl* TypeGraph::edge_type(const std::string& name) const {
  auto it = edge_index_.find(name);
  return it == edge_index_.end() ? nullptr : &edge_types_[it->second];
}

}  // namespace grenn
