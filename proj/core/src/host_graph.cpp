#include "grenn/host_graph.hpp"

#include <algorithm>

namespace grenn {

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::UnknownType: return "unknownType";
    case ViolationKind::MissingAttr: return "missingAttr";
    case ViolationKind::ExtraAttr: return "extraAttr";
    case ViolationKind::SortMismatch: return "sortMismatch";
    case ViolationKind::DanglingEdge: return "danglingEdge";
    case ViolationKind::BadEndpointType: return "badEndpointType";
  }
  return "?";
}

void HostGraph::check_node_payload(const std::string& type,
                                   const std::map<std::string, Value>& attrs) const {
  const NodeTypeDecl* decl = type_graph_->node_type(type);
  if (!decl)
    throw GraphError(GraphErrorKind::UnknownType,
                     "unknown node type '" + type + "'");
  for (const auto& a : decl->attrs) {
    auto it = attrs.find(a.name);
    if (it == attrs.end())
      throw GraphError(GraphErrorKind::MissingAttr,
                       "missing attribute '" + a.name + "' for node type '" +
                           type + "'");
    if (sort_of(it->second) != a.sort)
      throw GraphError(GraphErrorKind::SortMismatch,
                       "attribute '" + a.name + "' of '" + type + "' wants " +
                           to_string(a.sort) + ", got " +
                           to_string(sort_of(it->second)));
  }
  if (attrs.size() != decl->attrs.size())
    for (const auto& [name, value] : attrs)
      if (!decl->attr(name))
        throw GraphError(GraphErrorKind::ExtraAttr,
                         "attribute '" + name + "' not declared on node type '" +
                             type + "'");
}

void HostGraph::check_edge_payload(const std::string& type, NodeId src,
                                   NodeId tgt, const EdgeTypeDecl** out_decl) const {
  const EdgeTypeDecl* decl = type_graph_->edge_type(type);
  if (!decl)
    throw GraphError(GraphErrorKind::UnknownType,
                     "unknown edge type '" + type + "'");
  auto src_it = nodes_.find(src);
  auto tgt_it = nodes_.find(tgt);
  if (src_it == nodes_.end() || tgt_it == nodes_.end())
    throw GraphError(GraphErrorKind::DanglingEndpoint,
                     "edge '" + type + "' references missing node " +
                         std::to_string(src_it == nodes_.end() ? src : tgt));
  if (src_it->second.type != decl->source || tgt_it->second.type != decl->target)
    throw GraphError(GraphErrorKind::BadEndpointType,
                     "edge '" + type + "' wants " + decl->source + "->" +
                         decl->target + ", got " + src_it->second.type + "->" +
                         tgt_it->second.type);
  *out_decl = decl;
}

NodeId HostGraph::add_node(const std::string& type,
                           std::map<std::string, Value> attrs) {
  check_node_payload(type, attrs);
  NodeId id = next_id_++;
  nodes_.emplace(id, NodeData{type, std::move(attrs)});
  ++revision_;
  return id;
}

EdgeId HostGraph::add_edge(const std::string& type, NodeId src, NodeId tgt) {
  const EdgeTypeDecl* decl = nullptr;
  check_edge_payload(type, src, tgt, &decl);
  EdgeId id = next_id_++;
  edges_.emplace(id, EdgeData{type, src, tgt});
  ++revision_;
  return id;
}

DeletedElements HostGraph::delete_node(NodeId id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end())
    throw GraphError(GraphErrorKind::UnknownNode,
                     "unknown node id " + std::to_string(id));
  DeletedElements gone{id, std::move(it->second), {}};
  for (auto eit = edges_.begin(); eit != edges_.end();) {
    if (eit->second.src == id || eit->second.tgt == id) {
      gone.edges.emplace_back(eit->first, eit->second);
      eit = edges_.erase(eit);
    } else {
      ++eit;
    }
  }
  nodes_.erase(it);
  ++revision_;
  return gone;
}

EdgeData HostGraph::delete_edge(EdgeId id) {
  auto it = edges_.find(id);
  if (it == edges_.end())
    throw GraphError(GraphErrorKind::UnknownNode,
                     "unknown edge id " + std::to_string(id));
  EdgeData data = std::move(it->second);
  edges_.erase(it);
  ++revision_;
  return data;
}

Value HostGraph::set_attr(NodeId id, const std::string& attr, Value v) {
  auto it = nodes_.find(id);
  if (it == nodes_.end())
    throw GraphError(GraphErrorKind::UnknownNode,
                     "unknown node id " + std::to_string(id));
  const NodeTypeDecl* decl = type_graph_->node_type(it->second.type);
  const AttrDecl* a = decl ? decl->attr(attr) : nullptr;
  if (!a)
    throw GraphError(GraphErrorKind::UnknownAttr,
                     "node type '" + it->second.type + "' has no attribute '" +
                         attr + "'");
  if (sort_of(v) != a->sort)
    throw GraphError(GraphErrorKind::SortMismatch,
                     "attribute '" + attr + "' wants " + to_string(a->sort) +
                         ", got " + to_string(sort_of(v)));
  Value old = std::move(it->second.attrs[attr]);
  it->second.attrs[attr] = std::move(v);
  ++revision_;
  return old;
}

const Value& HostGraph::attr(NodeId id, const std::string& attr) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end())
    throw GraphError(GraphErrorKind::UnknownNode,
                     "unknown node id " + std::to_string(id));
  auto ait = it->second.attrs.find(attr);
  if (ait == it->second.attrs.end())
    throw GraphError(GraphErrorKind::UnknownAttr,
                     "node " + std::to_string(id) + " has no attribute '" +
                         attr + "'");
  return ait->second;
}

const NodeData* HostGraph::node(NodeId id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const EdgeData* HostGraph::edge(EdgeId id) const {
  auto it = edges_.find(id);
  return it == edges_.end() ? nullptr : &it->second;
}

std::vector<NodeId> HostGraph::nodes_of_type(const std::string& type) const {
  std::vector<NodeId> out;
  for (const auto& [id, data] : nodes_)
    if (data.type == type) out.push_back(id);
  return out;
}

std::vector<EdgeId> HostGraph::edges_matching(const std::string& type,
                                              std::optional<NodeId> src,
                                              std::optional<NodeId> tgt) const {
  std::vector<EdgeId> out;
  for (const auto& [id, data] : edges_) {
    if (data.type != type) continue;
    if (src && data.src != *src) continue;
    if (tgt && data.tgt != *tgt) continue;
    out.push_back(id);
  }
  return out;
}

std::vector<Violation> HostGraph::check_conformance() const {
  std::vector<Violation> out;
  for (const auto& [id, data] : nodes_) {
    const NodeTypeDecl* decl = type_graph_->node_type(data.type);
    if (!decl) {
      out.push_back({ViolationKind::UnknownType, id,
                     "node type '" + data.type + "' not in schema"});
      continue;
    }
    for (const auto& a : decl->attrs) {
      auto it = data.attrs.find(a.name);
      if (it == data.attrs.end())
        out.push_back({ViolationKind::MissingAttr, id,
                       "missing attribute '" + a.name + "'"});
      else if (sort_of(it->second) != a.sort)
        out.push_back({ViolationKind::SortMismatch, id,
                       "attribute '" + a.name + "' has sort " +
                           to_string(sort_of(it->second)) + ", wants " +
                           to_string(a.sort)});
    }
    for (const auto& [name, value] : data.attrs)
      if (!decl->attr(name))
        out.push_back({ViolationKind::ExtraAttr, id,
                       "attribute '" + name + "' not declared"});
  }
  for (const auto& [id, data] : edges_) {
    const EdgeTypeDecl* decl = type_graph_->edge_type(data.type);
    if (!decl) {
      out.push_back({ViolationKind::UnknownType, id,
                     "edge type '" + data.type + "' not in schema"});
      continue;
    }
    const NodeData* src = node(data.src);
    const NodeData* tgt = node(data.tgt);
    if (!src || !tgt) {
      out.push_back({ViolationKind::DanglingEdge, id,
                     "endpoint " + std::to_string(!src ? data.src : data.tgt) +
                         " missing"});
      continue;
    }
    if (src->type != decl->source || tgt->type != decl->target)
      out.push_back({ViolationKind::BadEndpointType, id,
                     "edge '" + data.type + "' connects " + src->type + "->" +
                         tgt->type + ", wants " + decl->source + "->" +
                         decl->target});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Violation& a, const Violation& b) {
                     return a.subject_id < b.subject_id;
                   });
  return out;
}

void HostGraph::restore_node(NodeId id, const std::string& type,
                             std::map<std::string, Value> attrs) {
  if (nodes_.count(id) || edges_.count(id))
    throw GraphError(GraphErrorKind::UnknownNode,
                     "id " + std::to_string(id) + " already occupied");
  check_node_payload(type, attrs);
  nodes_.emplace(id, NodeData{type, std::move(attrs)});
  next_id_ = std::max(next_id_, id + 1);
  ++revision_;
}

void HostGraph::restore_edge(EdgeId id, const std::string& type, NodeId src,
                             NodeId tgt) {
  if (nodes_.count(id) || edges_.count(id))
    throw GraphError(GraphErrorKind::UnknownNode,
                     "id " + std::to_string(id) + " already occupied");
  const EdgeTypeDecl* decl = nullptr;
  check_edge_payload(type, src, tgt, &decl);
  edges_.emplace(id, EdgeData{type, src, tgt});
  next_id_ = std::max(next_id_, id + 1);
  ++revision_;
}

void HostGraph::set_next_id(std::int64_t next) {
  next_id_ = next;
  ++revision_;
}

bool HostGraph::operator==(const HostGraph& other) const {
  return *type_graph_ == *other.type_graph_ && nodes_ == other.nodes_ &&
         edges_ == other.edges_ && next_id_ == other.next_id_;
}

}  // namespace grenn
