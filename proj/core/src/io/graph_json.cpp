#include "grenn/io/graph_json.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>

#include <nlohmann/json.hpp>

namespace grenn::io {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

ordered_json value_to_json(const Value& v) {
  switch (sort_of(v)) {
    case Sort::Bool: return std::get<bool>(v);
    case Sort::Int: return std::get<std::int64_t>(v);
    case Sort::Real: return std::get<double>(v);
    case Sort::String: return std::get<std::string>(v);
  }
  return nullptr;
}

/// Reads a JSON scalar at the sort its attribute declaration demands.
Value value_from_json(const ordered_json& j, Sort sort, const std::string& at) {
  switch (sort) {
    case Sort::Bool:
      if (j.is_boolean()) return j.get<bool>();
      break;
    case Sort::Int:
      if (j.is_number_integer()) return j.get<std::int64_t>();
      break;
    case Sort::Real:
      if (j.is_number() && !j.is_boolean()) return j.get<double>();
      break;
    case Sort::String:
      if (j.is_string()) return j.get<std::string>();
      break;
  }
  throw IoError(at + ": expected a " + to_string(sort) + " value, got " +
                std::string(j.type_name()));
}

const ordered_json& field(const ordered_json& j, const char* key,
                          const std::string& at) {
  auto it = j.find(key);
  if (it == j.end()) throw IoError(at + ": missing field '" + key + "'");
  return *it;
}

TypeGraph type_graph_from_json(const ordered_json& j) {
  std::vector<NodeTypeDecl> node_types;
  for (const auto& nt : field(j, "nodeTypes", "typeGraph")) {
    NodeTypeDecl decl;
    decl.name = field(nt, "name", "nodeTypes").get<std::string>();
    for (const auto& a : field(nt, "attrs", "nodeTypes." + decl.name)) {
      std::string sort = field(a, "sort", "attrs").get<std::string>();
      Sort s;
      if (sort == "bool") s = Sort::Bool;
      else if (sort == "int") s = Sort::Int;
      else if (sort == "real") s = Sort::Real;
      else if (sort == "string") s = Sort::String;
      else throw IoError("unknown sort '" + sort + "'");
      decl.attrs.push_back({field(a, "name", "attrs").get<std::string>(), s});
    }
    node_types.push_back(std::move(decl));
  }
  std::vector<EdgeTypeDecl> edge_types;
  for (const auto& et : field(j, "edgeTypes", "typeGraph"))
    edge_types.push_back({field(et, "name", "edgeTypes").get<std::string>(),
                          field(et, "source", "edgeTypes").get<std::string>(),
                          field(et, "target", "edgeTypes").get<std::string>()});
  try {
    return TypeGraph::build(std::move(node_types), std::move(edge_types));
  } catch (const GraphError& e) {
    throw IoError(std::string("invalid type graph: ") + e.what());
  }
}

}  // namespace

std::string save_graph(const HostGraph& g) {
  ordered_json doc;
  doc["formatVersion"] = kFormatVersion;

  ordered_json tg;
  tg["nodeTypes"] = ordered_json::array();
  for (const auto& nt : g.type_graph().node_types()) {
    ordered_json attrs = ordered_json::array();
    for (const auto& a : nt.attrs)
      attrs.push_back({{"name", a.name}, {"sort", to_string(a.sort)}});
    tg["nodeTypes"].push_back({{"name", nt.name}, {"attrs", std::move(attrs)}});
  }
  tg["edgeTypes"] = ordered_json::array();
  for (const auto& et : g.type_graph().edge_types())
    tg["edgeTypes"].push_back(
        {{"name", et.name}, {"source", et.source}, {"target", et.target}});
  doc["typeGraph"] = std::move(tg);

  doc["nodes"] = ordered_json::array();
  for (const auto& [id, n] : g.nodes()) {
    ordered_json attrs;
    for (const auto& [name, v] : n.attrs) attrs[name] = value_to_json(v);
    doc["nodes"].push_back(
        {{"id", id}, {"type", n.type}, {"attrs", std::move(attrs)}});
  }

  doc["edges"] = ordered_json::array();
  for (const auto& [id, e] : g.edges())
    doc["edges"].push_back(
        {{"id", id}, {"type", e.type}, {"src", e.src}, {"tgt", e.tgt}});

  doc["nextId"] = g.next_id();
  return doc.dump(2) + "\n";
}

HostGraph load_graph(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw IoError(std::string("not a graph document: ") + e.what());
  }
  if (!doc.is_object()) throw IoError("not a graph document: root is not an object");

  const ordered_json& version = field(doc, "formatVersion", "document");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion)
    throw IoError("unsupported formatVersion " + version.dump());

  HostGraph g(type_graph_from_json(field(doc, "typeGraph", "document")));
  const TypeGraph& tg = g.type_graph();

  std::int64_t max_id = -1;
  try {
    for (const auto& jn : field(doc, "nodes", "document")) {
      std::int64_t id = field(jn, "id", "nodes").get<std::int64_t>();
      std::string type = field(jn, "type", "nodes").get<std::string>();
      const NodeTypeDecl* decl = tg.node_type(type);
      if (!decl) throw IoError("node " + std::to_string(id) +
                               ": unknown type '" + type + "'");
      std::map<std::string, Value> attrs;
      for (const auto& [name, jv] :
           field(jn, "attrs", "nodes").items()) {
        const AttrDecl* ad = decl->attr(name);
        if (!ad) throw IoError("node " + std::to_string(id) + ": type '" +
                               type + "' has no attribute '" + name + "'");
        attrs.emplace(name, value_from_json(jv, ad->sort,
                                            "node " + std::to_string(id) +
                                                " attribute '" + name + "'"));
      }
      g.restore_node(id, type, std::move(attrs));
      max_id = std::max(max_id, id);
    }

    // Endpoint checks before insertion so a broken document reports its
    // defects as Violation records instead of failing on the first edge.
    std::vector<Violation> violations;
    const ordered_json& edges = field(doc, "edges", "document");
    for (const auto& je : edges) {
      std::int64_t id = field(je, "id", "edges").get<std::int64_t>();
      std::int64_t src = field(je, "src", "edges").get<std::int64_t>();
      std::int64_t tgt = field(je, "tgt", "edges").get<std::int64_t>();
      for (std::int64_t end : {src, tgt})
        if (!g.has_node(end))
          violations.push_back({ViolationKind::DanglingEdge, id,
                                "edge endpoint " + std::to_string(end) +
                                    " is not a node"});
    }
    if (!violations.empty()) {
      std::string msg = "document describes a broken graph:";
      for (const auto& v : violations) msg += "\n  " + v.detail;
      throw IoError(msg, std::move(violations));
    }
    for (const auto& je : edges) {
      std::int64_t id = field(je, "id", "edges").get<std::int64_t>();
      g.restore_edge(id, field(je, "type", "edges").get<std::string>(),
                     field(je, "src", "edges").get<std::int64_t>(),
                     field(je, "tgt", "edges").get<std::int64_t>());
      max_id = std::max(max_id, id);
    }
  } catch (const GraphError& e) {
    throw IoError(std::string("document describes a broken graph: ") + e.what());
  }

  const ordered_json& next = field(doc, "nextId", "document");
  if (!next.is_number_integer() || next.get<std::int64_t>() <= max_id)
    throw IoError("nextId must exceed every element id");
  g.set_next_id(next.get<std::int64_t>());
  return g;
}

}  // namespace grenn::io
