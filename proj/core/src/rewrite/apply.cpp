#include <algorithm>
#include <set>
#include <variant>

#include "grenn/rewrite/engine.hpp"

namespace grenn::rewrite {

namespace {

bool is_created_role(ElementRole r) {
  return r == ElementRole::Creator || r == ElementRole::CreatorIfAbsent;
}

struct PlannedNode {
  ElemId elem;
  NodeId id;
  std::string type;
  std::map<std::string, Value> attrs;
};

struct PlannedEdge {
  EdgeId id;
  std::string type;
  NodeId src;
  NodeId tgt;
};

struct PlannedWrite {
  NodeId node;
  std::string attr;
  Value value;
};

/// Read-only planning pass. Evaluates every expression against the unmodified
/// graph, decides conditional creations, assigns the ids creations will get,
/// and collects writes; the graph is not touched until commit.
class Planner {
 public:
  Planner(const Rule& rule, const HostGraph& g)
      : rule_(rule), g_(g), next_id_(g.next_id()) {}

  void walk(const MatchNode& m, bool is_root) {
    const LevelId lv = m.level;
    for (const auto& n : rule_.nodes)
      if (n.level == lv && n.role == ElementRole::Eraser)
        del_nodes.insert(m.binding.at(n.id));
    for (const auto& e : rule_.edges)
      if (e.level == lv && e.role == ElementRole::Eraser)
        del_edges.insert(m.binding.at(e.id));

    std::vector<ElemId> scoped;
    for (const auto& n : rule_.nodes) {
      if (n.level != lv || !is_created_role(n.role)) continue;
      if (n.role == ElementRole::CreatorIfAbsent && counterpart_exists(n, m))
        continue;
      PlannedNode pn;
      pn.elem = n.id;
      pn.id = next_id_++;
      pn.type = n.type;
      for (const auto& a : rule_.assigns)
        if (a.level == lv && a.target == n.id)
          pn.attrs[a.attr] = eval_expr(a.value, m, g_, &rule_);
      scope_[n.id] = pn.id;
      scoped.push_back(n.id);
      if (is_root) root_created[n.id] = pn.id;
      creations.emplace_back(std::move(pn));
    }
    for (const auto& e : rule_.edges) {
      if (e.level != lv || !is_created_role(e.role)) continue;
      if (e.role == ElementRole::CreatorIfAbsent) {
        ElemId cia = rule_.pattern_node(e.src)->role ==
                             ElementRole::CreatorIfAbsent
                         ? e.src
                         : e.tgt;
        if (!scope_.count(cia)) continue;  // its node kept a counterpart
      }
      auto src = resolve(e.src, m);
      auto tgt = resolve(e.tgt, m);
      if (!src || !tgt)
        throw ApplyError("rule '" + rule_.name +
                         "': created edge has an unresolved endpoint");
      creations.emplace_back(PlannedEdge{next_id_++, e.type, *src, *tgt});
    }

    for (const auto& a : rule_.assigns) {
      if (a.level != lv) continue;
      const PatternNode* tn = rule_.pattern_node(a.target);
      if (is_created_role(tn->role) && tn->level == lv)
        continue;  // consumed above as an initial attribute
      auto host = resolve(a.target, m);
      if (!host) continue;  // conditional creation kept a counterpart
      writes.push_back({*host, a.attr, eval_expr(a.value, m, g_, &rule_)});
    }

    for (const auto& [child, kids] : m.children) {
      (void)child;
      for (const auto& k : kids) walk(k, false);
    }
    for (ElemId e : scoped) scope_.erase(e);
  }

  std::set<NodeId> del_nodes;
  std::set<EdgeId> del_edges;
  std::vector<std::variant<PlannedNode, PlannedEdge>> creations;
  std::vector<PlannedWrite> writes;
  std::map<ElemId, NodeId> root_created;

 private:
  std::optional<NodeId> resolve(ElemId elem, const MatchNode& m) const {
    auto it = m.binding.find(elem);
    if (it != m.binding.end()) return it->second;
    auto jt = scope_.find(elem);
    if (jt != scope_.end()) return jt->second;
    return std::nullopt;
  }

  /// A counterpart of a conditional creation is a pre-state node of the same
  /// type carrying, for every conditional edge of the pattern, an edge of that
  /// type to the same matched endpoint.
  bool counterpart_exists(const PatternNode& cn, const MatchNode& m) const {
    struct Constraint {
      std::string type;
      bool outgoing;
      NodeId other;
    };
    std::vector<Constraint> cs;
    for (const auto& e : rule_.edges) {
      if (e.role != ElementRole::CreatorIfAbsent || e.level != cn.level)
        continue;
      if (e.src == cn.id)
        cs.push_back({e.type, true, m.binding.at(e.tgt)});
      else if (e.tgt == cn.id)
        cs.push_back({e.type, false, m.binding.at(e.src)});
    }
    for (NodeId h : g_.nodes_of_type(cn.type)) {
      bool ok = true;
      for (const auto& c : cs) {
        auto hits = c.outgoing ? g_.edges_matching(c.type, h, c.other)
                               : g_.edges_matching(c.type, c.other, h);
        if (hits.empty()) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
    return false;
  }

  const Rule& rule_;
  const HostGraph& g_;
  std::int64_t next_id_;
  std::map<ElemId, NodeId> scope_;
};

}  // namespace

ApplicationRecord apply(const Rule& rule, HostGraph& g,
                        const MatchForest& forest) {
  if (forest.revision != g.revision())
    throw ApplyError("rule '" + rule.name +
                     "': match is stale, the graph changed since matching");

  Planner plan(rule, g);
  plan.walk(forest.root, true);

  // A created edge may not lean on a node the same application deletes.
  for (const auto& c : plan.creations)
    if (auto* pe = std::get_if<PlannedEdge>(&c))
      if (plan.del_nodes.count(pe->src) || plan.del_nodes.count(pe->tgt))
        throw ApplyError("rule '" + rule.name +
                         "': created edge targets a deleted node");

  ApplicationRecord rec;
  rec.rule = rule.name;
  rec.next_id_before = g.next_id();

  for (EdgeId id : plan.del_edges) {
    EdgeData ed = g.delete_edge(id);
    rec.deleted_edges.push_back({id, ed.type, ed.src, ed.tgt});
  }
  for (NodeId id : plan.del_nodes) {
    DeletedElements del = g.delete_node(id);
    for (auto& [eid, ed] : del.edges)
      rec.deleted_edges.push_back({eid, ed.type, ed.src, ed.tgt});
    rec.deleted_nodes.push_back(
        {id, std::move(del.node_data.type), std::move(del.node_data.attrs)});
  }

  for (const auto& c : plan.creations) {
    if (auto* pn = std::get_if<PlannedNode>(&c)) {
      NodeId id = g.add_node(pn->type, pn->attrs);
      if (id != pn->id)
        throw ApplyError("rule '" + rule.name + "': id drift during commit");
      rec.created_nodes.push_back({id, pn->type, pn->attrs});
    } else {
      const auto& pe = std::get<PlannedEdge>(c);
      EdgeId id = g.add_edge(pe.type, pe.src, pe.tgt);
      if (id != pe.id)
        throw ApplyError("rule '" + rule.name + "': id drift during commit");
      rec.created_edges.push_back({id, pe.type, pe.src, pe.tgt});
    }
  }

  for (const auto& w : plan.writes) {
    if (plan.del_nodes.count(w.node)) continue;  // the target went away
    Value old = g.set_attr(w.node, w.attr, w.value);
    rec.writes.push_back({w.node, w.attr, std::move(old), w.value});
  }

  for (const auto& p : rule.params) {
    if (p.dir != ParamDir::Out) continue;
    auto it = forest.root.binding.find(p.elem);
    if (it != forest.root.binding.end()) {
      rec.out_bindings[p.name] = it->second;
    } else {
      auto jt = plan.root_created.find(p.elem);
      if (jt == plan.root_created.end())
        throw ApplyError("rule '" + rule.name + "': output parameter '" +
                         p.name + "' was neither matched nor created");
      rec.out_bindings[p.name] = jt->second;
    }
  }

  rec.next_id_after = g.next_id();
  return rec;
}

std::optional<ApplicationRecord> apply_once(const Rule& rule, HostGraph& g,
                                            const ParamBinding& params) {
  auto forests = find_match_forests(rule, g, params);
  if (forests.empty()) return std::nullopt;
  return apply(rule, g, forests.front());
}

void replay_record(HostGraph& g, const ApplicationRecord& rec) {
  for (const auto& e : rec.deleted_edges) g.delete_edge(e.id);
  for (const auto& n : rec.deleted_nodes) g.delete_node(n.id);
  // Creations interleave nodes and edges; ascending id is creation order.
  std::size_t ni = 0, ei = 0;
  while (ni < rec.created_nodes.size() || ei < rec.created_edges.size()) {
    bool take_node =
        ei == rec.created_edges.size() ||
        (ni < rec.created_nodes.size() &&
         rec.created_nodes[ni].id < rec.created_edges[ei].id);
    if (take_node) {
      const auto& n = rec.created_nodes[ni++];
      g.restore_node(n.id, n.type, n.attrs);
    } else {
      const auto& e = rec.created_edges[ei++];
      g.restore_edge(e.id, e.type, e.src, e.tgt);
    }
  }
  for (const auto& w : rec.writes) g.set_attr(w.node, w.attr, w.new_value);
  g.set_next_id(rec.next_id_after);
}

void invert_record(HostGraph& g, const ApplicationRecord& rec) {
  for (auto it = rec.writes.rbegin(); it != rec.writes.rend(); ++it)
    g.set_attr(it->node, it->attr, it->old_value);
  for (const auto& e : rec.created_edges) g.delete_edge(e.id);
  for (const auto& n : rec.created_nodes) g.delete_node(n.id);
  for (const auto& n : rec.deleted_nodes) g.restore_node(n.id, n.type, n.attrs);
  for (const auto& e : rec.deleted_edges)
    g.restore_edge(e.id, e.type, e.src, e.tgt);
  g.set_next_id(rec.next_id_before);
}

}  // namespace grenn::rewrite
