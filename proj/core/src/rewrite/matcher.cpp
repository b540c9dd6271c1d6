#include <algorithm>
#include <set>

#include "eval_internal.hpp"
#include "grenn/rewrite/engine.hpp"

namespace grenn::rewrite {

namespace {

bool is_matched(ElementRole r) {
  return r == ElementRole::Reader || r == ElementRole::Eraser;
}

std::set<ElemId> guard_refs(const Guard& g) {
  std::set<ElemId> out;
  if (auto* cmp = std::get_if<Guard::Cmp>(&g.cond)) {
    std::vector<const Expr::AttrRef*> refs;
    detail::collect_attr_refs(cmp->lhs, refs);
    detail::collect_attr_refs(cmp->rhs, refs);
    for (const auto* r : refs) out.insert(r->elem);
  } else {
    const auto& nn = std::get<Guard::NodeNeq>(g.cond);
    out.insert(nn.a);
    out.insert(nn.b);
  }
  return out;
}

/// One element to bind during backtracking. Edge steps may bind their not yet
/// placed endpoints along with the edge.
struct Step {
  const PatternNode* node = nullptr;
  const PatternEdge* edge = nullptr;
  bool src_placed = false;
  bool tgt_placed = false;
  std::vector<const Guard*> checks;  // become decidable once this step binds
};

/// A connected group of embargo elements searched as one negative condition.
struct EmbargoComponent {
  std::vector<Step> steps;
};

struct LevelPlan {
  const QuantLevel* level = nullptr;
  std::vector<LevelId> children;
  std::vector<const PatternNode*> pos_nodes;  // matched nodes of this level
  std::vector<const PatternEdge*> pos_edges;
  std::vector<const Guard*> pre_checks;  // decidable from inherited bindings
  std::vector<Step> steps;
  std::vector<EmbargoComponent> embargoes;
};

class UnionFind {
 public:
  void add(ElemId x) { parent_.emplace(x, x); }
  ElemId find(ElemId x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(ElemId a, ElemId b) { parent_[find(a)] = find(b); }

 private:
  std::map<ElemId, ElemId> parent_;
};

/// Static search order: edges whose endpoints are already placed go first so
/// candidates come from adjacency, not from full type scans; a node is picked
/// (lowest element id) only when no edge has an anchor yet.
std::vector<Step> build_steps(std::vector<const PatternNode*> rem_nodes,
                              std::vector<const PatternEdge*> rem_edges,
                              std::set<ElemId> placed,
                              const std::vector<const Guard*>& guards,
                              std::vector<const Guard*>* pre_checks) {
  auto by_id = [](const auto* a, const auto* b) { return a->id < b->id; };
  std::sort(rem_nodes.begin(), rem_nodes.end(), by_id);
  std::sort(rem_edges.begin(), rem_edges.end(), by_id);

  std::vector<std::pair<const Guard*, std::set<ElemId>>> pending;
  for (const auto* gd : guards) pending.emplace_back(gd, guard_refs(*gd));
  auto attach_ready = [&](std::vector<const Guard*>& sink) {
    for (auto it = pending.begin(); it != pending.end();) {
      bool ready = std::all_of(it->second.begin(), it->second.end(),
                               [&](ElemId e) { return placed.count(e) != 0; });
      if (ready) {
        sink.push_back(it->first);
        it = pending.erase(it);
      } else {
        ++it;
      }
    }
  };

  std::vector<Step> steps;
  if (pre_checks) attach_ready(*pre_checks);
  while (!rem_nodes.empty() || !rem_edges.empty()) {
    auto best = rem_edges.end();
    int best_score = 0;
    for (auto it = rem_edges.begin(); it != rem_edges.end(); ++it) {
      int score = (placed.count((*it)->src) ? 1 : 0) +
                  (placed.count((*it)->tgt) ? 1 : 0);
      if (best == rem_edges.end() || score > best_score) {
        best = it;
        best_score = score;
      }
    }
    Step st;
    if (best != rem_edges.end() && (best_score > 0 || rem_nodes.empty())) {
      const PatternEdge* e = *best;
      st.edge = e;
      st.src_placed = placed.count(e->src) != 0;
      st.tgt_placed = placed.count(e->tgt) != 0;
      placed.insert(e->id);
      placed.insert(e->src);
      placed.insert(e->tgt);
      rem_edges.erase(best);
      std::erase_if(rem_nodes, [&](const PatternNode* n) {
        return n->id == e->src || n->id == e->tgt;
      });
    } else {
      const PatternNode* n = rem_nodes.front();
      st.node = n;
      placed.insert(n->id);
      rem_nodes.erase(rem_nodes.begin());
    }
    attach_ready(st.checks);
    steps.push_back(std::move(st));
  }
  if (!pending.empty())
    throw RuleError("guard references an element no search step binds");
  return steps;
}

class Matcher {
 public:
  Matcher(const Rule& rule, const HostGraph& g, const ParamBinding& params)
      : rule_(rule), g_(g), params_(params) {
    for (const auto& l : rule_.levels)
      if (l.kind == LevelKind::Root) root_ = &l;
    if (!root_) throw RuleError("rule '" + rule_.name + "' has no root level");
    for (const auto& l : rule_.levels) plans_.emplace(l.id, build_plan(l));
  }

  std::vector<MatchForest> run() {
    Binding b0;
    std::set<NodeId> used_nodes;
    std::set<EdgeId> used_edges;
    if (!seed_params(b0, used_nodes)) return {};

    const LevelPlan& rp = plans_.at(root_->id);
    std::vector<Binding> roots;
    if (checks_pass(rp.pre_checks, b0))
      search(rp.steps, 0, b0, used_nodes, used_edges, &roots);

    std::vector<MatchForest> out;
    for (auto& rb : roots) {
      auto m = build_match(root_->id, std::move(rb));
      if (m) out.push_back(MatchForest{std::move(*m), g_.revision()});
    }
    std::sort(out.begin(), out.end(),
              [](const MatchForest& a, const MatchForest& b) {
                return a.root.binding < b.root.binding;
              });
    return out;
  }

 private:
  LevelPlan build_plan(const QuantLevel& ql) {
    LevelPlan p;
    p.level = &ql;
    for (const auto& l : rule_.levels)
      if (l.parent && *l.parent == ql.id) p.children.push_back(l.id);
    std::sort(p.children.begin(), p.children.end());

    // Matched elements of strict ancestors are bound before this level runs;
    // input parameters pre-bind root elements.
    std::set<ElemId> placed;
    std::optional<LevelId> anc = ql.parent;
    while (anc) {
      for (const auto& n : rule_.nodes)
        if (n.level == *anc && is_matched(n.role)) placed.insert(n.id);
      for (const auto& e : rule_.edges)
        if (e.level == *anc && is_matched(e.role)) placed.insert(e.id);
      anc = rule_.level(*anc)->parent;
    }
    if (ql.kind == LevelKind::Root)
      for (const auto& prm : rule_.params)
        if (prm.dir == ParamDir::In) placed.insert(prm.elem);

    std::vector<const PatternNode*> rem_nodes;
    std::vector<const PatternEdge*> rem_edges;
    for (const auto& n : rule_.nodes)
      if (n.level == ql.id && is_matched(n.role)) {
        p.pos_nodes.push_back(&n);
        if (!placed.count(n.id)) rem_nodes.push_back(&n);
      }
    for (const auto& e : rule_.edges)
      if (e.level == ql.id && is_matched(e.role)) {
        p.pos_edges.push_back(&e);
        rem_edges.push_back(&e);
      }

    std::vector<const Guard*> normal;
    std::vector<const Guard*> nac;
    for (const auto& gd : rule_.guards) {
      if (gd.level != ql.id) continue;
      bool embargo_ref = false;
      for (ElemId e : guard_refs(gd)) {
        const PatternNode* pn = rule_.pattern_node(e);
        if (pn && pn->role == ElementRole::Embargo) embargo_ref = true;
      }
      (embargo_ref ? nac : normal).push_back(&gd);
    }

    p.steps = build_steps(rem_nodes, rem_edges, placed, normal, &p.pre_checks);

    std::vector<const PatternNode*> em_nodes;
    std::vector<const PatternEdge*> em_edges;
    for (const auto& n : rule_.nodes)
      if (n.level == ql.id && n.role == ElementRole::Embargo)
        em_nodes.push_back(&n);
    for (const auto& e : rule_.edges)
      if (e.level == ql.id && e.role == ElementRole::Embargo)
        em_edges.push_back(&e);
    if (em_nodes.empty() && em_edges.empty()) return p;

    UnionFind uf;
    for (const auto* n : em_nodes) uf.add(n->id);
    for (const auto* e : em_edges) uf.add(e->id);
    for (const auto* e : em_edges)
      for (ElemId ep : {e->src, e->tgt})
        if (rule_.pattern_node(ep)->role == ElementRole::Embargo)
          uf.unite(e->id, ep);
    for (const auto* gd : nac) {
      std::optional<ElemId> first;
      for (ElemId r : guard_refs(*gd)) {
        const PatternNode* pn = rule_.pattern_node(r);
        if (!pn || pn->role != ElementRole::Embargo) continue;
        if (first)
          uf.unite(*first, r);
        else
          first = r;
      }
    }

    // The whole positive context is bound when a negative condition runs.
    std::set<ElemId> pos_placed = placed;
    for (const auto* n : p.pos_nodes) pos_placed.insert(n->id);
    for (const auto* e : p.pos_edges) pos_placed.insert(e->id);

    std::set<ElemId> reps;
    for (const auto* n : em_nodes) reps.insert(uf.find(n->id));
    for (const auto* e : em_edges) reps.insert(uf.find(e->id));
    for (ElemId rep : reps) {
      std::vector<const PatternNode*> cn;
      std::vector<const PatternEdge*> ce;
      std::vector<const Guard*> cg;
      for (const auto* n : em_nodes)
        if (uf.find(n->id) == rep) cn.push_back(n);
      for (const auto* e : em_edges)
        if (uf.find(e->id) == rep) ce.push_back(e);
      for (const auto* gd : nac)
        for (ElemId r : guard_refs(*gd)) {
          const PatternNode* pn = rule_.pattern_node(r);
          if (pn && pn->role == ElementRole::Embargo && uf.find(r) == rep) {
            cg.push_back(gd);
            break;
          }
        }
      EmbargoComponent comp;
      std::vector<const Guard*> pre;
      comp.steps = build_steps(cn, ce, pos_placed, cg, &pre);
      if (!pre.empty() && !comp.steps.empty())
        comp.steps.front().checks.insert(comp.steps.front().checks.begin(),
                                         pre.begin(), pre.end());
      p.embargoes.push_back(std::move(comp));
    }
    return p;
  }

  bool seed_params(Binding& b, std::set<NodeId>& used_nodes) {
    std::set<std::string> declared;
    for (const auto& prm : rule_.params) {
      if (prm.dir != ParamDir::In) continue;
      declared.insert(prm.name);
      auto it = params_.find(prm.name);
      if (it == params_.end())
        throw ApplyError("rule '" + rule_.name + "': missing input parameter '" +
                         prm.name + "'");
      const NodeData* nd = g_.node(it->second);
      if (!nd)
        throw ApplyError("rule '" + rule_.name + "': input parameter '" +
                         prm.name + "' is bound to a node not in the graph");
      if (nd->type != prm.node_type)
        throw ApplyError("rule '" + rule_.name + "': input parameter '" +
                         prm.name + "' wants a " + prm.node_type + ", got a " +
                         nd->type);
      b[prm.elem] = it->second;
      if (!used_nodes.insert(it->second).second)
        return false;  // two parameters on one host node cannot be injective
    }
    for (const auto& [name, id] : params_) {
      (void)id;
      if (!declared.count(name))
        throw ApplyError("rule '" + rule_.name + "' has no input parameter '" +
                         name + "'");
    }
    return true;
  }

  bool checks_pass(const std::vector<const Guard*>& gs, const Binding& b) const {
    for (const Guard* gd : gs) {
      if (auto* cmp = std::get_if<Guard::Cmp>(&gd->cond)) {
        if (!detail::compare(cmp->op,
                             detail::eval_in_binding(cmp->lhs, b, g_),
                             detail::eval_in_binding(cmp->rhs, b, g_)))
          return false;
      } else {
        const auto& nn = std::get<Guard::NodeNeq>(gd->cond);
        if (b.at(nn.a) == b.at(nn.b)) return false;
      }
    }
    return true;
  }

  /// Backtracking over a step list. With `collect` set, gathers every complete
  /// binding and returns false; without it, stops at the first one.
  bool search(const std::vector<Step>& steps, std::size_t idx, Binding& b,
              std::set<NodeId>& used_nodes, std::set<EdgeId>& used_edges,
              std::vector<Binding>* collect) {
    if (idx == steps.size()) {
      if (collect) {
        collect->push_back(b);
        return false;
      }
      return true;
    }
    const Step& st = steps[idx];
    if (st.node) {
      for (NodeId h : g_.nodes_of_type(st.node->type)) {
        if (used_nodes.count(h)) continue;
        b[st.node->id] = h;
        used_nodes.insert(h);
        bool stop = checks_pass(st.checks, b) &&
                    search(steps, idx + 1, b, used_nodes, used_edges, collect);
        used_nodes.erase(h);
        b.erase(st.node->id);
        if (stop) return true;
      }
      return false;
    }
    std::optional<NodeId> fix_src, fix_tgt;
    if (st.src_placed) fix_src = b.at(st.edge->src);
    if (st.tgt_placed) fix_tgt = b.at(st.edge->tgt);
    for (EdgeId he : g_.edges_matching(st.edge->type, fix_src, fix_tgt)) {
      if (used_edges.count(he)) continue;
      const EdgeData& ed = *g_.edge(he);
      std::vector<std::pair<ElemId, NodeId>> bound;
      auto bind_endpoint = [&](ElemId elem, NodeId host) {
        auto it = b.find(elem);
        if (it != b.end()) return it->second == host;
        if (used_nodes.count(host)) return false;
        b[elem] = host;
        used_nodes.insert(host);
        bound.emplace_back(elem, host);
        return true;
      };
      bool ok = bind_endpoint(st.edge->src, ed.src) &&
                bind_endpoint(st.edge->tgt, ed.tgt);
      bool stop = false;
      if (ok) {
        b[st.edge->id] = he;
        used_edges.insert(he);
        stop = checks_pass(st.checks, b) &&
               search(steps, idx + 1, b, used_nodes, used_edges, collect);
        used_edges.erase(he);
        b.erase(st.edge->id);
      }
      for (auto& [elem, host] : bound) {
        used_nodes.erase(host);
        b.erase(elem);
      }
      if (stop) return true;
    }
    return false;
  }

  /// Builds the match tree under one complete level binding. Returns nothing
  /// when a negative condition holds or a required child level is empty.
  std::optional<MatchNode> build_match(LevelId level, Binding binding) {
    const LevelPlan& plan = plans_.at(level);
    for (const auto& comp : plan.embargoes) {
      Binding ext = binding;
      std::set<NodeId> used_nodes;
      std::set<EdgeId> used_edges;
      for (const auto* n : plan.pos_nodes) used_nodes.insert(binding.at(n->id));
      for (const auto* e : plan.pos_edges) used_edges.insert(binding.at(e->id));
      if (search(comp.steps, 0, ext, used_nodes, used_edges, nullptr))
        return std::nullopt;
    }

    MatchNode m;
    m.level = level;
    m.binding = std::move(binding);
    for (LevelId c : plan.children) {
      const LevelPlan& cp = plans_.at(c);
      std::vector<Binding> cands;
      if (checks_pass(cp.pre_checks, m.binding)) {
        Binding cb = m.binding;
        std::set<NodeId> used_nodes;
        std::set<EdgeId> used_edges;
        search(cp.steps, 0, cb, used_nodes, used_edges, &cands);
      }
      std::vector<MatchNode> kids;
      for (auto& cand : cands) {
        auto k = build_match(c, std::move(cand));
        if (k) kids.push_back(std::move(*k));
      }
      std::sort(kids.begin(), kids.end(),
                [](const MatchNode& a, const MatchNode& b) {
                  return a.binding < b.binding;
                });
      if (cp.level->kind == LevelKind::UniversalNonEmpty && kids.empty())
        return std::nullopt;
      m.children.emplace(c, std::move(kids));
    }
    return m;
  }

  const Rule& rule_;
  const HostGraph& g_;
  const ParamBinding& params_;
  const QuantLevel* root_ = nullptr;
  std::map<LevelId, LevelPlan> plans_;
};

}  // namespace

std::vector<MatchForest> find_match_forests(const Rule& rule,
                                            const HostGraph& g,
                                            const ParamBinding& params) {
  return Matcher(rule, g, params).run();
}

}  // namespace grenn::rewrite
