#include "grenn/rewrite/rule.hpp"

#include <set>

#include "eval_internal.hpp"

namespace grenn::rewrite {

using detail::collect_attr_refs;
using detail::has_aggregate;

namespace {

[[noreturn]] void fail(const std::string& rule, const std::string& what) {
  throw RuleError("rule '" + rule + "': " + what);
}

bool is_matched(ElementRole r) {
  return r == ElementRole::Reader || r == ElementRole::Eraser;
}

/// Walks the parent chain from `at` to the root, true if `anc` is hit.
bool level_reaches(const Rule& rule, LevelId at, LevelId anc) {
  std::optional<LevelId> cur = at;
  while (cur) {
    if (*cur == anc) return true;
    const QuantLevel* l = rule.level(*cur);
    if (!l) return false;
    cur = l->parent;
  }
  return false;
}

/// An element declared at `elem_level` is in scope for anything evaluated at
/// `at` iff its level is an ancestor of `at` or `at` itself.
bool visible_at(const Rule& rule, LevelId elem_level, LevelId at) {
  return level_reaches(rule, at, elem_level);
}

bool is_numeric_sort(Sort s) { return s == Sort::Int || s == Sort::Real; }

}  // namespace

const QuantLevel* Rule::level(LevelId id) const {
  for (const auto& l : levels)
    if (l.id == id) return &l;
  return nullptr;
}

const PatternNode* Rule::pattern_node(ElemId id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

const PatternEdge* Rule::pattern_edge(ElemId id) const {
  for (const auto& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

const Param* Rule::param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

Sort static_sort(const Rule& rule, const TypeGraph& tg, LevelId level,
                 const ExprPtr& e) {
  const auto& n = e->node();
  if (auto* l = std::get_if<Expr::Literal>(&n)) return sort_of(l->value);
  if (auto* a = std::get_if<Expr::AttrRef>(&n)) {
    const PatternNode* pn = rule.pattern_node(a->elem);
    if (!pn)
      fail(rule.name, "attribute reference to unknown pattern node " +
                          std::to_string(a->elem));
    if (!visible_at(rule, pn->level, level))
      fail(rule.name, "attribute reference to element " +
                          std::to_string(a->elem) +
                          " outside its quantification scope");
    const NodeTypeDecl* nt = tg.node_type(pn->type);
    if (!nt) fail(rule.name, "pattern node type '" + pn->type + "' not in schema");
    const AttrDecl* ad = nt->attr(a->attr);
    if (!ad)
      fail(rule.name,
           "type '" + pn->type + "' has no attribute '" + a->attr + "'");
    return ad->sort;
  }
  if (auto* u = std::get_if<Expr::Unary>(&n)) {
    Sort s = static_sort(rule, tg, level, u->child);
    if (!is_numeric_sort(s))
      fail(rule.name, "unary arithmetic on " + to_string(s) + " operand");
    return s;
  }
  if (auto* b = std::get_if<Expr::Binary>(&n)) {
    Sort l = static_sort(rule, tg, level, b->lhs);
    Sort r = static_sort(rule, tg, level, b->rhs);
    if (!is_numeric_sort(l) || !is_numeric_sort(r))
      fail(rule.name, "arithmetic on " + to_string(l) + " and " + to_string(r));
    return (l == Sort::Int && r == Sort::Int) ? Sort::Int : Sort::Real;
  }
  if (auto* c = std::get_if<Expr::Count>(&n)) {
    const QuantLevel* cl = rule.level(c->level);
    if (!cl || !cl->parent || *cl->parent != level)
      fail(rule.name, "count over level " + std::to_string(c->level) +
                          " which is not a child of level " +
                          std::to_string(level));
    return Sort::Int;
  }
  const auto& s = std::get<Expr::Sum>(n);
  const QuantLevel* sl = rule.level(s.level);
  if (!sl || !sl->parent || *sl->parent != level)
    fail(rule.name, "sum over level " + std::to_string(s.level) +
                        " which is not a child of level " +
                        std::to_string(level));
  Sort body = static_sort(rule, tg, s.level, s.body);
  if (!is_numeric_sort(body))
    fail(rule.name, "sum body has sort " + to_string(body));
  return body;
}

void Rule::validate(const TypeGraph& tg) const {
  if (name.empty()) throw RuleError("rule has no name");

  // Level tree: unique ids, exactly one root, every chain reaches it.
  std::set<LevelId> level_ids;
  const QuantLevel* root = nullptr;
  for (const auto& l : levels) {
    if (!level_ids.insert(l.id).second)
      fail(name, "duplicate level id " + std::to_string(l.id));
    if (l.kind == LevelKind::Root) {
      if (root) fail(name, "more than one root level");
      if (l.parent) fail(name, "root level has a parent");
      root = &l;
    } else if (!l.parent) {
      fail(name, "non-root level " + std::to_string(l.id) + " has no parent");
    }
  }
  if (!root) fail(name, "no root level");
  for (const auto& l : levels) {
    if (l.parent && !level_ids.count(*l.parent))
      fail(name, "level " + std::to_string(l.id) + " has unknown parent " +
                     std::to_string(*l.parent));
    std::set<LevelId> seen;
    std::optional<LevelId> cur = l.id;
    while (cur) {
      if (!seen.insert(*cur).second)
        fail(name, "level parent cycle through " + std::to_string(*cur));
      cur = level(*cur)->parent;
    }
    if (!seen.count(root->id))
      fail(name, "level " + std::to_string(l.id) + " is detached from the root");
  }

  // Pattern elements: one id space across nodes and edges.
  std::set<ElemId> elem_ids;
  for (const auto& pn : nodes) {
    if (!elem_ids.insert(pn.id).second)
      fail(name, "duplicate element id " + std::to_string(pn.id));
    if (!level_ids.count(pn.level))
      fail(name, "node " + std::to_string(pn.id) + " on unknown level");
    if (!tg.node_type(pn.type))
      fail(name, "node " + std::to_string(pn.id) + " has unknown type '" +
                     pn.type + "'");
  }
  for (const auto& pe : edges) {
    if (!elem_ids.insert(pe.id).second)
      fail(name, "duplicate element id " + std::to_string(pe.id));
    if (!level_ids.count(pe.level))
      fail(name, "edge " + std::to_string(pe.id) + " on unknown level");
    const EdgeTypeDecl* et = tg.edge_type(pe.type);
    if (!et)
      fail(name, "edge " + std::to_string(pe.id) + " has unknown type '" +
                     pe.type + "'");
    const PatternNode* src = pattern_node(pe.src);
    const PatternNode* tgt = pattern_node(pe.tgt);
    if (!src || !tgt)
      fail(name, "edge " + std::to_string(pe.id) + " references a missing node");
    if (src->type != et->source || tgt->type != et->target)
      fail(name, "edge " + std::to_string(pe.id) + " endpoint types " +
                     src->type + "->" + tgt->type + " do not fit '" + pe.type +
                     "' (" + et->source + "->" + et->target + ")");
    if (!visible_at(*this, src->level, pe.level) ||
        !visible_at(*this, tgt->level, pe.level))
      fail(name, "edge " + std::to_string(pe.id) +
                     " endpoints are outside its quantification scope");

    // Role compatibility of the edge with its endpoints.
    auto endpoint_ok = [&](const PatternNode& n) {
      switch (pe.role) {
        case ElementRole::Reader:
        case ElementRole::Eraser:
          return is_matched(n.role);
        case ElementRole::Creator:
          return n.role == ElementRole::Reader ||
                 n.role == ElementRole::Creator;
        case ElementRole::Embargo:
          return is_matched(n.role) || n.role == ElementRole::Embargo;
        case ElementRole::CreatorIfAbsent:
          return n.role == ElementRole::Reader ||
                 n.role == ElementRole::CreatorIfAbsent;
      }
      return false;
    };
    if (!endpoint_ok(*src) || !endpoint_ok(*tgt))
      fail(name, "edge " + std::to_string(pe.id) +
                     " role is incompatible with an endpoint role");
    if (pe.role == ElementRole::Embargo) {
      // Embargo endpoints that are themselves embargo nodes belong to the
      // same condition, hence the same level.
      for (const PatternNode* n : {src, tgt})
        if (n->role == ElementRole::Embargo && n->level != pe.level)
          fail(name, "embargo edge " + std::to_string(pe.id) +
                         " spans embargo nodes of another level");
    }
    if (pe.role == ElementRole::CreatorIfAbsent) {
      bool src_cia = src->role == ElementRole::CreatorIfAbsent;
      bool tgt_cia = tgt->role == ElementRole::CreatorIfAbsent;
      if (src_cia == tgt_cia)
        fail(name, "conditional-creator edge " + std::to_string(pe.id) +
                       " must join one conditional node with one matched node");
      const PatternNode* cia = src_cia ? src : tgt;
      if (cia->level != pe.level)
        fail(name, "conditional-creator edge " + std::to_string(pe.id) +
                       " is not on its conditional node's level");
    }
  }

  // Guards.
  for (const auto& g : guards) {
    if (!level_ids.count(g.level)) fail(name, "guard on unknown level");
    if (auto* cmp = std::get_if<Guard::Cmp>(&g.cond)) {
      if (has_aggregate(cmp->lhs) || has_aggregate(cmp->rhs))
        fail(name, "guard expressions must be aggregate-free");
      std::vector<const Expr::AttrRef*> refs;
      collect_attr_refs(cmp->lhs, refs);
      collect_attr_refs(cmp->rhs, refs);
      for (const auto* r : refs) {
        const PatternNode* pn = pattern_node(r->elem);
        if (!pn)
          fail(name, "guard references unknown element " +
                         std::to_string(r->elem));
        if (pn->role == ElementRole::Creator ||
            pn->role == ElementRole::CreatorIfAbsent)
          fail(name, "guard references created element " +
                         std::to_string(r->elem));
        // Embargo attributes may only constrain the level's own condition.
        if (pn->role == ElementRole::Embargo && pn->level != g.level)
          fail(name, "guard references embargo element " +
                         std::to_string(r->elem) + " of another level");
        if (pn->role != ElementRole::Embargo &&
            !visible_at(*this, pn->level, g.level))
          fail(name, "guard references element " + std::to_string(r->elem) +
                         " outside its quantification scope");
      }
      Sort ls = static_sort(*this, tg, g.level, cmp->lhs);
      Sort rs = static_sort(*this, tg, g.level, cmp->rhs);
      bool ordered = cmp->op != CmpOp::Eq && cmp->op != CmpOp::Ne;
      if (ordered && (!is_numeric_sort(ls) || !is_numeric_sort(rs)))
        fail(name, "ordering comparison on " + to_string(ls) + " and " +
                       to_string(rs));
      if (!ordered && ls != rs && !(is_numeric_sort(ls) && is_numeric_sort(rs)))
        fail(name, "equality comparison on " + to_string(ls) + " and " +
                       to_string(rs));
    } else {
      const auto& nn = std::get<Guard::NodeNeq>(g.cond);
      for (ElemId e : {nn.a, nn.b}) {
        const PatternNode* pn = pattern_node(e);
        if (!pn || !is_matched(pn->role))
          fail(name, "node inequality references element " + std::to_string(e) +
                         " which is not a matched node");
        if (!visible_at(*this, pn->level, g.level))
          fail(name, "node inequality references element " + std::to_string(e) +
                         " outside its quantification scope");
      }
    }
  }

  // Attribute assignments.
  for (const auto& a : assigns) {
    if (!level_ids.count(a.level)) fail(name, "assignment on unknown level");
    const PatternNode* pn = pattern_node(a.target);
    if (!pn)
      fail(name, "assignment to unknown element " + std::to_string(a.target));
    if (pn->role == ElementRole::Eraser || pn->role == ElementRole::Embargo)
      fail(name, "assignment to element " + std::to_string(a.target) +
                     " which never survives application");
    if (!visible_at(*this, pn->level, a.level))
      fail(name, "assignment to element " + std::to_string(a.target) +
                     " outside its quantification scope");
    const NodeTypeDecl* nt = tg.node_type(pn->type);
    const AttrDecl* ad = nt ? nt->attr(a.attr) : nullptr;
    if (!ad)
      fail(name, "assignment to unknown attribute '" + a.attr + "' of type '" +
                     pn->type + "'");
    std::vector<const Expr::AttrRef*> refs;
    collect_attr_refs(a.value, refs);
    for (const auto* r : refs) {
      const PatternNode* ref = pattern_node(r->elem);
      if (ref && (ref->role == ElementRole::Creator ||
                  ref->role == ElementRole::CreatorIfAbsent ||
                  ref->role == ElementRole::Embargo))
        fail(name, "assignment value reads element " + std::to_string(r->elem) +
                       " which has no pre-state");
    }
    Sort vs = static_sort(*this, tg, a.level, a.value);
    if (vs != ad->sort)
      fail(name, "assignment of " + to_string(vs) + " value to " +
                     to_string(ad->sort) + " attribute '" + a.attr + "'");
  }

  // Created nodes must be born with every schema attribute assigned.
  for (const auto& pn : nodes) {
    if (pn.role != ElementRole::Creator &&
        pn.role != ElementRole::CreatorIfAbsent)
      continue;
    const NodeTypeDecl* nt = tg.node_type(pn.type);
    for (const auto& ad : nt->attrs) {
      bool found = false;
      for (const auto& a : assigns)
        if (a.target == pn.id && a.attr == ad.name && a.level == pn.level)
          found = true;
      if (!found)
        fail(name, "created node " + std::to_string(pn.id) +
                       " lacks an assignment for attribute '" + ad.name + "'");
    }
  }

  // Parameters.
  std::set<std::string> param_names;
  for (const auto& p : params) {
    if (p.name.empty()) fail(name, "parameter with empty name");
    if (!param_names.insert(p.name).second)
      fail(name, "duplicate parameter '" + p.name + "'");
    const PatternNode* pn = pattern_node(p.elem);
    if (!pn)
      fail(name, "parameter '" + p.name + "' references unknown element");
    if (pn->level != root->id)
      fail(name, "parameter '" + p.name + "' references a non-root element");
    if (pn->type != p.node_type)
      fail(name, "parameter '" + p.name + "' type '" + p.node_type +
                     "' does not match element type '" + pn->type + "'");
    if (p.dir == ParamDir::In && !is_matched(pn->role))
      fail(name, "input parameter '" + p.name + "' must bind a matched node");
    if (p.dir == ParamDir::Out && !is_matched(pn->role) &&
        pn->role != ElementRole::Creator)
      fail(name, "output parameter '" + p.name +
                     "' must name a matched or created node");
  }
}

}  // namespace grenn::rewrite
