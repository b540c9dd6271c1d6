#include <cmath>

#include "grenn/rewrite/engine.hpp"
#include "eval_internal.hpp"

namespace grenn::rewrite {

namespace detail {

bool is_numeric(const Value& v) {
  Sort s = sort_of(v);
  return s == Sort::Int || s == Sort::Real;
}

double as_real(const Value& v) {
  return sort_of(v) == Sort::Int
             ? static_cast<double>(std::get<std::int64_t>(v))
             : std::get<double>(v);
}

Value arith_bin(BinOp op, const Value& l, const Value& r) {
  if (!is_numeric(l) || !is_numeric(r))
    throw EvalError("sort mismatch in arithmetic: " + to_string(sort_of(l)) +
                    " with " + to_string(sort_of(r)));
  if (sort_of(l) == Sort::Int && sort_of(r) == Sort::Int) {
    std::int64_t a = std::get<std::int64_t>(l);
    std::int64_t b = std::get<std::int64_t>(r);
    switch (op) {
      case BinOp::Add: return a + b;
      case BinOp::Sub: return a - b;
      case BinOp::Mul: return a * b;
      case BinOp::Div:
        if (b == 0) throw EvalError("division by zero");
        return a / b;
    }
  }
  double a = as_real(l);
  double b = as_real(r);
  switch (op) {
    case BinOp::Add: return a + b;
    case BinOp::Sub: return a - b;
    case BinOp::Mul: return a * b;
    case BinOp::Div:
      if (b == 0.0) throw EvalError("division by zero");
      return a / b;
  }
  throw EvalError("unreachable arithmetic op");
}

Value arith_un(UnOp op, const Value& v) {
  if (!is_numeric(v))
    throw EvalError("sort mismatch in arithmetic: unary op on " +
                    to_string(sort_of(v)));
  if (sort_of(v) == Sort::Int) {
    std::int64_t a = std::get<std::int64_t>(v);
    return op == UnOp::Neg ? -a : (a < 0 ? -a : a);
  }
  double a = std::get<double>(v);
  return op == UnOp::Neg ? -a : std::fabs(a);
}

bool compare(CmpOp op, const Value& l, const Value& r) {
  if (is_numeric(l) && is_numeric(r)) {
    double a = as_real(l);
    double b = as_real(r);
    switch (op) {
      case CmpOp::Lt: return a < b;
      case CmpOp::Le: return a <= b;
      case CmpOp::Eq: return a == b;
      case CmpOp::Ne: return a != b;
      case CmpOp::Ge: return a >= b;
      case CmpOp::Gt: return a > b;
    }
  }
  if (sort_of(l) != sort_of(r))
    throw EvalError("sort mismatch in comparison: " + to_string(sort_of(l)) +
                    " with " + to_string(sort_of(r)));
  if (op == CmpOp::Eq) return l == r;
  if (op == CmpOp::Ne) return l != r;
  throw EvalError("ordering comparison on " + to_string(sort_of(l)));
}

Value eval_in_binding(const ExprPtr& e, const Binding& b, const HostGraph& g) {
  const auto& node = e->node();
  if (auto* l = std::get_if<Expr::Literal>(&node)) return l->value;
  if (auto* a = std::get_if<Expr::AttrRef>(&node)) {
    auto it = b.find(a->elem);
    if (it == b.end())
      throw EvalError("attribute reference to unbound element " +
                      std::to_string(a->elem));
    return g.attr(it->second, a->attr);
  }
  if (auto* u = std::get_if<Expr::Unary>(&node))
    return arith_un(u->op, eval_in_binding(u->child, b, g));
  if (auto* bin = std::get_if<Expr::Binary>(&node))
    return arith_bin(bin->op, eval_in_binding(bin->lhs, b, g),
                     eval_in_binding(bin->rhs, b, g));
  throw EvalError("aggregate in guard position");
}

bool has_aggregate(const ExprPtr& e) {
  const auto& n = e->node();
  if (std::holds_alternative<Expr::Sum>(n)) return true;
  if (std::holds_alternative<Expr::Count>(n)) return true;
  if (auto* u = std::get_if<Expr::Unary>(&n)) return has_aggregate(u->child);
  if (auto* b = std::get_if<Expr::Binary>(&n))
    return has_aggregate(b->lhs) || has_aggregate(b->rhs);
  return false;
}

void collect_attr_refs(const ExprPtr& e,
                       std::vector<const Expr::AttrRef*>& out) {
  const auto& n = e->node();
  if (auto* a = std::get_if<Expr::AttrRef>(&n)) out.push_back(a);
  if (auto* u = std::get_if<Expr::Unary>(&n)) collect_attr_refs(u->child, out);
  if (auto* b = std::get_if<Expr::Binary>(&n)) {
    collect_attr_refs(b->lhs, out);
    collect_attr_refs(b->rhs, out);
  }
  if (auto* s = std::get_if<Expr::Sum>(&n)) collect_attr_refs(s->body, out);
}

}  // namespace detail

Value eval_expr(const ExprPtr& e, const MatchNode& ctx, const HostGraph& g,
                const Rule* rule) {
  const auto& node = e->node();
  if (auto* l = std::get_if<Expr::Literal>(&node)) return l->value;
  if (auto* a = std::get_if<Expr::AttrRef>(&node)) {
    auto it = ctx.binding.find(a->elem);
    if (it == ctx.binding.end())
      throw EvalError("attribute reference to unbound element " +
                      std::to_string(a->elem));
    return g.attr(it->second, a->attr);
  }
  if (auto* u = std::get_if<Expr::Unary>(&node))
    return detail::arith_un(u->op, eval_expr(u->child, ctx, g, rule));
  if (auto* b = std::get_if<Expr::Binary>(&node))
    return detail::arith_bin(b->op, eval_expr(b->lhs, ctx, g, rule),
                             eval_expr(b->rhs, ctx, g, rule));
  if (auto* c = std::get_if<Expr::Count>(&node)) {
    auto it = ctx.children.find(c->level);
    std::int64_t n = it == ctx.children.end()
                         ? 0
                         : static_cast<std::int64_t>(it->second.size());
    return n;
  }
  auto& s = std::get<Expr::Sum>(node);
  auto it = ctx.children.find(s.level);
  if (it == ctx.children.end() || it->second.empty()) {
    // Zero of the body's sort. Attribute sorts are schema-fixed, so with the
    // rule at hand the static sort is exact; without it default to real.
    if (rule) {
      Sort body_sort = static_sort(*rule, g.type_graph(), s.level, s.body);
      if (body_sort == Sort::Int) return std::int64_t{0};
    }
    return 0.0;
  }
  // The body's sort cannot vary between sub-matches; the first one decides.
  Value first = eval_expr(s.body, it->second.front(), g, rule);
  if (!detail::is_numeric(first))
    throw EvalError("sum body is not numeric");
  if (sort_of(first) == Sort::Int) {
    std::int64_t acc = std::get<std::int64_t>(first);
    for (std::size_t i = 1; i < it->second.size(); ++i)
      acc += std::get<std::int64_t>(eval_expr(s.body, it->second[i], g, rule));
    return acc;
  }
  double acc = 0.0;
  for (const auto& child : it->second)
    acc += detail::as_real(eval_expr(s.body, child, g, rule));
  return acc;
}

}  // namespace grenn::rewrite
