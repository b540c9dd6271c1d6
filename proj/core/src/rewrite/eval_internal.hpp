#pragma once

#include "grenn/host_graph.hpp"
#include "grenn/rewrite/expr.hpp"
#include "grenn/rewrite/match.hpp"

namespace grenn::rewrite::detail {

bool is_numeric(const Value& v);
double as_real(const Value& v);

Value arith_bin(BinOp op, const Value& l, const Value& r);
Value arith_un(UnOp op, const Value& v);
bool compare(CmpOp op, const Value& l, const Value& r);

/// Aggregate-free evaluation against a plain element binding. Used for guard
/// checks during matching, where no sub-match structure exists yet.
Value eval_in_binding(const ExprPtr& e, const Binding& b, const HostGraph& g);

bool has_aggregate(const ExprPtr& e);

/// Appends every attribute reference in the tree, depth-first.
void collect_attr_refs(const ExprPtr& e,
                       std::vector<const Expr::AttrRef*>& out);

}  // namespace grenn::rewrite::detail
