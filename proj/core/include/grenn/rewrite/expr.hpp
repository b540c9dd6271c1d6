#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>

#include "grenn/value.hpp"

namespace grenn::rewrite {

/// Pattern element id, unique within one rule across nodes and edges.
using ElemId = int;

/// Quantification level id, unique within one rule. Level 0 is the root.
using LevelId = int;

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinOp { Add, Sub, Mul, Div };
enum class UnOp { Neg, Abs };

/// Attribute expression tree evaluated against a match context.
///
/// Aggregates (Sum, Count) range over the sub-matches of a child quantification
/// level of the level the expression is evaluated at; their bodies are
/// evaluated once per sub-match.
class Expr {
 public:
  struct Literal { Value value; };
  struct AttrRef { ElemId elem; std::string attr; };
  struct Unary { UnOp op; ExprPtr child; };
  struct Binary { BinOp op; ExprPtr lhs, rhs; };
  struct Sum { LevelId level; ExprPtr body; };
  struct Count { LevelId level; };

  using Node = std::variant<Literal, AttrRef, Unary, Binary, Sum, Count>;

  explicit Expr(Node node) : node_(std::move(node)) {}
  const Node& node() const { return node_; }

 private:
  Node node_;
};

ExprPtr lit(Value v);
ExprPtr attr_ref(ElemId elem, std::string attr);
ExprPtr neg(ExprPtr e);
ExprPtr abs(ExprPtr e);
ExprPtr add(ExprPtr l, ExprPtr r);
ExprPtr sub(ExprPtr l, ExprPtr r);
ExprPtr mul(ExprPtr l, ExprPtr r);
ExprPtr div(ExprPtr l, ExprPtr r);
ExprPtr sum(LevelId level, ExprPtr body);
ExprPtr count(LevelId level);

enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };

/// Boolean application condition attached to a quantification level.
/// Cmp compares two aggregate-free attribute expressions; NodeNeq requires two
/// pattern nodes to be bound to distinct host nodes.
struct Guard {
  struct Cmp { CmpOp op; ExprPtr lhs, rhs; };
  struct NodeNeq { ElemId a, b; };

  LevelId level;
  std::variant<Cmp, NodeNeq> cond;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace grenn::rewrite
