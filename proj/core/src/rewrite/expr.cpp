#include "grenn/rewrite/expr.hpp"

namespace grenn::rewrite {

ExprPtr lit(Value v) {
  return std::make_shared<Expr>(Expr::Literal{std::move(v)});
}

ExprPtr attr_ref(ElemId elem, std::string attr) {
  return std::make_shared<Expr>(Expr::AttrRef{elem, std::move(attr)});
}

ExprPtr neg(ExprPtr e) {
  return std::make_shared<Expr>(Expr::Unary{UnOp::Neg, std::move(e)});
}

ExprPtr abs(ExprPtr e) {
  return std::make_shared<Expr>(Expr::Unary{UnOp::Abs, std::move(e)});
}

ExprPtr add(ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr::Binary{BinOp::Add, std::move(l), std::move(r)});
}

ExprPtr sub(ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr::Binary{BinOp::Sub, std::move(l), std::move(r)});
}

ExprPtr mul(ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr::Binary{BinOp::Mul, std::move(l), std::move(r)});
}

ExprPtr div(ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr::Binary{BinOp::Div, std::move(l), std::move(r)});
}

ExprPtr sum(LevelId level, ExprPtr body) {
  return std::make_shared<Expr>(Expr::Sum{level, std::move(body)});
}

ExprPtr count(LevelId level) {
  return std::make_shared<Expr>(Expr::Count{level});
}

}  // namespace grenn::rewrite
