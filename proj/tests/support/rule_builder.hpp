#pragma once

#include <optional>
#include <string>
#include <utility>

#include "grenn/rewrite/rule.hpp"

namespace grenn::test {

/// Compact rule assembly for tests. Level 0 (root) exists from the start;
/// done() validates against the schema and hands the rule out.
struct RB {
  rewrite::Rule r;

  explicit RB(std::string name) {
    r.name = std::move(name);
    r.levels.push_back({0, rewrite::LevelKind::Root, std::nullopt});
  }
  RB& level(rewrite::LevelId id, rewrite::LevelKind k,
            rewrite::LevelId parent) {
    r.levels.push_back({id, k, parent});
    return *this;
  }
  RB& node(rewrite::ElemId id, std::string type, rewrite::LevelId lv,
           rewrite::ElementRole role = rewrite::ElementRole::Reader) {
    r.nodes.push_back({id, std::move(type), lv, role});
    return *this;
  }
  RB& edge(rewrite::ElemId id, std::string type, rewrite::ElemId s,
           rewrite::ElemId t, rewrite::LevelId lv,
           rewrite::ElementRole role = rewrite::ElementRole::Reader) {
    r.edges.push_back({id, std::move(type), s, t, lv, role});
    return *this;
  }
  RB& cmp(rewrite::LevelId lv, rewrite::CmpOp op, rewrite::ExprPtr lhs,
          rewrite::ExprPtr rhs) {
    r.guards.push_back(
        {lv, rewrite::Guard::Cmp{op, std::move(lhs), std::move(rhs)}});
    return *this;
  }
  RB& neq(rewrite::LevelId lv, rewrite::ElemId a, rewrite::ElemId b) {
    r.guards.push_back({lv, rewrite::Guard::NodeNeq{a, b}});
    return *this;
  }
  RB& assign(rewrite::LevelId lv, rewrite::ElemId target, std::string attr,
             rewrite::ExprPtr v) {
    r.assigns.push_back({lv, target, std::move(attr), std::move(v)});
    return *this;
  }
  RB& param(std::string name, rewrite::ParamDir dir, std::string type,
            rewrite::ElemId elem) {
    r.params.push_back({std::move(name), dir, std::move(type), elem});
    return *this;
  }
  rewrite::Rule done(const TypeGraph& tg) {
    r.validate(tg);
    return r;
  }
};

}  // namespace grenn::test
