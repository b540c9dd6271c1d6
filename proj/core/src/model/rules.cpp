#include "grenn/model/rules.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

#include "grenn/model/schema.hpp"

namespace grenn::model {

using namespace rewrite;

namespace {

Guard cmp_eq(LevelId level, ExprPtr lhs, ExprPtr rhs) {
  return {level, Guard::Cmp{CmpOp::Eq, std::move(lhs), std::move(rhs)}};
}

/// Average of weight * strength over the observed engagements matched at
/// `agg_level`, the shared scoring formula of the error and infer rules.
ExprPtr predicted_strength(LevelId agg_level, ElemId engagement, ElemId post) {
  return div(sum(agg_level, mul(attr_ref(post, "weight"),
                                attr_ref(engagement, "strength"))),
             count(agg_level));
}

/// error: per observed engagement of a flagged author, store the difference
/// between its strength and the predicted strength; on the root, store the
/// new global error and its delta against the previous cycle.
///
/// Level 1 ranges over tuples (u, a, e*, p°): engagement e* by u on post p°
/// authored by the flagged a, u != a. Level 2 collects, per such tuple, all
/// observed engagements on any of a's posts; e* itself is among them.
Rule error_rule() {
  Rule r;
  r.name = "error";
  r.levels = {{0, LevelKind::Root, {}},
              {1, LevelKind::Universal, 0},
              {2, LevelKind::UniversalNonEmpty, 1}};
  r.nodes = {{0, "Error", 0, ElementRole::Reader},
             {1, "User", 1, ElementRole::Reader},
             {2, "User", 1, ElementRole::Reader},
             {3, "Engagement", 1, ElementRole::Reader},
             {4, "Post", 1, ElementRole::Reader},
             {8, "Engagement", 2, ElementRole::Reader},
             {9, "Post", 2, ElementRole::Reader}};
  r.edges = {{5, "by", 3, 1, 1, ElementRole::Reader},
             {6, "on", 3, 4, 1, ElementRole::Reader},
             {7, "author", 4, 2, 1, ElementRole::Reader},
             {10, "on", 8, 9, 2, ElementRole::Reader},
             {11, "author", 9, 2, 2, ElementRole::Reader}};
  r.guards = {cmp_eq(1, attr_ref(2, "upd"), lit(true)),
              cmp_eq(1, attr_ref(3, "obs"), lit(true)),
              {1, Guard::NodeNeq{1, 2}},
              cmp_eq(2, attr_ref(8, "obs"), lit(true))};

  ExprPtr residual = sub(attr_ref(3, "strength"), predicted_strength(2, 8, 9));
  ExprPtr global = sum(1, abs(residual));
  r.assigns = {{0, 0, "error", global},
               {0, 0, "delta", abs(sub(attr_ref(0, "error"), global))},
               {1, 3, "error", residual}};
  return r;
}

/// delta: gradient step on the weights of flagged authors' posts. The root
/// guard on the previous delta makes this the stopping rule of the training
/// loop. Posts without observed engagements are skipped by the non-empty
/// quantifier, never divided by zero.
Rule delta_rule(const GrennConfig& cfg) {
  Rule r;
  r.name = "delta";
  r.levels = {{0, LevelKind::Root, {}},
              {1, LevelKind::Universal, 0},
              {2, LevelKind::UniversalNonEmpty, 1}};
  r.nodes = {{0, "Error", 0, ElementRole::Reader},
             {1, "Post", 1, ElementRole::Reader},
             {2, "User", 1, ElementRole::Reader},
             {4, "Engagement", 2, ElementRole::Reader}};
  r.edges = {{3, "author", 1, 2, 1, ElementRole::Reader},
             {5, "on", 4, 1, 2, ElementRole::Reader}};
  r.guards = {{0, Guard::Cmp{CmpOp::Ge, attr_ref(0, "delta"), lit(cfg.theta)}},
              cmp_eq(1, attr_ref(2, "upd"), lit(true)),
              cmp_eq(2, attr_ref(4, "obs"), lit(true))};

  ExprPtr correction = div(
      sum(2, mul(attr_ref(4, "error"), attr_ref(4, "strength"))), count(2));
  r.assigns = {{1, 1, "weight",
                add(attr_ref(1, "weight"), mul(lit(cfg.eta), correction))}};
  return r;
}

/// infer: for every flagged author, create a predicted engagement for each
/// (user, post) pair that lacks one, then unflag the author. Fails when no
/// user is flagged, so control programs can tell "nothing to infer" apart
/// from an inference that created nothing.
Rule infer_rule() {
  Rule r;
  r.name = "infer";
  r.levels = {{0, LevelKind::Root, {}},
              {1, LevelKind::UniversalNonEmpty, 0},
              {2, LevelKind::Universal, 1},
              {3, LevelKind::UniversalNonEmpty, 2}};
  r.nodes = {{0, "User", 1, ElementRole::Reader},
             {1, "User", 2, ElementRole::Reader},
             {2, "Post", 2, ElementRole::Reader},
             {3, "Engagement", 2, ElementRole::Embargo},
             {4, "Engagement", 2, ElementRole::CreatorIfAbsent},
             {10, "Engagement", 3, ElementRole::Reader},
             {11, "Post", 3, ElementRole::Reader}};
  r.edges = {{5, "author", 2, 0, 2, ElementRole::Reader},
             {6, "by", 3, 1, 2, ElementRole::Embargo},
             {7, "on", 3, 2, 2, ElementRole::Embargo},
             {8, "by", 4, 1, 2, ElementRole::CreatorIfAbsent},
             {9, "on", 4, 2, 2, ElementRole::CreatorIfAbsent},
             {12, "on", 10, 11, 3, ElementRole::Reader},
             {13, "author", 11, 0, 3, ElementRole::Reader}};
  r.guards = {cmp_eq(1, attr_ref(0, "upd"), lit(true)),
              {2, Guard::NodeNeq{1, 0}},
              cmp_eq(3, attr_ref(10, "obs"), lit(true))};
  r.assigns = {{1, 0, "upd", lit(false)},
               {2, 4, "strength", predicted_strength(3, 10, 11)},
               {2, 4, "obs", lit(false)},
               {2, 4, "error", lit(0.0)},
               {2, 4, "upd", lit(false)},
               {2, 4, "count", lit(std::int64_t{1})}};
  return r;
}

Rule new_user_rule() {
  Rule r;
  r.name = "newUser";
  r.levels = {{0, LevelKind::Root, {}}};
  r.nodes = {{0, "User", 0, ElementRole::Creator}};
  r.assigns = {{0, 0, "upd", lit(false)}};
  r.params = {{"u", ParamDir::Out, "User", 0}};
  return r;
}

Rule new_post_rule() {
  Rule r;
  r.name = "newPost";
  r.levels = {{0, LevelKind::Root, {}}};
  r.nodes = {{0, "User", 0, ElementRole::Reader},
             {1, "Post", 0, ElementRole::Creator}};
  r.edges = {{2, "author", 1, 0, 0, ElementRole::Creator}};
  r.assigns = {{0, 1, "weight", lit(1.0)}};
  r.params = {{"u", ParamDir::In, "User", 0}, {"p", ParamDir::Out, "Post", 1}};
  return r;
}

/// Create one observed engagement of fixed strength on the given post, made
/// by a user other than the author who does not engage with the post yet,
/// and flag the author for retraining. Match enumeration is ordered, so the
/// eligible engager with the smallest node id is picked.
Rule new_engagement_rule(double strength) {
  Rule r;
  r.name = engagement_rule_name(strength);
  r.levels = {{0, LevelKind::Root, {}}};
  r.nodes = {{0, "Post", 0, ElementRole::Reader},
             {1, "User", 0, ElementRole::Reader},
             {3, "User", 0, ElementRole::Reader},
             {4, "Engagement", 0, ElementRole::Embargo},
             {7, "Engagement", 0, ElementRole::Creator}};
  r.edges = {{2, "author", 0, 1, 0, ElementRole::Reader},
             {5, "by", 4, 3, 0, ElementRole::Embargo},
             {6, "on", 4, 0, 0, ElementRole::Embargo},
             {8, "by", 7, 3, 0, ElementRole::Creator},
             {9, "on", 7, 0, 0, ElementRole::Creator}};
  r.guards = {{0, Guard::NodeNeq{3, 1}}};
  r.assigns = {{0, 7, "strength", lit(strength)},
               {0, 7, "obs", lit(true)},
               {0, 7, "error", lit(0.0)},
               {0, 7, "upd", lit(false)},
               {0, 7, "count", lit(std::int64_t{1})},
               {0, 1, "upd", lit(true)}};
  r.params = {{"p", ParamDir::In, "Post", 0}};
  return r;
}

}  // namespace

std::string engagement_rule_name(double strength) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "newEngagement%02ld",
                std::lround(strength * 10.0));
  return buf;
}

rewrite::RuleSet recommender_rules(const GrennConfig& cfg) {
  RuleSet rules;
  auto put = [&rules](Rule r) {
    r.validate(recommender_schema());
    rules.emplace(r.name, std::move(r));
  };
  put(error_rule());
  put(delta_rule(cfg));
  put(infer_rule());
  put(new_user_rule());
  put(new_post_rule());
  for (double s : cfg.engagement_strengths) put(new_engagement_rule(s));
  return rules;
}

}  // namespace grenn::model
