#pragma once

#include <string>
#include <vector>

#include "grenn/rewrite/rule.hpp"

namespace grenn::model {

struct GrennConfig {
  double eta = 1.0;       // learning rate applied to weight corrections
  double theta = 0.0001;  // training stops once |delta| falls below this
  int max_cycles = 10000; // hard cap on error/delta training cycles
  std::vector<double> engagement_strengths = {0.2, 0.4, 0.8};
};

/// Name of the creation rule for observed engagements of the given strength,
/// e.g. 0.4 -> "newEngagement04" (two digits of ten times the strength).
std::string engagement_rule_name(double strength);

/// The full rule set of the recommender:
///   error            recompute per-engagement errors, the global error and
///                    its delta against the previous cycle
///   delta            gradient step on the weights of flagged authors' posts;
///                    guarded by delta >= theta so it stops the training loop
///   infer            create predicted engagements for flagged authors' posts
///                    and unflag the authors
///   newUser          create a user (out parameter)
///   newPost          create a post authored by a given user (in/out)
///   newEngagementNN  one per configured strength: create an observed
///                    engagement on a given post and flag its author
///
/// eta and theta from `cfg` are baked into the delta rule; the strengths
/// determine the newEngagement variants. All rules validate against
/// recommender_schema().
rewrite::RuleSet recommender_rules(const GrennConfig& cfg = {});

}  // namespace grenn::model
