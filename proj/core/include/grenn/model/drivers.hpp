#pragma once

#include <map>
#include <string>
#include <vector>

#include "grenn/host_graph.hpp"
#include "grenn/model/rules.hpp"

namespace grenn::model {

struct TrainingCycle {
  int cycle = 0;          // 1-based
  double global_error = 0.0;
  double delta = 0.0;     // |global_error - previous global_error|
  std::map<NodeId, double> post_weights;  // every post, after this cycle
};

struct TrainingTrace {
  std::vector<TrainingCycle> cycles;
  bool terminated = false;  // true iff the loop stopped because delta < theta
  int cycles_run = 0;
};

/// Run `alap { error; delta; }` on the graph. Each application of the error
/// rule opens a cycle; the trace records the global error and delta it wrote
/// plus the post weights once the cycle's delta step (if any) has run. A run
/// that is still above threshold after cfg.max_cycles cycles stops there with
/// terminated = false and the graph as of the last completed cycle.
TrainingTrace run_training(HostGraph& g, const GrennConfig& cfg = {});

struct InferenceResult {
  std::vector<NodeId> created_engagements;  // in creation order
  bool blocked = false;  // no user was flagged, so the rule could not fire
};

/// Apply the infer rule once. Creates predicted engagements for every
/// (user, post) pair without one where the post's author is flagged, then
/// unflags those authors.
InferenceResult run_inference(HostGraph& g, const GrennConfig& cfg = {});

struct UpdateRecord {
  NodeId user = -1;
  NodeId post = -1;
  std::vector<NodeId> engagements;  // the new observed engagements
  bool blocked = false;             // a step found no valid match
};

/// Simulate fresh data arriving: one new user with one new post, plus one
/// observed engagement on that post per strength in the first two configured
/// engagement strengths. Each new engagement picks the eligible engager with
/// the smallest node id and flags the post's author for retraining.
UpdateRecord run_update(HostGraph& g, const GrennConfig& cfg = {});

/// The canonical control program: train, infer, insert new data, then train
/// and infer again.
std::string demo_program();

}  // namespace grenn::model
