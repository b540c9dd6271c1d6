#include "grenn/model/drivers.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>
#include <variant>

#include "grenn/control/interp.hpp"
#include "grenn/control/parser.hpp"

namespace grenn::model {

namespace {

std::map<NodeId, double> post_weights(const HostGraph& g) {
  std::map<NodeId, double> w;
  for (NodeId p : g.nodes_of_type("Post"))
    w.emplace(p, std::get<double>(g.attr(p, "weight")));
  return w;
}

}  // namespace

TrainingTrace run_training(HostGraph& g, const GrennConfig& cfg) {
  rewrite::RuleSet rules = recommender_rules(cfg);
  control::Program prog = control::parse_program("alap { error; delta; }");

  TrainingTrace trace;
  auto observer = [&trace](const control::ExecStep& s, const HostGraph& host) {
    if (!s.applied) return;
    if (s.rule == "error") {
      TrainingCycle c;
      c.cycle = static_cast<int>(trace.cycles.size()) + 1;
      for (const auto& w : s.record->writes) {
        if (host.node(w.node)->type != "Error") continue;
        double v = std::get<double>(w.new_value);
        if (w.attr == "error") c.global_error = v;
        if (w.attr == "delta") c.delta = v;
      }
      c.post_weights = post_weights(host);
      trace.cycles.push_back(std::move(c));
    } else if (s.rule == "delta" && !trace.cycles.empty()) {
      trace.cycles.back().post_weights = post_weights(host);
    }
  };

  try {
    control::exec(prog, rules, g, static_cast<std::size_t>(cfg.max_cycles),
                  observer);
    trace.terminated = true;
  } catch (const control::AlapLimitError&) {
    trace.terminated = false;  // still above threshold after max_cycles
  }
  trace.cycles_run = static_cast<int>(trace.cycles.size());
  return trace;
}

InferenceResult run_inference(HostGraph& g, const GrennConfig& cfg) {
  rewrite::RuleSet rules = recommender_rules(cfg);
  control::Program prog = control::parse_program("infer;");

  InferenceResult res;
  control::ExecutionTrace t = control::exec(prog, rules, g);
  if (t.status == control::ExecutionTrace::Status::Blocked) {
    res.blocked = true;
    return res;
  }
  for (const auto& cn : t.steps.back().record->created_nodes)
    if (cn.type == "Engagement") res.created_engagements.push_back(cn.id);
  return res;
}

UpdateRecord run_update(HostGraph& g, const GrennConfig& cfg) {
  std::string text = "node u; newUser(out u); node p; newPost(u, out p);";
  std::size_t n = std::min<std::size_t>(2, cfg.engagement_strengths.size());
  for (std::size_t i = 0; i < n; ++i)
    text += " " + engagement_rule_name(cfg.engagement_strengths[i]) + "(p);";

  rewrite::RuleSet rules = recommender_rules(cfg);
  control::Program prog = control::parse_program(text);
  control::ExecutionTrace t = control::exec(prog, rules, g);

  UpdateRecord rec;
  rec.blocked = t.status == control::ExecutionTrace::Status::Blocked;
  for (const auto& s : t.steps) {
    if (!s.applied) continue;
    if (s.rule == "newUser") {
      rec.user = s.record->out_bindings.at("u");
    } else if (s.rule == "newPost") {
      rec.post = s.record->out_bindings.at("p");
    } else if (!s.record->created_nodes.empty()) {
      rec.engagements.push_back(s.record->created_nodes.front().id);
    }
  }
  return rec;
}

std::string demo_program() {
  return "function training(){\n"
         "   alap{error; delta;}\n"
         "}\n"
         "function inference(){\n"
         "   infer;\n"
         "}\n"
         "function update(){\n"
         "   node u; newUser(out u);\n"
         "   node p; newPost(u, out p);\n"
         "   newEngagement02(p); newEngagement04(p);\n"
         "}\n"
         "training; inference;\n"
         "update;\n"
         "training; inference;\n";
}

}  // namespace grenn::model
