#include "grenn/model/schema.hpp"

#include <cstdint>
#include <set>
#include <utility>

namespace grenn::model {

const TypeGraph& recommender_schema() {
  static const TypeGraph tg = TypeGraph::build(
      {
          {"User", {{"upd", Sort::Bool}}},
          {"Post", {{"weight", Sort::Real}}},
          {"Engagement",
           {{"strength", Sort::Real},
            {"error", Sort::Real},
            {"obs", Sort::Bool},
            {"upd", Sort::Bool},
            {"count", Sort::Int}}},
          {"Error", {{"error", Sort::Real}, {"delta", Sort::Real}}},
      },
      {
          {"by", "Engagement", "User"},
          {"on", "Engagement", "Post"},
          {"author", "Post", "User"},
      });
  return tg;
}

std::vector<std::string> check_model_invariants(const HostGraph& g) {
  std::vector<std::string> out;

  int error_nodes = 0;
  for (const auto& [id, n] : g.nodes())
    if (n.type == "Error") ++error_nodes;
  if (error_nodes != 1)
    out.push_back("expected exactly one Error node, found " +
                  std::to_string(error_nodes));

  // (user, post) pairs already linked by an engagement.
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& [id, n] : g.nodes()) {
    if (n.type != "Engagement") continue;

    auto it = n.attrs.find("count");
    if (it != n.attrs.end() && sort_of(it->second) == Sort::Int &&
        std::get<std::int64_t>(it->second) != 1)
      out.push_back("engagement " + std::to_string(id) + " has count " +
                    format_value(it->second) + ", expected 1");

    auto by = g.edges_matching("by", id, std::nullopt);
    auto on = g.edges_matching("on", id, std::nullopt);
    if (by.size() != 1 || on.size() != 1) {
      out.push_back("engagement " + std::to_string(id) + " has " +
                    std::to_string(by.size()) + " by edge(s) and " +
                    std::to_string(on.size()) + " on edge(s), expected 1 each");
      continue;
    }
    NodeId user = g.edge(by[0])->tgt;
    NodeId post = g.edge(on[0])->tgt;
    if (!pairs.insert({user, post}).second)
      out.push_back("user " + std::to_string(user) + " and post " +
                    std::to_string(post) + " are linked by more than one engagement");
  }

  return out;
}

}  // namespace grenn::model
