#include "grenn/model/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace grenn::model {

namespace {

bool flag(const HostGraph& g, NodeId n, const std::string& attr) {
  return std::get<bool>(g.attr(n, attr));
}

double real_attr(const HostGraph& g, NodeId n, const std::string& attr) {
  return std::get<double>(g.attr(n, attr));
}

/// Observed engagements on any post by `author`, as (engagement, post) pairs
/// in ascending id order — the order the engine enumerates them in, so sums
/// agree term for term.
std::vector<std::pair<NodeId, NodeId>> observed_on_posts_of(
    const HostGraph& g, NodeId author) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (EdgeId ae : g.edges_matching("author", std::nullopt, author)) {
    NodeId post = g.edge(ae)->src;
    for (EdgeId oe : g.edges_matching("on", std::nullopt, post)) {
      NodeId e = g.edge(oe)->src;
      if (flag(g, e, "obs")) out.push_back({e, post});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double oracle_inferred_strength(const HostGraph& g, NodeId user,
                                NodeId author) {
  if (!g.has_node(user) || !g.has_node(author))
    throw std::invalid_argument("oracle_inferred_strength: unknown node id");
  auto pairs = observed_on_posts_of(g, author);
  if (pairs.empty())
    throw std::invalid_argument(
        "oracle_inferred_strength: author " + std::to_string(author) +
        " has no observed engagements to average over");
  double sum = 0.0;
  for (auto [e, post] : pairs)
    sum += real_attr(g, post, "weight") * real_attr(g, e, "strength");
  return sum / static_cast<double>(pairs.size());
}

double oracle_global_error(const HostGraph& g) {
  // Tuples (user, author, engagement) mirroring the error rule's middle
  // level, summed in its enumeration order.
  std::vector<std::tuple<NodeId, NodeId, NodeId>> tuples;
  for (const auto& [a, an] : g.nodes()) {
    if (an.type != "User" || !flag(g, a, "upd")) continue;
    for (auto [e, post] : observed_on_posts_of(g, a)) {
      for (EdgeId be : g.edges_matching("by", e, std::nullopt)) {
        NodeId u = g.edge(be)->tgt;
        if (u != a) tuples.push_back({u, a, e});
      }
    }
  }
  std::sort(tuples.begin(), tuples.end());

  double total = 0.0;
  for (auto [u, a, e] : tuples)
    total += std::fabs(real_attr(g, e, "strength") -
                       oracle_inferred_strength(g, u, a));
  return total;
}

}  // namespace grenn::model
