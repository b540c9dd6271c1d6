#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "grenn/control/parser.hpp"
#include "grenn/host_graph.hpp"
#include "grenn/model/drivers.hpp"
#include "grenn/model/rules.hpp"
#include "grenn/model/schema.hpp"
#include "grenn/rewrite/engine.hpp"

namespace {

using namespace grenn;

// Conformant graph with `users` flagged users, two posts each, and observed
// engagements on roughly two thirds of the cross pairs. Deterministic, so
// every benchmark iteration sees the same workload.
HostGraph make_graph(int users) {
  HostGraph g(model::recommender_schema());
  const double strengths[] = {0.2, 0.4, 0.8};
  std::vector<NodeId> user_ids, post_ids;
  std::vector<NodeId> post_author;
  for (int u = 0; u < users; ++u)
    user_ids.push_back(g.add_node("User", {{"upd", true}}));
  for (int u = 0; u < users; ++u) {
    for (int p = 0; p < 2; ++p) {
      NodeId post = g.add_node("Post", {{"weight", 1.0}});
      g.add_edge("author", post, user_ids[static_cast<std::size_t>(u)]);
      post_ids.push_back(post);
      post_author.push_back(user_ids[static_cast<std::size_t>(u)]);
    }
  }
  int k = 0;
  for (std::size_t p = 0; p < post_ids.size(); ++p) {
    for (NodeId u : user_ids) {
      if (u == post_author[p]) continue;
      if (++k % 3 == 0) continue;  // leave gaps for inference to fill
      NodeId e = g.add_node("Engagement", {{"strength", strengths[k % 3]},
                                           {"error", 0.0},
                                           {"obs", true},
                                           {"upd", false},
                                           {"count", std::int64_t{1}}});
      g.add_edge("by", e, u);
      g.add_edge("on", e, post_ids[p]);
    }
  }
  g.add_node("Error", {{"error", 0.0}, {"delta", 1.0}});
  return g;
}

void bm_match_error(benchmark::State& state) {
  auto rules = model::recommender_rules();
  HostGraph g = make_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto forests = rewrite::find_match_forests(rules.at("error"), g);
    benchmark::DoNotOptimize(forests);
  }
}
BENCHMARK(bm_match_error)->Arg(3)->Arg(6)->Arg(12);

void bm_match_infer(benchmark::State& state) {
  auto rules = model::recommender_rules();
  HostGraph g = make_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto forests = rewrite::find_match_forests(rules.at("infer"), g);
    benchmark::DoNotOptimize(forests);
  }
}
BENCHMARK(bm_match_infer)->Arg(3)->Arg(6)->Arg(12);

void bm_training(benchmark::State& state) {
  HostGraph base = make_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    state.PauseTiming();
    HostGraph g = base;
    state.ResumeTiming();
    auto trace = model::run_training(g);
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(bm_training)->Arg(3)->Arg(6)->Arg(12);

void bm_inference(benchmark::State& state) {
  HostGraph base = make_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    state.PauseTiming();
    HostGraph g = base;
    state.ResumeTiming();
    auto result = model::run_inference(g);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(bm_inference)->Arg(3)->Arg(6)->Arg(12);

void bm_parse(benchmark::State& state) {
  std::string text = model::demo_program();
  for (auto _ : state) {
    auto prog = control::parse_program(text);
    benchmark::DoNotOptimize(prog);
  }
}
BENCHMARK(bm_parse);

}  // namespace

BENCHMARK_MAIN();
