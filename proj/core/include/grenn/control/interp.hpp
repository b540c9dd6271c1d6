#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grenn/control/ast.hpp"
#include "grenn/host_graph.hpp"
#include "grenn/rewrite/engine.hpp"

namespace grenn::control {

/// One rule call during execution. `path` names the enclosing contexts,
/// slash-separated ("train/alap#2"; empty at top level). An unapplied step is
/// the failed call that ended an alap iteration or blocked the program.
struct ExecStep {
  std::string path;
  std::string rule;
  bool applied = false;
  std::optional<rewrite::ApplicationRecord> record;
};

/// What a program run did. Blocked means a call failed outside any alap; the
/// graph keeps all effects up to that point.
struct ExecutionTrace {
  enum class Status { Completed, Blocked };
  Status status = Status::Completed;
  std::vector<ExecStep> steps;
};

/// Runtime faults that are not rule failure: unknown call target, argument
/// count or direction mismatch, reading an unassigned variable.
class ExecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an alap loop exceeds the iteration limit. Carries the trace of
/// everything executed before the throw; the graph keeps those effects.
class AlapLimitError : public std::runtime_error {
 public:
  AlapLimitError(const std::string& msg, ExecutionTrace partial)
      : std::runtime_error(msg), partial_(std::move(partial)) {}

  const ExecutionTrace& partial() const { return partial_; }

 private:
  ExecutionTrace partial_;
};

/// Called after every rule call, applied or not, with the graph as it stands.
using ExecObserver = std::function<void(const ExecStep&, const HostGraph&)>;

/// Runs a program against a graph. Calls resolve to functions first, then to
/// rules; a rule call applies the first match in deterministic order or fails.
/// A failing call inside an alap ends that loop (keeping prior effects); a
/// failing call anywhere else stops execution with status Blocked.
ExecutionTrace exec(const Program& prog, const rewrite::RuleSet& rules,
                    HostGraph& g, std::size_t max_alap_iterations = 10000,
                    const ExecObserver& observer = {});

}  // namespace grenn::control
