#include "grenn/control/interp.hpp"

#include <map>

namespace grenn::control {

namespace {

class Interp {
 public:
  Interp(const Program& prog, const rewrite::RuleSet& rules, HostGraph& g,
         std::size_t limit, const ExecObserver& observer)
      : prog_(prog), rules_(rules), g_(g), limit_(limit), observer_(observer) {
    for (const auto& f : prog.functions) fns_.emplace(f.name, &f);
  }

  ExecutionTrace run() {
    bool ok = run_stmts(prog_.body);
    trace_.status = ok ? ExecutionTrace::Status::Completed
                       : ExecutionTrace::Status::Blocked;
    return std::move(trace_);
  }

 private:
  bool run_stmts(const std::vector<Stmt>& body) {
    for (const auto& s : body)
      if (!run_stmt(s)) return false;
    return true;
  }

  bool run_stmt(const Stmt& s) {
    if (auto* d = std::get_if<NodeDecl>(&s.node)) {
      env_[d->name] = std::nullopt;  // re-running a declaration unassigns
      return true;
    }
    if (auto* c = std::get_if<Call>(&s.node)) return run_call(*c, s);

    const auto& alap = std::get<Alap>(s.node);
    path_.push_back("alap#0");
    for (std::size_t iter = 1;; ++iter) {
      if (iter > limit_) {
        path_.pop_back();
        throw AlapLimitError("alap exceeded " + std::to_string(limit_) +
                                 " iterations (line " + std::to_string(s.line) +
                                 ")",
                             trace_);
      }
      path_.back() = "alap#" + std::to_string(iter);
      if (!run_stmts(alap.body)) break;
    }
    path_.pop_back();
    return true;
  }

  bool run_call(const Call& c, const Stmt& s) {
    auto fit = fns_.find(c.callee);
    if (fit != fns_.end()) {
      path_.push_back(c.callee);
      bool ok = run_stmts(fit->second->body);
      path_.pop_back();
      return ok;
    }

    auto rit = rules_.find(c.callee);
    if (rit == rules_.end())
      throw ExecError(at(s) + "no rule or function named '" + c.callee + "'");
    const rewrite::Rule& rule = rit->second;
    if (c.args.size() != rule.params.size())
      throw ExecError(at(s) + "'" + c.callee + "' wants " +
                      std::to_string(rule.params.size()) + " arguments, got " +
                      std::to_string(c.args.size()));

    rewrite::ParamBinding binding;
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      const Arg& arg = c.args[i];
      const rewrite::Param& prm = rule.params[i];
      bool param_out = prm.dir == rewrite::ParamDir::Out;
      if (arg.out != param_out)
        throw ExecError(at(s) + "argument " + std::to_string(i + 1) + " of '" +
                        c.callee + "' is " + (param_out ? "an out" : "an in") +
                        " parameter");
      if (!arg.out) {
        auto it = env_.find(arg.var);
        if (it == env_.end() || !it->second)
          throw ExecError(at(s) + "variable '" + arg.var +
                          "' read before assignment");
        binding[prm.name] = *it->second;
      }
    }

    auto rec = rewrite::apply_once(rule, g_, binding);
    ExecStep step;
    step.path = join_path();
    step.rule = c.callee;
    step.applied = rec.has_value();
    if (rec) {
      for (std::size_t i = 0; i < c.args.size(); ++i)
        if (c.args[i].out)
          env_[c.args[i].var] = rec->out_bindings.at(rule.params[i].name);
      step.record = std::move(rec);
    }
    trace_.steps.push_back(std::move(step));
    if (observer_) observer_(trace_.steps.back(), g_);
    return trace_.steps.back().applied;
  }

  static std::string at(const Stmt& s) {
    return std::to_string(s.line) + ":" + std::to_string(s.col) + ": ";
  }

  std::string join_path() const {
    std::string out;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      if (i) out += '/';
      out += path_[i];
    }
    return out;
  }

  const Program& prog_;
  const rewrite::RuleSet& rules_;
  HostGraph& g_;
  std::size_t limit_;
  const ExecObserver& observer_;
  std::map<std::string, const Function*> fns_;
  std::map<std::string, std::optional<NodeId>> env_;
  std::vector<std::string> path_;
  ExecutionTrace trace_;
};

}  // namespace

ExecutionTrace exec(const Program& prog, const rewrite::RuleSet& rules,
                    HostGraph& g, std::size_t max_alap_iterations,
                    const ExecObserver& observer) {
  return Interp(prog, rules, g, max_alap_iterations, observer).run();
}

}  // namespace grenn::control
