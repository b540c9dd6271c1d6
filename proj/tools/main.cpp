#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "grenn/control/interp.hpp"
#include "grenn/control/parser.hpp"
#include "grenn/io/csv.hpp"
#include "grenn/io/dot.hpp"
#include "grenn/io/graph_json.hpp"
#include "grenn/model/drivers.hpp"
#include "grenn/model/fixtures.hpp"
#include "grenn/model/rules.hpp"
#include "grenn/model/schema.hpp"

namespace {

using namespace grenn;
namespace fs = std::filesystem;

constexpr int kExitCompleted = 0;
constexpr int kExitError = 1;
constexpr int kExitBlocked = 2;

struct Options {
  std::string graph_path;
  std::string program_path;
  model::GrennConfig cfg;
  std::string out_dir = ".";
  bool dot = false;
  bool csv = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

/// Executes the program one top-level statement at a time, so the graph can
/// be snapshotted at the start, the midpoint and the end of the run.
/// Training cycles (applications of the error rule) are printed as they
/// happen and grouped into one CSV per training phase.
int run_program(HostGraph g, const control::Program& prog, const Options& opt) {
  fs::create_directories(opt.out_dir);
  auto snapshot = [&opt](const char* name, const HostGraph& host) {
    write_file(fs::path(opt.out_dir) / (std::string(name) + ".json"),
               io::save_graph(host));
    if (opt.dot)
      write_file(fs::path(opt.out_dir) / (std::string(name) + ".dot"),
                 io::export_dot(host));
  };
  rewrite::RuleSet rules = model::recommender_rules(opt.cfg);

  snapshot("start", g);

  std::vector<model::TrainingTrace> phases;
  model::TrainingTrace current;
  auto observer = [&current](const control::ExecStep& s, const HostGraph& host) {
    if (!s.applied || s.rule != "error") return;
    model::TrainingCycle c;
    c.cycle = static_cast<int>(current.cycles.size()) + 1;
    for (const auto& w : s.record->writes) {
      if (host.node(w.node)->type != "Error") continue;
      if (w.attr == "error") c.global_error = std::get<double>(w.new_value);
      if (w.attr == "delta") c.delta = std::get<double>(w.new_value);
    }
    std::cout << "cycle=" << c.cycle
              << " global_error=" << format_real(c.global_error)
              << " delta=" << format_real(c.delta) << "\n";
    current.cycles.push_back(std::move(c));
  };

  std::size_t midpoint = prog.body.size() / 2;
  auto status = control::ExecutionTrace::Status::Completed;
  for (std::size_t i = 0; i < prog.body.size(); ++i) {
    control::Program step;
    step.functions = prog.functions;
    step.body = {prog.body[i]};
    control::ExecutionTrace t =
        control::exec(step, rules, g,
                      static_cast<std::size_t>(opt.cfg.max_cycles), observer);
    if (!current.cycles.empty()) {
      current.terminated = true;
      current.cycles_run = static_cast<int>(current.cycles.size());
      phases.push_back(std::move(current));
      current = {};
    }
    if (t.status == control::ExecutionTrace::Status::Blocked) {
      status = t.status;
      std::cerr << "blocked: '" << t.steps.back().rule
                << "' found no match\n";
      break;
    }
    if (i + 1 == midpoint) snapshot("intermediate", g);
  }

  snapshot("final", g);
  if (opt.csv)
    for (std::size_t i = 0; i < phases.size(); ++i)
      write_file(fs::path(opt.out_dir) /
                     ("training" + std::to_string(i + 1) + ".csv"),
                 io::write_trace_csv(phases[i]));

  return status == control::ExecutionTrace::Status::Completed ? kExitCompleted
                                                              : kExitBlocked;
}

int cmd_run(const Options& opt) {
  HostGraph g = io::load_graph(read_file(opt.graph_path));
  control::Program prog;
  try {
    prog = control::parse_program(read_file(opt.program_path));
  } catch (const control::ParseError& e) {
    std::cerr << opt.program_path << ":" << e.what() << "\n";
    return kExitError;
  }
  return run_program(std::move(g), prog, opt);
}

int cmd_demo(Options opt) {
  opt.dot = true;
  opt.csv = true;
  control::Program prog = control::parse_program(model::demo_program());
  return run_program(model::seed_graph(), prog, opt);
}

int cmd_validate(const Options& opt) {
  HostGraph g = io::load_graph(read_file(opt.graph_path));
  std::vector<std::string> defects;
  for (const auto& v : g.check_conformance())
    defects.push_back(to_string(v.kind) + " on element " +
                      std::to_string(v.subject_id) + ": " + v.detail);
  if (g.type_graph() == model::recommender_schema())
    for (auto& line : model::check_model_invariants(g))
      defects.push_back(std::move(line));

  for (const auto& d : defects) std::cout << d << "\n";
  if (!defects.empty()) return kExitError;
  std::cout << "ok: " << g.nodes().size() << " nodes, " << g.edges().size()
            << " edges\n";
  return kExitCompleted;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"typed attributed graph rewriting with a trainable recommender"};
  app.require_subcommand(1);
  Options opt;

  auto add_run_options = [&opt](CLI::App* cmd) {
    cmd->add_option("--eta", opt.cfg.eta, "learning rate")
        ->capture_default_str();
    cmd->add_option("--theta", opt.cfg.theta,
                    "stop training once delta falls below this")
        ->capture_default_str();
    cmd->add_option("--max-cycles", opt.cfg.max_cycles,
                    "cap on training cycles")
        ->capture_default_str();
    cmd->add_option("--out", opt.out_dir, "output directory")
        ->capture_default_str();
    cmd->add_flag("--dot", opt.dot, "also write DOT snapshots");
    cmd->add_flag("--csv", opt.csv, "also write per-phase training CSVs");
  };

  CLI::App* run =
      app.add_subcommand("run", "execute a control program over a graph document");
  run->add_option("--graph", opt.graph_path, "graph document to start from")
      ->required();
  run->add_option("--program", opt.program_path, "control program to execute")
      ->required();
  add_run_options(run);

  CLI::App* demo = app.add_subcommand(
      "demo", "train, infer and update the built-in example end to end");
  add_run_options(demo);

  CLI::App* validate =
      app.add_subcommand("validate", "check a graph document for defects");
  validate->add_option("--graph", opt.graph_path, "graph document to check")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitCompleted : kExitError;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (demo->parsed()) return cmd_demo(opt);
    return cmd_validate(opt);
  } catch (const io::IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
