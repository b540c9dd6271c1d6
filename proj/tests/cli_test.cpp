#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "grenn/io/graph_json.hpp"
#include "grenn/model/fixtures.hpp"
#include "support/csv_reader.hpp"
#include "support/process.hpp"

using namespace grenn;
using grenn::test::assets_dir;
using grenn::test::cli_path;
using grenn::test::run_command;

namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t p = text.find('\n'); p != std::string::npos;
       p = text.find('\n', start)) {
    out.push_back(text.substr(start, p - start));
    start = p + 1;
  }
  if (start < text.size()) out.push_back(text.substr(start));
  return out;
}

std::vector<std::string> cycle_lines(const std::string& text) {
  std::vector<std::string> out;
  for (auto& l : lines_of(text))
    if (l.rfind("cycle=", 0) == 0) out.push_back(l);
  return out;
}

std::vector<std::string> dir_files(const std::string& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir))
    names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

TEST_CASE("validate accepts the shipped fixtures") {
  auto res = run_command(
      {cli_path(), "validate", "--graph", assets_dir() + "/seed.json"});
  CHECK(res.exit_code == 0);
  CHECK(res.out == "ok: 13 nodes, 15 edges\n");
  CHECK(res.err.empty());

  auto mini = run_command(
      {cli_path(), "validate", "--graph", assets_dir() + "/mini.json"});
  CHECK(mini.exit_code == 0);
  CHECK(mini.out == "ok: 8 nodes, 7 edges\n");
}

TEST_CASE("validate reports model defects and fails") {
  std::string dir = grenn::test::make_temp_dir("validate");
  HostGraph g = model::seed_graph();
  g.add_node("Error", {{"error", 0.0}, {"delta", 0.0}});
  grenn::test::write_file(dir + "/two_errors.json", io::save_graph(g));

  auto res = run_command(
      {cli_path(), "validate", "--graph", dir + "/two_errors.json"});
  CHECK(res.exit_code == 1);
  CHECK_FALSE(res.out.empty());
  CHECK(res.out.find("Error") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("validate rejects documents that do not load") {
  std::string dir = grenn::test::make_temp_dir("badjson");
  grenn::test::write_file(dir + "/broken.json", "{ not json");
  auto res =
      run_command({cli_path(), "validate", "--graph", dir + "/broken.json"});
  CHECK(res.exit_code == 1);
  CHECK_FALSE(res.err.empty());

  auto missing =
      run_command({cli_path(), "validate", "--graph", dir + "/absent.json"});
  CHECK(missing.exit_code == 1);
  fs::remove_all(dir);
}

TEST_CASE("run executes the demo program against the seed document") {
  std::string dir = grenn::test::make_temp_dir("run");
  auto res = run_command({cli_path(), "run", "--graph",
                          assets_dir() + "/seed.json", "--program",
                          assets_dir() + "/demo.ctl", "--out", dir, "--csv"});
  REQUIRE(res.exit_code == 0);

  // One line per training cycle: two trainings of two cycles each.
  auto cyc = cycle_lines(res.out);
  REQUIRE(cyc.size() == 4);
  CHECK(cyc[0].rfind("cycle=1 global_error=1.2", 0) == 0);
  CHECK(cyc[1].rfind("cycle=2 global_error=1.2", 0) == 0);
  CHECK(cyc[2].rfind("cycle=1 global_error=0.2 delta=1", 0) == 0);
  CHECK(cyc[3] == "cycle=2 global_error=0.2 delta=0");

  CHECK(dir_files(dir) ==
        std::vector<std::string>{"final.json", "intermediate.json",
                                 "start.json", "training1.csv",
                                 "training2.csv"});

  // The start snapshot round-trips the input document byte for byte.
  CHECK(grenn::test::read_file(dir + "/start.json") ==
        grenn::test::read_file(assets_dir() + "/seed.json"));

  // Midpoint: trained and inferred, but no new user yet.
  HostGraph mid = io::load_graph(grenn::test::read_file(dir + "/intermediate.json"));
  CHECK(mid.next_id() == 28);
  CHECK(std::get<double>(mid.attr(3, "weight")) == doctest::Approx(1.04));

  // Final: the new user's circle plus one predicted engagement.
  HostGraph fin = io::load_graph(grenn::test::read_file(dir + "/final.json"));
  CHECK(fin.next_id() == 40);
  CHECK(fin.node(37)->type == "Engagement");
  CHECK_FALSE(std::get<bool>(fin.attr(37, "obs")));

  auto rows1 = grenn::test::read_trace_csv(
      grenn::test::read_file(dir + "/training1.csv"));
  auto rows2 = grenn::test::read_trace_csv(
      grenn::test::read_file(dir + "/training2.csv"));
  REQUIRE(rows1.size() == 2);
  REQUIRE(rows2.size() == 2);
  CHECK(rows1[0].global_error == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(rows2[1].delta == doctest::Approx(0.0).epsilon(1e-12));
  fs::remove_all(dir);
}

TEST_CASE("run rejects a program that does not parse, with its position") {
  std::string dir = grenn::test::make_temp_dir("parsefail");
  grenn::test::write_file(dir + "/bad.ctl", "training;\nnode ;\n");
  auto res = run_command({cli_path(), "run", "--graph",
                          assets_dir() + "/seed.json", "--program",
                          dir + "/bad.ctl", "--out", dir});
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("bad.ctl:2:") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("run reports a call to a nonexistent rule as an error") {
  std::string dir = grenn::test::make_temp_dir("norule");
  grenn::test::write_file(dir + "/bad.ctl", "conjure;\n");
  auto res = run_command({cli_path(), "run", "--graph",
                          assets_dir() + "/seed.json", "--program",
                          dir + "/bad.ctl", "--out", dir});
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("conjure") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("a failing top-level call exits with the blocked status") {
  std::string dir = grenn::test::make_temp_dir("blocked");
  grenn::test::write_file(dir + "/prog.ctl", "infer; infer;\n");
  auto res = run_command({cli_path(), "run", "--graph",
                          assets_dir() + "/seed.json", "--program",
                          dir + "/prog.ctl", "--out", dir});
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("blocked: 'infer'") != std::string::npos);
  // Effects up to the block survive into the final snapshot.
  HostGraph fin = io::load_graph(grenn::test::read_file(dir + "/final.json"));
  for (NodeId u : fin.nodes_of_type("User"))
    CHECK_FALSE(std::get<bool>(fin.attr(u, "upd")));
  fs::remove_all(dir);
}

TEST_CASE("two demo runs produce byte-identical artifacts") {
  std::string d1 = grenn::test::make_temp_dir("demo1");
  std::string d2 = grenn::test::make_temp_dir("demo2");
  auto r1 = run_command({cli_path(), "demo", "--out", d1});
  auto r2 = run_command({cli_path(), "demo", "--out", d2});
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.err == r2.err);

  auto files = dir_files(d1);
  CHECK(files == dir_files(d2));
  // The demo always writes DOT and CSV artifacts next to the snapshots.
  CHECK(std::find(files.begin(), files.end(), "final.dot") != files.end());
  CHECK(std::find(files.begin(), files.end(), "training2.csv") != files.end());
  for (const auto& name : files)
    CHECK_MESSAGE(grenn::test::read_file(d1 + "/" + name) ==
                      grenn::test::read_file(d2 + "/" + name),
                  name);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("the training threshold option reaches the rules") {
  // With theta above every delta the training loops stop after their first
  // cycle and no weight ever moves.
  std::string dir = grenn::test::make_temp_dir("theta");
  auto res = run_command({cli_path(), "demo", "--out", dir, "--theta", "2.0"});
  REQUIRE(res.exit_code == 0);
  auto cyc = cycle_lines(res.out);
  REQUIRE(cyc.size() == 2);
  CHECK(cyc[0].rfind("cycle=1 ", 0) == 0);
  CHECK(cyc[1].rfind("cycle=1 ", 0) == 0);

  HostGraph fin = io::load_graph(grenn::test::read_file(dir + "/final.json"));
  CHECK(std::get<double>(fin.attr(3, "weight")) == 1.0);  // untrained
  auto rows = grenn::test::read_trace_csv(
      grenn::test::read_file(dir + "/training1.csv"));
  CHECK(rows.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("usage errors do not look like blocked programs") {
  auto res = run_command({cli_path(), "run", "--graph", "only.json"});
  CHECK(res.exit_code == 1);  // missing --program
  auto help = run_command({cli_path(), "--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("validate") != std::string::npos);
}
