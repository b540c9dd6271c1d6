#include "support/process.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace grenn::test {

namespace fs = std::filesystem;

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

std::string env_or_throw(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v)
    throw std::runtime_error(std::string("environment variable ") + name +
                             " is not set; run through ctest");
  return v;
}

}  // namespace

RunResult run_command(const std::vector<std::string>& argv) {
  fs::path dir = make_temp_dir("cmd");
  fs::path out_path = dir / "out";
  fs::path err_path = dir / "err";

  std::string cmd;
  for (const auto& a : argv) {
    if (!cmd.empty()) cmd += ' ';
    cmd += shell_quote(a);
  }
  cmd += " >" + shell_quote(out_path.string());
  cmd += " 2>" + shell_quote(err_path.string());

  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_path.string());
  r.err = read_file(err_path.string());
  fs::remove_all(dir);
  return r;
}

std::string cli_path() { return env_or_throw("GRENN_CLI"); }

std::string assets_dir() { return env_or_throw("GRENN_ASSETS"); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

std::string make_temp_dir(const std::string& hint) {
  static std::atomic<int> counter{0};
  fs::path base = fs::temp_directory_path();
  for (;;) {
    fs::path dir = base / ("grenn_" + hint + "_" +
                           std::to_string(::getpid()) + "_" +
                           std::to_string(counter++));
    if (fs::create_directory(dir)) return dir.string();
  }
}

}  // namespace grenn::test
