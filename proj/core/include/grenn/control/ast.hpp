#pragma once

#include <string>
#include <variant>
#include <vector>

namespace grenn::control {

struct Stmt;

/// Call argument. A plain argument feeds the node held by a variable into the
/// rule; an `out` argument stores a node the rule reports back.
struct Arg {
  bool out = false;
  std::string var;

  bool operator==(const Arg&) const = default;
};

struct Call {
  std::string callee;
  std::vector<Arg> args;

  bool operator==(const Call&) const = default;
};

struct NodeDecl {
  std::string name;

  bool operator==(const NodeDecl&) const = default;
};

/// As-long-as-possible loop: repeats its body until a call in it fails. The
/// effects of the partial final iteration are kept.
struct Alap {
  std::vector<Stmt> body;

  bool operator==(const Alap&) const = default;
};

struct Stmt {
  std::variant<NodeDecl, Call, Alap> node;
  int line = 0;
  int col = 0;

  // Source positions are diagnostics, not program identity.
  bool operator==(const Stmt& o) const { return node == o.node; }
};

struct Function {
  std::string name;
  std::vector<Stmt> body;

  bool operator==(const Function& o) const {
    return name == o.name && body == o.body;
  }
};

struct Program {
  std::vector<Function> functions;
  std::vector<Stmt> body;

  bool operator==(const Program&) const = default;
};

}  // namespace grenn::control
