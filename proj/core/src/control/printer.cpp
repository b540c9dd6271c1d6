#include "grenn/control/parser.hpp"

namespace grenn::control {

namespace {

void emit_stmt(std::string& out, const Stmt& s, int depth);

void emit_body(std::string& out, const std::vector<Stmt>& body, int depth) {
  for (const auto& s : body) emit_stmt(out, s, depth);
}

void emit_stmt(std::string& out, const Stmt& s, int depth) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  if (auto* d = std::get_if<NodeDecl>(&s.node)) {
    out += "node " + d->name + ";\n";
  } else if (auto* c = std::get_if<Call>(&s.node)) {
    if (c->args.empty()) {
      out += c->callee + ";\n";  // canonical bare form for zero-arg calls
    } else {
      out += c->callee + "(";
      for (std::size_t i = 0; i < c->args.size(); ++i) {
        if (i) out += ", ";
        if (c->args[i].out) out += "out ";
        out += c->args[i].var;
      }
      out += ");\n";
    }
  } else {
    out += "alap {\n";
    emit_body(out, std::get<Alap>(s.node).body, depth + 1);
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "}\n";
  }
}

}  // namespace

std::string pretty_print(const Program& prog) {
  std::string out;
  for (std::size_t i = 0; i < prog.functions.size(); ++i) {
    const Function& f = prog.functions[i];
    out += "function " + f.name + "() {\n";
    emit_body(out, f.body, 1);
    out += "}\n";
    if (i + 1 < prog.functions.size() || !prog.body.empty()) out += "\n";
  }
  emit_body(out, prog.body, 0);
  return out;
}

}  // namespace grenn::control
