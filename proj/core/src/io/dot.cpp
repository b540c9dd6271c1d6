#include "grenn/io/dot.hpp"

namespace grenn::io {

namespace {

/// DOT double-quoted strings escape only backslash and quote.
std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const HostGraph& g) {
  std::string out = "digraph G {\n";
  for (const auto& [id, n] : g.nodes()) {
    std::string label = n.type + " " + std::to_string(id);
    for (const auto& [name, v] : n.attrs)
      label += "\\n" + name + "=" + dot_escape(format_value(v, 6));
    out += "  n" + std::to_string(id) + " [label=\"" + label + "\"];\n";
  }
  for (const auto& [id, e] : g.edges())
    out += "  n" + std::to_string(e.src) + " -> n" + std::to_string(e.tgt) +
           " [label=\"" + dot_escape(e.type) + "\"];\n";
  out += "}\n";
  return out;
}

}  // namespace grenn::io
