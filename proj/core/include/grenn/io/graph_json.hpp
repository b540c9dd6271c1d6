#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "grenn/host_graph.hpp"

namespace grenn::io {

/// Serialization failure. When the document was well-formed but the graph it
/// describes is broken, `violations()` lists the defects.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg, std::vector<Violation> violations = {})
      : std::runtime_error(msg), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Render a graph as a standalone JSON document embedding its type graph.
/// Canonical: nodes and edges ascending by id, attributes in name order,
/// reals in shortest round-trip form, 2-space indentation. Equal graphs
/// produce identical bytes.
std::string save_graph(const HostGraph& g);

/// Parse a document produced by save_graph (format version 1). The loaded
/// graph keeps every id, including the fresh-id counter. Numeric attribute
/// values are read at the sort their declaration demands, so an integer
/// literal is a valid spelling of a real value. Throws IoError on malformed
/// input, unknown format versions, schema violations and dangling edges.
HostGraph load_graph(const std::string& text);

}  // namespace grenn::io
