#pragma once

#include <string>

#include "grenn/host_graph.hpp"

namespace grenn::io {

/// Render a graph in DOT form: one statement per node (label = type, id and
/// attributes, reals at 6 significant digits) and one per edge. Statements
/// are ordered by id, so output is deterministic.
std::string export_dot(const HostGraph& g);

}  // namespace grenn::io
