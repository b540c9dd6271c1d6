#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grenn/rewrite/expr.hpp"
#include "grenn/type_graph.hpp"

namespace grenn::rewrite {

enum class LevelKind {
  Root,              // matched exactly once (given parameter bindings)
  Universal,         // all matches, possibly none
  UniversalNonEmpty, // all matches; zero matches invalidates the parent match
};

struct QuantLevel {
  LevelId id;
  LevelKind kind;
  std::optional<LevelId> parent;  // empty only for the root level
};

enum class ElementRole {
  Reader,           // must match, survives
  Eraser,           // must match, deleted on application
  Creator,          // created on application, once per match of its level
  Embargo,          // negative condition: no extension to this element may exist
  CreatorIfAbsent,  // created unless the pre-state holds a counterpart
};

struct PatternNode {
  ElemId id;
  std::string type;
  LevelId level;
  ElementRole role;
};

struct PatternEdge {
  ElemId id;
  std::string type;
  ElemId src;
  ElemId tgt;
  LevelId level;
  ElementRole role;
};

/// Attribute write executed once per match of `level`. For creator elements
/// these define the initial attribute values.
struct AttrAssign {
  LevelId level;
  ElemId target;
  std::string attr;
  ExprPtr value;
};

enum class ParamDir { In, Out };

/// Rule parameter surfaced to the control language. `in` parameters pre-bind a
/// root pattern node before matching; `out` parameters report the host node a
/// root element was matched to or created as.
struct Param {
  std::string name;
  ParamDir dir;
  std::string node_type;
  ElemId elem;
};

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rewrite rule: a tree of quantification levels, pattern elements with
/// roles, guards, attribute assignments and parameters.
struct Rule {
  std::string name;
  std::vector<QuantLevel> levels;
  std::vector<PatternNode> nodes;
  std::vector<PatternEdge> edges;
  std::vector<Guard> guards;
  std::vector<AttrAssign> assigns;
  std::vector<Param> params;

  const QuantLevel* level(LevelId id) const;
  const PatternNode* pattern_node(ElemId id) const;
  const PatternEdge* pattern_edge(ElemId id) const;
  const Param* param(const std::string& name) const;

  /// Structural well-formedness against a schema. Checks level tree shape,
  /// element types, role placement, guard and assignment visibility, static
  /// expression sorts, and that guards are aggregate-free. Throws RuleError.
  void validate(const TypeGraph& tg) const;
};

using RuleSet = std::map<std::string, Rule>;

/// Static sort of an expression inside `rule`; `level` is the level the
/// expression is evaluated at. Throws RuleError on ill-sorted trees.
Sort static_sort(const Rule& rule, const TypeGraph& tg, LevelId level,
                 const ExprPtr& e);

}  // namespace grenn::rewrite
