#pragma once

#include <stdexcept>
#include <string>

#include "grenn/control/ast.hpp"

namespace grenn::control {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + msg),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

/// Parses a control program.
///
/// Grammar, with `//` line comments and free whitespace:
///
///   program  := (function | stmt)*
///   function := "function" IDENT "(" ")" block
///   block    := "{" stmt* "}"
///   stmt     := "alap" block | "node" IDENT ";" | call ";"
///   call     := IDENT "(" (arg ("," arg)*)? ")"
///   arg      := IDENT | "out" IDENT
///
/// Beyond the grammar, parsing rejects: variables used before their
/// declaration or declared twice anywhere in the program, function bodies
/// referring to variables of other scopes, duplicate function names, calls
/// that pass arguments to a function, a variable taken `out` twice in one
/// call, and functions that call each other recursively. Names that are not
/// functions stay unresolved here; execution looks them up as rules.
Program parse_program(const std::string& text);

/// Canonical source form: two-space indentation, one statement per line,
/// functions first with a blank line after each. Parsing the output yields
/// the same program.
std::string pretty_print(const Program& prog);

}  // namespace grenn::control
