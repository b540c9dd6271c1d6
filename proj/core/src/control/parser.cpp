#include "grenn/control/parser.hpp"

#include <cctype>
#include <map>
#include <set>

namespace grenn::control {

namespace {

enum class Tok {
  Ident,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Semi,
  Comma,
  KwAlap,
  KwNode,
  KwFunction,
  KwOut,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    skip();
    int line = line_, col = col_;
    if (pos_ >= s_.size()) return {Tok::End, "", line, col};
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
              s_[pos_] == '_')) {
        id += s_[pos_];
        advance();
      }
      Tok k = Tok::Ident;
      if (id == "alap") k = Tok::KwAlap;
      else if (id == "node") k = Tok::KwNode;
      else if (id == "function") k = Tok::KwFunction;
      else if (id == "out") k = Tok::KwOut;
      return {k, id, line, col};
    }
    advance();
    switch (c) {
      case '{': return {Tok::LBrace, "{", line, col};
      case '}': return {Tok::RBrace, "}", line, col};
      case '(': return {Tok::LParen, "(", line, col};
      case ')': return {Tok::RParen, ")", line, col};
      case ';': return {Tok::Semi, ";", line, col};
      case ',': return {Tok::Comma, ",", line, col};
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line,
                         col);
    }
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '/') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) { bump(); }

  Program parse() {
    Program p;
    while (cur_.kind != Tok::End) {
      if (cur_.kind == Tok::KwFunction) {
        fn_positions_.push_back({cur_.line, cur_.col});
        p.functions.push_back(parse_function());
      } else {
        p.body.push_back(parse_stmt());
      }
    }
    check(p);
    return p;
  }

 private:
  void bump() { cur_ = lex_.next(); }

  Token expect(Tok k, const std::string& what) {
    if (cur_.kind != k)
      throw ParseError("expected " + what + ", got '" + describe(cur_) + "'",
                       cur_.line, cur_.col);
    Token t = cur_;
    bump();
    return t;
  }

  static std::string describe(const Token& t) {
    return t.kind == Tok::End ? "end of input" : t.text;
  }

  Function parse_function() {
    bump();  // "function"
    Function f;
    f.name = expect(Tok::Ident, "function name").text;
    expect(Tok::LParen, "'('");
    expect(Tok::RParen, "')'");
    expect(Tok::LBrace, "'{'");
    while (cur_.kind != Tok::RBrace) f.body.push_back(parse_stmt());
    bump();  // "}"
    return f;
  }

  Stmt parse_stmt() {
    Stmt s;
    s.line = cur_.line;
    s.col = cur_.col;
    if (cur_.kind == Tok::KwAlap) {
      bump();
      expect(Tok::LBrace, "'{'");
      Alap a;
      while (cur_.kind != Tok::RBrace) a.body.push_back(parse_stmt());
      bump();
      s.node = std::move(a);
      return s;
    }
    if (cur_.kind == Tok::KwNode) {
      bump();
      NodeDecl d;
      d.name = expect(Tok::Ident, "variable name").text;
      expect(Tok::Semi, "';'");
      s.node = std::move(d);
      return s;
    }
    Call c;
    c.callee = expect(Tok::Ident, "a statement").text;
    if (cur_.kind == Tok::Semi) {  // bare call: `training;`
      bump();
      s.node = std::move(c);
      return s;
    }
    expect(Tok::LParen, "'('");
    if (cur_.kind != Tok::RParen) {
      while (true) {
        Arg a;
        if (cur_.kind == Tok::KwOut) {
          a.out = true;
          bump();
        }
        a.var = expect(Tok::Ident, "argument variable").text;
        c.args.push_back(std::move(a));
        if (cur_.kind != Tok::Comma) break;
        bump();
      }
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Semi, "';'");
    s.node = std::move(c);
    return s;
  }

  // ----- post-parse checks ------------------------------------------------

  void check(const Program& p) {
    std::set<std::string> fn_names;
    for (std::size_t i = 0; i < p.functions.size(); ++i) {
      if (!fn_names.insert(p.functions[i].name).second)
        throw ParseError("function '" + p.functions[i].name +
                             "' defined twice",
                         fn_positions_[i].first, fn_positions_[i].second);
    }

    std::set<std::string> all_vars;
    for (const auto& f : p.functions) check_unit(f.body, fn_names, all_vars);
    check_unit(p.body, fn_names, all_vars);

    check_recursion(p, fn_names);
  }

  /// Variables are block-free: one scope per function body or top level,
  /// declaration before use, and names unique across the whole program so a
  /// function can never shadow or reach another scope's variable.
  void check_unit(const std::vector<Stmt>& body,
                  const std::set<std::string>& fn_names,
                  std::set<std::string>& all_vars) {
    std::set<std::string> scope;
    walk_unit(body, fn_names, all_vars, scope);
  }

  void walk_unit(const std::vector<Stmt>& body,
                 const std::set<std::string>& fn_names,
                 std::set<std::string>& all_vars,
                 std::set<std::string>& scope) {
    for (const auto& s : body) {
      if (auto* d = std::get_if<NodeDecl>(&s.node)) {
        if (!all_vars.insert(d->name).second)
          throw ParseError("variable '" + d->name + "' declared twice", s.line,
                           s.col);
        scope.insert(d->name);
      } else if (auto* c = std::get_if<Call>(&s.node)) {
        if (fn_names.count(c->callee) && !c->args.empty())
          throw ParseError("function '" + c->callee + "' takes no arguments",
                           s.line, s.col);
        std::set<std::string> outs;
        for (const auto& a : c->args) {
          if (!scope.count(a.var))
            throw ParseError("variable '" + a.var + "' is not declared here",
                             s.line, s.col);
          if (a.out && !outs.insert(a.var).second)
            throw ParseError("variable '" + a.var + "' taken out twice",
                             s.line, s.col);
        }
      } else {
        walk_unit(std::get<Alap>(s.node).body, fn_names, all_vars, scope);
      }
    }
  }

  void check_recursion(const Program& p, const std::set<std::string>& fns) {
    std::map<std::string, std::set<std::string>> calls;
    for (const auto& f : p.functions) collect_calls(f.body, fns, calls[f.name]);
    // Depth-first search over the call graph; a back edge is recursion.
    std::set<std::string> done, on_path;
    for (const auto& f : p.functions) visit(f.name, calls, done, on_path);
  }

  void collect_calls(const std::vector<Stmt>& body,
                     const std::set<std::string>& fns,
                     std::set<std::string>& out) {
    for (const auto& s : body) {
      if (auto* c = std::get_if<Call>(&s.node)) {
        if (fns.count(c->callee)) out.insert(c->callee);
      } else if (auto* a = std::get_if<Alap>(&s.node)) {
        collect_calls(a->body, fns, out);
      }
    }
  }

  void visit(const std::string& fn,
             const std::map<std::string, std::set<std::string>>& calls,
             std::set<std::string>& done, std::set<std::string>& on_path) {
    if (done.count(fn)) return;
    if (!on_path.insert(fn).second)
      throw ParseError("function '" + fn + "' calls itself, possibly through "
                       "other functions",
                       0, 0);
    auto it = calls.find(fn);
    if (it != calls.end())
      for (const auto& callee : it->second) visit(callee, calls, done, on_path);
    on_path.erase(fn);
    done.insert(fn);
  }

  Lexer lex_;
  Token cur_{Tok::End, "", 0, 0};
  std::vector<std::pair<int, int>> fn_positions_;
};

}  // namespace

Program parse_program(const std::string& text) { return Parser(text).parse(); }

}  // namespace grenn::control
