#ifndef PYTS_PYTHON_PARSER_HPP
#define PYTS_PYTHON_PARSER_HPP

// Recursive-descent parser for Python 3 statements and expressions.
//
// Module and class bodies must parse. Inside function bodies the parser is
// lenient: a statement it cannot read is skipped up to the end of its
// logical line (or block) and reported as a warning, since the type model
// never looks at function bodies beyond `self.x = ...` assignments.

#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pyts/python/ast.hpp"
#include "pyts/python/lexer.hpp"

namespace pyts::py {

struct ParseResult {
  Module module;
  std::vector<Diagnostic> warnings;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string path) : toks_(std::move(tokens)) { module_.path = std::move(path); }

  ParseResult run() {
    while (!at(Tok::end)) {
      if (eat(Tok::newline)) continue;
      module_.body.push_back(statement(false));
    }
    return ParseResult{std::move(module_), std::move(warnings_)};
  }

 private:
  // ---- token helpers -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_op(std::string_view op, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::op && peek(ahead).text == op;
  }
  bool at_kw(std::string_view kw, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::name && peek(ahead).text == kw;
  }
  bool eat(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  bool eat_op(std::string_view op) {
    if (!at_op(op)) return false;
    ++pos_;
    return true;
  }
  bool eat_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    std::string got = peek().kind == Tok::end       ? "end of input"
                      : peek().kind == Tok::newline ? "end of line"
                      : peek().kind == Tok::indent  ? "indent"
                      : peek().kind == Tok::dedent  ? "dedent"
                                                    : "'" + peek().text + "'";
    throw syntax_error(peek().loc, what + ", got " + got);
  }
  void expect_op(std::string_view op) {
    if (!eat_op(op)) fail("expected '" + std::string(op) + "'");
  }
  void expect_kw(std::string_view kw) {
    if (!eat_kw(kw)) fail("expected '" + std::string(kw) + "'");
  }
  std::string expect_name() {
    if (!at(Tok::name) || is_keyword(peek().text)) fail("expected a name");
    return toks_[pos_++].text;
  }
  void expect_newline() {
    if (!eat(Tok::newline) && !at(Tok::end) && !at(Tok::dedent)) fail("expected end of line");
  }

  static bool is_keyword(std::string_view s) {
    static const std::initializer_list<std::string_view> kws = {
        "False", "None",   "True",  "and",   "as",     "assert", "async",  "await",    "break",
        "class", "continue", "def", "del",   "elif",   "else",   "except", "finally",  "for",
        "from",  "global", "if",    "import", "in",    "is",     "lambda", "nonlocal", "not",
        "or",    "pass",   "raise", "return", "try",   "while",  "with",   "yield",
    };
    for (auto k : kws)
      if (k == s) return true;
    return false;
  }

  static std::shared_ptr<Expr> node(ExprKind kind, SourceLoc loc) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->loc = std::move(loc);
    return e;
  }
  static std::shared_ptr<Stmt> stmt_node(StmtKind kind, SourceLoc loc) {
    auto s = std::make_shared<Stmt>();
    s->kind = kind;
    s->loc = std::move(loc);
    return s;
  }

  // ---- statements ----------------------------------------------------------

  StmtPtr statement(bool lenient) {
    if (!lenient) return statement_strict();
    std::size_t start = pos_;
    try {
      return statement_strict();
    } catch (const Error& e) {
      warnings_.push_back({Diagnostic::Severity::warning, "UnsupportedConstruct", toks_[start].loc,
                           std::string("skipped unreadable statement in function body (") + e.what() + ")"});
      pos_ = start;
      skip_logical_line();
      return stmt_node(StmtKind::other, toks_[start].loc);
    }
  }

  // Skips to the end of the current logical line, including any block that
  // hangs off it.
  void skip_logical_line() {
    int depth = 0;
    while (!at(Tok::end)) {
      if (at(Tok::indent)) ++depth;
      if (at(Tok::dedent)) {
        if (depth == 0) return;
        --depth;
        ++pos_;
        if (depth == 0) return;
        continue;
      }
      if (at(Tok::newline) && depth == 0) {
        ++pos_;
        if (!at(Tok::indent)) return;
        continue;
      }
      ++pos_;
    }
  }

  StmtPtr statement_strict() {
    SourceLoc loc = peek().loc;
    if (at_op("@")) return decorated();
    if (at_kw("class")) return class_def({}, loc);
    if (at_kw("def")) return function_def({}, loc, false);
    if (at_kw("async") && at_kw("def", 1)) {
      ++pos_;
      return function_def({}, loc, true);
    }
    if (at_kw("if") || at_kw("while") || at_kw("for") || at_kw("try") || at_kw("with") ||
        (at_kw("async") && (at_kw("for", 1) || at_kw("with", 1))))
      return compound();
    return simple_line();
  }

  StmtPtr decorated() {
    SourceLoc loc = peek().loc;
    std::vector<ExprPtr> decorators;
    while (eat_op("@")) {
      decorators.push_back(named_test());
      expect_newline();
    }
    if (at_kw("class")) return class_def(std::move(decorators), loc);
    bool is_async = eat_kw("async");
    if (at_kw("def")) return function_def(std::move(decorators), loc, is_async);
    fail("expected 'class' or 'def' after decorator");
  }

  StmtPtr class_def(std::vector<ExprPtr> decorators, SourceLoc loc) {
    expect_kw("class");
    auto s = stmt_node(StmtKind::class_def, loc);
    s->decorators = std::move(decorators);
    s->name = expect_name();
    if (eat_op("(")) {
      auto [args, kwargs] = arguments(")");
      s->items = std::move(args);
      s->keywords = std::move(kwargs);
    }
    expect_op(":");
    s->body = suite(false);
    return s;
  }

  StmtPtr function_def(std::vector<ExprPtr> decorators, SourceLoc loc, bool is_async) {
    expect_kw("def");
    auto s = stmt_node(StmtKind::function_def, loc);
    s->decorators = std::move(decorators);
    s->is_async = is_async;
    s->name = expect_name();
    expect_op("(");
    s->params = parameters(")", true);
    expect_op(")");
    if (eat_op("->")) s->returns = test();
    expect_op(":");
    s->body = suite(true);
    return s;
  }

  std::vector<Param> parameters(std::string_view close, bool annotated) {
    std::vector<Param> params;
    bool keyword_only = false;
    while (!at_op(close)) {
      Param p;
      if (eat_op("/")) {
        if (!eat_op(",")) break;
        continue;
      }
      if (eat_op("**")) {
        p.kind = ParamKind::var_keyword;
      } else if (eat_op("*")) {
        keyword_only = true;
        if (at_op(",") || at_op(close)) {
          if (!eat_op(",")) break;
          continue;
        }
        p.kind = ParamKind::var_positional;
      } else if (keyword_only) {
        p.kind = ParamKind::keyword_only;
      }
      p.name = expect_name();
      if (annotated && eat_op(":")) p.annotation = p.kind == ParamKind::var_positional ? star_or_test() : test();
      if (eat_op("=")) p.default_value = test();
      params.push_back(std::move(p));
      if (!eat_op(",")) break;
    }
    return params;
  }

  std::vector<StmtPtr> suite(bool lenient) {
    std::vector<StmtPtr> body;
    if (!eat(Tok::newline)) {
      auto line = simple_line();
      body.push_back(line);
      return body;
    }
    if (!eat(Tok::indent)) fail("expected an indented block");
    while (!eat(Tok::dedent) && !at(Tok::end)) {
      if (eat(Tok::newline)) continue;
      body.push_back(statement(lenient));
    }
    return body;
  }

  StmtPtr compound() {
    auto s = stmt_node(StmtKind::other, peek().loc);
    eat_kw("async");
    s->name = peek().text;
    const bool lenient = true;
    if (eat_kw("if") || eat_kw("while")) {
      s->items.push_back(named_test());
      expect_op(":");
      append(s->body, suite(lenient));
      while (at_kw("elif")) {
        ++pos_;
        named_test();
        expect_op(":");
        append(s->body, suite(lenient));
      }
      if (eat_kw("else")) {
        expect_op(":");
        append(s->body, suite(lenient));
      }
    } else if (eat_kw("for")) {
      target_list();
      expect_kw("in");
      testlist();
      expect_op(":");
      append(s->body, suite(lenient));
      if (eat_kw("else")) {
        expect_op(":");
        append(s->body, suite(lenient));
      }
    } else if (eat_kw("with")) {
      bool paren = at_op("(") && with_parenthesized();
      if (paren) ++pos_;
      do {
        if (paren && at_op(")")) break;
        test();
        if (eat_kw("as")) target();
      } while (eat_op(","));
      if (paren) expect_op(")");
      expect_op(":");
      append(s->body, suite(lenient));
    } else if (eat_kw("try")) {
      expect_op(":");
      append(s->body, suite(lenient));
      while (eat_kw("except")) {
        eat_op("*");
        if (!at_op(":")) {
          test();
          if (eat_kw("as")) expect_name();
          else if (eat_op(",")) test();
        }
        expect_op(":");
        append(s->body, suite(lenient));
      }
      if (eat_kw("else")) {
        expect_op(":");
        append(s->body, suite(lenient));
      }
      if (eat_kw("finally")) {
        expect_op(":");
        append(s->body, suite(lenient));
      }
    } else {
      fail("expected a compound statement");
    }
    return s;
  }

  // `with (a as b, c):` as opposed to `with (a) as b:`.
  bool with_parenthesized() const {
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.kind == Tok::op && (t.text == "(" || t.text == "[" || t.text == "{")) ++depth;
      if (t.kind == Tok::op && (t.text == ")" || t.text == "]" || t.text == "}")) {
        if (--depth == 0) return i + 1 < toks_.size() && toks_[i + 1].kind == Tok::op && toks_[i + 1].text == ":";
      }
      if (t.kind == Tok::newline) return false;
    }
    return false;
  }

  static void append(std::vector<StmtPtr>& out, std::vector<StmtPtr> more) {
    for (auto& s : more) out.push_back(std::move(s));
  }

  // simple_stmt (';' simple_stmt)* NEWLINE. A line holding several simple
  // statements is returned as the first one; the rest are never inspected.
  StmtPtr simple_line() {
    StmtPtr first = simple_statement();
    while (eat_op(";")) {
      if (at(Tok::newline) || at(Tok::end)) break;
      simple_statement();
    }
    expect_newline();
    return first;
  }

  StmtPtr simple_statement() {
    SourceLoc loc = peek().loc;
    if (eat_kw("pass")) return stmt_node(StmtKind::pass, loc);
    if (at_kw("import") || at_kw("from")) return import_stmt();
    for (const char* kw : {"break", "continue"}) {
      if (at_kw(kw)) {
        auto s = stmt_node(StmtKind::other, loc);
        s->name = toks_[pos_++].text;
        return s;
      }
    }
    if (at_kw("return") || at_kw("del")) {
      auto s = stmt_node(StmtKind::other, loc);
      s->name = toks_[pos_++].text;
      if (!at(Tok::newline) && !at_op(";") && !at(Tok::end)) s->items.push_back(testlist_star());
      return s;
    }
    if (at_kw("raise")) {
      auto s = stmt_node(StmtKind::other, loc);
      s->name = toks_[pos_++].text;
      if (!at(Tok::newline) && !at_op(";") && !at(Tok::end)) {
        s->items.push_back(test());
        if (eat_kw("from")) s->items.push_back(test());
      }
      return s;
    }
    if (at_kw("global") || at_kw("nonlocal")) {
      auto s = stmt_node(StmtKind::other, loc);
      s->name = toks_[pos_++].text;
      do expect_name();
      while (eat_op(","));
      return s;
    }
    if (at_kw("assert")) {
      auto s = stmt_node(StmtKind::other, loc);
      s->name = toks_[pos_++].text;
      s->items.push_back(test());
      if (eat_op(",")) s->items.push_back(test());
      return s;
    }
    return expression_statement();
  }

  StmtPtr import_stmt() {
    auto s = stmt_node(StmtKind::import, peek().loc);
    if (eat_kw("import")) {
      do {
        std::string name = dotted();
        if (eat_kw("as")) name += " as " + expect_name();
        s->name += s->name.empty() ? name : ", " + name;
      } while (eat_op(","));
      return s;
    }
    expect_kw("from");
    std::string module;
    while (at_op(".") || at_op("...")) module += toks_[pos_++].text;
    if (!at_kw("import")) module += dotted();
    expect_kw("import");
    s->name = module;
    bool paren = eat_op("(");
    if (eat_op("*")) {
      s->keywords.emplace_back("*", nullptr);
    } else {
      do {
        if (paren && at_op(")")) break;
        std::string name = expect_name();
        if (eat_kw("as")) expect_name();
        s->keywords.emplace_back(name, nullptr);
      } while (eat_op(","));
    }
    if (paren) expect_op(")");
    return s;
  }

  std::string dotted() {
    std::string name = expect_name();
    while (eat_op(".")) name += "." + expect_name();
    return name;
  }

  StmtPtr expression_statement() {
    SourceLoc loc = peek().loc;
    ExprPtr first = testlist_star();
    if (eat_op(":")) {
      auto s = stmt_node(StmtKind::ann_assign, loc);
      s->items.push_back(first);
      s->items.push_back(test());
      if (eat_op("=")) s->items.push_back(assignment_value());
      return s;
    }
    if (at_op("=")) {
      auto s = stmt_node(StmtKind::assign, loc);
      s->items.push_back(first);
      while (eat_op("=")) s->items.push_back(assignment_value());
      return s;
    }
    static const std::initializer_list<std::string_view> aug = {"+=", "-=", "*=", "/=", "//=", "%=", "**=",
                                                                ">>=", "<<=", "&=", "|=", "^=", "@="};
    for (auto op : aug) {
      if (eat_op(op)) {
        auto s = stmt_node(StmtKind::other, loc);
        s->name = std::string(op);
        s->items = {first, assignment_value()};
        return s;
      }
    }
    auto s = stmt_node(StmtKind::expr, loc);
    s->items.push_back(first);
    return s;
  }

  ExprPtr assignment_value() {
    if (at_kw("yield")) return yield_expr();
    return testlist_star();
  }

  // ---- expressions ---------------------------------------------------------

  ExprPtr yield_expr() {
    auto e = node(ExprKind::other, peek().loc);
    expect_kw("yield");
    e->text = "yield";
    if (eat_kw("from")) {
      e->items.push_back(test());
    } else if (!at(Tok::newline) && !at_op(")") && !at_op(";") && !at_op("=") && !at(Tok::end)) {
      e->items.push_back(testlist_star());
    }
    return e;
  }

  void target_list() {
    do {
      if (at_kw("in")) break;
      target();
    } while (eat_op(","));
  }

  ExprPtr target() {
    if (at_op("*")) return star_expr();
    return bit_or();
  }

  // testlist_star_expr: a tuple when a top-level comma is present.
  ExprPtr testlist_star() {
    SourceLoc loc = peek().loc;
    ExprPtr first = star_or_named();
    if (!at_op(",")) return first;
    auto t = node(ExprKind::tuple, loc);
    t->items.push_back(first);
    while (eat_op(",")) {
      if (ends_expression()) break;
      t->items.push_back(star_or_named());
    }
    return t;
  }

  ExprPtr testlist() {
    SourceLoc loc = peek().loc;
    ExprPtr first = star_or_test();
    if (!at_op(",")) return first;
    auto t = node(ExprKind::tuple, loc);
    t->items.push_back(first);
    while (eat_op(",")) {
      if (ends_expression() || at_op(":")) break;
      t->items.push_back(star_or_test());
    }
    return t;
  }

  bool ends_expression() const {
    return at(Tok::newline) || at(Tok::end) || at_op("=") || at_op(")") || at_op("]") || at_op("}") ||
           at_op(";") || at_op(":");
  }

  ExprPtr star_or_named() { return at_op("*") ? star_expr() : named_test(); }
  ExprPtr star_or_test() { return at_op("*") ? star_expr() : test(); }

  ExprPtr star_expr() {
    auto e = node(ExprKind::starred, peek().loc);
    expect_op("*");
    e->items.push_back(bit_or());
    return e;
  }

  ExprPtr named_test() {
    ExprPtr e = test();
    if (at_op(":=")) {
      auto w = node(ExprKind::other, peek().loc);
      ++pos_;
      w->text = ":=";
      w->items = {e, test()};
      return w;
    }
    return e;
  }

  ExprPtr test() {
    if (at_kw("lambda")) return lambda();
    SourceLoc loc = peek().loc;
    ExprPtr e = or_test();
    if (eat_kw("if")) {
      auto c = node(ExprKind::other, loc);
      c->text = "if";
      c->items.push_back(e);
      c->items.push_back(or_test());
      expect_kw("else");
      c->items.push_back(test());
      return c;
    }
    return e;
  }

  ExprPtr test_no_cond() { return at_kw("lambda") ? lambda() : or_test(); }

  ExprPtr lambda() {
    auto e = node(ExprKind::lambda, peek().loc);
    expect_kw("lambda");
    e->params = parameters(":", false);
    expect_op(":");
    e->items.push_back(test());
    return e;
  }

  ExprPtr bool_chain(const char* kw, ExprPtr (Parser::*next)()) {
    SourceLoc loc = peek().loc;
    ExprPtr e = (this->*next)();
    while (at_kw(kw)) {
      ++pos_;
      auto b = node(ExprKind::other, loc);
      b->text = kw;
      b->items = {e, (this->*next)()};
      e = b;
    }
    return e;
  }

  ExprPtr or_test() { return bool_chain("or", &Parser::and_test); }
  ExprPtr and_test() { return bool_chain("and", &Parser::not_test); }

  ExprPtr not_test() {
    if (at_kw("not")) {
      auto e = node(ExprKind::unary, peek().loc);
      ++pos_;
      e->text = "not";
      e->items.push_back(not_test());
      return e;
    }
    return comparison();
  }

  bool at_comparison() const {
    static const std::initializer_list<std::string_view> ops = {"<", ">", "==", ">=", "<=", "!="};
    if (peek().kind == Tok::op) {
      for (auto op : ops)
        if (peek().text == op) return true;
      return false;
    }
    return at_kw("in") || at_kw("is") || (at_kw("not") && at_kw("in", 1));
  }

  ExprPtr comparison() {
    SourceLoc loc = peek().loc;
    ExprPtr e = bit_or();
    if (!at_comparison()) return e;
    auto c = node(ExprKind::other, loc);
    c->text = "compare";
    c->items.push_back(e);
    while (at_comparison()) {
      if (eat_kw("not")) expect_kw("in");
      else if (eat_kw("is")) eat_kw("not");
      else ++pos_;
      c->items.push_back(bit_or());
    }
    return c;
  }

  ExprPtr binary(std::initializer_list<std::string_view> ops, ExprPtr (Parser::*next)()) {
    SourceLoc loc = peek().loc;
    ExprPtr e = (this->*next)();
    for (;;) {
      bool matched = false;
      for (auto op : ops) {
        if (!at_op(op)) continue;
        ++pos_;
        auto b = node(ExprKind::binop, loc);
        b->text = std::string(op);
        b->items = {e, (this->*next)()};
        e = b;
        matched = true;
        break;
      }
      if (!matched) return e;
    }
  }

  ExprPtr bit_or() { return binary({"|"}, &Parser::bit_xor); }
  ExprPtr bit_xor() { return binary({"^"}, &Parser::bit_and); }
  ExprPtr bit_and() { return binary({"&"}, &Parser::shift); }
  ExprPtr shift() { return binary({"<<", ">>"}, &Parser::arith); }
  ExprPtr arith() { return binary({"+", "-"}, &Parser::term); }
  ExprPtr term() { return binary({"*", "/", "//", "%", "@"}, &Parser::factor); }

  ExprPtr factor() {
    if (at_op("+") || at_op("-") || at_op("~")) {
      auto e = node(ExprKind::unary, peek().loc);
      e->text = toks_[pos_++].text;
      e->items.push_back(factor());
      return e;
    }
    return power();
  }

  ExprPtr power() {
    SourceLoc loc = peek().loc;
    ExprPtr e;
    if (at_kw("await")) {
      ++pos_;
      auto a = node(ExprKind::other, loc);
      a->text = "await";
      a->items.push_back(primary());
      e = a;
    } else {
      e = primary();
    }
    if (at_op("**")) {
      ++pos_;
      auto b = node(ExprKind::binop, loc);
      b->text = "**";
      b->items = {e, factor()};
      return b;
    }
    return e;
  }

  ExprPtr primary() {
    ExprPtr e = atom();
    for (;;) {
      SourceLoc loc = peek().loc;
      if (eat_op(".")) {
        auto a = node(ExprKind::attribute, loc);
        a->items.push_back(e);
        a->text = expect_name_or_keyword();
        e = a;
      } else if (eat_op("(")) {
        auto c = node(ExprKind::call, e->loc);
        c->items.push_back(e);
        auto [args, kwargs] = arguments(")");
        for (auto& a : args) c->items.push_back(std::move(a));
        c->keywords = std::move(kwargs);
        e = c;
      } else if (eat_op("[")) {
        auto s = node(ExprKind::subscript, e->loc);
        s->items.push_back(e);
        s->items.push_back(subscript_list());
        expect_op("]");
        e = s;
      } else {
        return e;
      }
    }
  }

  std::string expect_name_or_keyword() {
    if (!at(Tok::name)) fail("expected a name");
    return toks_[pos_++].text;
  }

  // Call arguments or class bases up to `close`, which is consumed.
  std::pair<std::vector<ExprPtr>, std::vector<std::pair<std::string, ExprPtr>>> arguments(
      std::string_view close) {
    std::vector<ExprPtr> args;
    std::vector<std::pair<std::string, ExprPtr>> kwargs;
    while (!at_op(close)) {
      if (eat_op("**")) {
        kwargs.emplace_back("**", test());
      } else if (at_op("*")) {
        args.push_back(star_expr());
      } else if (at(Tok::name) && at_op("=", 1)) {
        std::string name = toks_[pos_].text;
        pos_ += 2;
        kwargs.emplace_back(std::move(name), test());
      } else {
        ExprPtr a = named_test();
        if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) a = comprehension(a, a->loc);
        args.push_back(a);
      }
      if (!eat_op(",")) break;
    }
    expect_op(close);
    return {std::move(args), std::move(kwargs)};
  }

  ExprPtr subscript_list() {
    SourceLoc loc = peek().loc;
    ExprPtr first = subscript_item();
    if (!at_op(",")) return first;
    auto t = node(ExprKind::tuple, loc);
    t->items.push_back(first);
    while (eat_op(",")) {
      if (at_op("]")) break;
      t->items.push_back(subscript_item());
    }
    return t;
  }

  ExprPtr subscript_item() {
    SourceLoc loc = peek().loc;
    ExprPtr lower;
    if (!at_op(":")) {
      lower = star_or_named();
      if (!at_op(":")) return lower;
    }
    auto s = node(ExprKind::other, loc);
    s->text = "slice";
    if (lower) s->items.push_back(lower);
    while (eat_op(":")) {
      if (!at_op(":") && !at_op(",") && !at_op("]")) s->items.push_back(test());
    }
    return s;
  }

  ExprPtr comprehension(ExprPtr element, SourceLoc loc) {
    auto c = node(ExprKind::other, loc);
    c->text = "comprehension";
    c->items.push_back(std::move(element));
    while (at_kw("for") || at_kw("async")) {
      eat_kw("async");
      expect_kw("for");
      target_list();
      expect_kw("in");
      c->items.push_back(or_test());
      while (eat_kw("if")) c->items.push_back(test_no_cond());
    }
    return c;
  }

  ExprPtr atom() {
    SourceLoc loc = peek().loc;
    const Token& t = peek();
    if (t.kind == Tok::name) {
      if (t.text == "None" || t.text == "True" || t.text == "False") {
        auto c = node(ExprKind::constant, loc);
        c->constant = t.text == "None" ? ConstKind::none_ : ConstKind::boolean;
        c->text = t.text;
        ++pos_;
        return c;
      }
      if (t.text == "yield") return yield_expr();
      if (is_keyword(t.text)) fail("unexpected keyword");
      auto n = node(ExprKind::name, loc);
      n->text = t.text;
      ++pos_;
      return n;
    }
    if (t.kind == Tok::number) {
      auto c = node(ExprKind::constant, loc);
      const std::string& s = t.text;
      const bool hex = s.size() > 1 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X' || s[1] == 'o' ||
                                                      s[1] == 'O' || s[1] == 'b' || s[1] == 'B');
      if (!hex && (s.back() == 'j' || s.back() == 'J')) c->constant = ConstKind::imaginary;
      else if (!hex && s.find_first_of(".eE") != std::string::npos) c->constant = ConstKind::floating;
      else c->constant = ConstKind::integer;
      c->text = s;
      ++pos_;
      return c;
    }
    if (t.kind == Tok::string) return strings();
    if (eat_op("...")) {
      auto c = node(ExprKind::constant, loc);
      c->constant = ConstKind::ellipsis;
      c->text = "...";
      return c;
    }
    if (eat_op("(")) {
      if (eat_op(")")) return node(ExprKind::tuple, loc);
      if (at_kw("yield")) {
        ExprPtr y = yield_expr();
        expect_op(")");
        return y;
      }
      ExprPtr first = star_or_named();
      if (at_kw("for") || at_kw("async")) {
        ExprPtr g = comprehension(first, loc);
        expect_op(")");
        return g;
      }
      if (eat_op(")")) return first;
      auto tup = node(ExprKind::tuple, loc);
      tup->items.push_back(first);
      while (eat_op(",")) {
        if (at_op(")")) break;
        tup->items.push_back(star_or_named());
      }
      expect_op(")");
      return tup;
    }
    if (eat_op("[")) {
      auto list = node(ExprKind::list, loc);
      if (eat_op("]")) return list;
      ExprPtr first = star_or_named();
      if (at_kw("for") || at_kw("async")) {
        ExprPtr g = comprehension(first, loc);
        expect_op("]");
        return g;
      }
      list->items.push_back(first);
      while (eat_op(",")) {
        if (at_op("]")) break;
        list->items.push_back(star_or_named());
      }
      expect_op("]");
      return list;
    }
    if (eat_op("{")) return brace(loc);
    fail("expected an expression");
  }

  ExprPtr brace(SourceLoc loc) {
    if (eat_op("}")) return node(ExprKind::dict, loc);
    auto dict_item = [&](std::shared_ptr<Expr>& d) {
      if (eat_op("**")) {
        auto spread = node(ExprKind::other, peek().loc);
        spread->text = "**";
        spread->items.push_back(bit_or());
        d->items.push_back(spread);
        d->items.push_back(spread);
        return;
      }
      d->items.push_back(test());
      expect_op(":");
      d->items.push_back(test());
    };
    if (at_op("**") || !at_op("*")) {
      // Look for `key: value` to tell a dict from a set.
      std::size_t save = pos_;
      bool is_dict = at_op("**");
      if (!is_dict) {
        test();
        is_dict = at_op(":");
      }
      pos_ = save;
      if (is_dict) {
        auto d = node(ExprKind::dict, loc);
        dict_item(d);
        if (at_kw("for") || at_kw("async")) {
          ExprPtr g = comprehension(d, loc);
          expect_op("}");
          return g;
        }
        while (eat_op(",")) {
          if (at_op("}")) break;
          dict_item(d);
        }
        expect_op("}");
        return d;
      }
    }
    auto set = node(ExprKind::set, loc);
    ExprPtr first = star_or_named();
    if (at_kw("for") || at_kw("async")) {
      ExprPtr g = comprehension(first, loc);
      expect_op("}");
      return g;
    }
    set->items.push_back(first);
    while (eat_op(",")) {
      if (at_op("}")) break;
      set->items.push_back(star_or_named());
    }
    expect_op("}");
    return set;
  }

  // Adjacent literals concatenate. An f-string anywhere makes the result
  // opaque text; a bytes prefix makes it bytes.
  ExprPtr strings() {
    auto c = node(ExprKind::constant, peek().loc);
    c->constant = ConstKind::string;
    while (at(Tok::string)) {
      const std::string& raw = toks_[pos_++].text;
      auto nul = raw.find('\0');
      std::string prefix = raw.substr(0, nul);
      if (prefix.find('b') != std::string::npos) c->constant = ConstKind::bytes;
      if (prefix.find('f') != std::string::npos) c->keywords.emplace_back("f", nullptr);
      c->text += raw.substr(nul + 1);
    }
    return c;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Module module_;
  std::vector<Diagnostic> warnings_;
};

inline ParseResult parse_python(std::string_view source, std::string path = "") {
  return Parser(tokenize(source, path), path).run();
}

}  // namespace pyts::py

#endif
