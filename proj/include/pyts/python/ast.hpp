#ifndef PYTS_PYTHON_AST_HPP
#define PYTS_PYTHON_AST_HPP

// Syntax tree for the Python subset. Expressions keep enough structure to
// read annotations, literals and class-construction calls; anything the
// front end never inspects (comprehensions, comparisons, f-strings) is kept
// as an opaque `other` node.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pyts/error.hpp"

namespace pyts::py {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind {
  name,       // text = identifier
  attribute,  // items[0] = value, text = attribute
  subscript,  // items[0] = value, items[1] = index (a tuple when comma separated)
  call,       // items[0] = callee, items[1..] = positional args; keywords
  constant,   // constant kind + text
  tuple,
  list,
  dict,  // items alternate key, value
  set,
  binop,    // text = operator, items = {lhs, rhs}
  unary,    // text = operator, items = {operand}
  lambda,   // params, items[0] = body
  starred,  // items[0]
  other,
};

enum class ConstKind { none_, boolean, integer, floating, imaginary, string, bytes, ellipsis };

enum class ParamKind { positional, var_positional, keyword_only, var_keyword };

struct Param {
  std::string name;
  ExprPtr annotation;  // may be null
  ExprPtr default_value;
  ParamKind kind = ParamKind::positional;
};

struct Expr {
  ExprKind kind = ExprKind::other;
  std::string text;
  ConstKind constant = ConstKind::none_;
  std::vector<ExprPtr> items;
  std::vector<std::pair<std::string, ExprPtr>> keywords;
  std::vector<Param> params;
  SourceLoc loc;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

enum class StmtKind {
  class_def,
  function_def,
  assign,      // targets = items[0..n-2], value = items.back()
  ann_assign,  // items = {target, annotation[, value]}
  expr,
  import,
  pass,
  other,  // control flow and the like; nested statements kept in body
};

struct Stmt {
  StmtKind kind = StmtKind::other;
  std::string name;  // class/function name, or keyword of an `other` statement
  std::vector<ExprPtr> decorators;
  std::vector<ExprPtr> items;  // bases, assignment parts, expression
  std::vector<std::pair<std::string, ExprPtr>> keywords;
  std::vector<Param> params;
  ExprPtr returns;
  std::vector<StmtPtr> body;
  bool is_async = false;
  SourceLoc loc;
};

struct Module {
  std::string path;
  std::vector<StmtPtr> body;
};

/// Dotted name of a `name` or `attribute` chain (`typing.Protocol`), or empty.
inline std::string dotted_name(const Expr& e) {
  if (e.kind == ExprKind::name) return e.text;
  if (e.kind == ExprKind::attribute) {
    auto head = dotted_name(*e.items[0]);
    return head.empty() ? std::string() : head + "." + e.text;
  }
  return {};
}

/// Last component of a dotted name (`typing.Protocol` -> `Protocol`).
inline std::string simple_name(const Expr& e) {
  if (e.kind == ExprKind::name || e.kind == ExprKind::attribute) return e.text;
  return {};
}

}  // namespace pyts::py

#endif
