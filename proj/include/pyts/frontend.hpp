#ifndef PYTS_FRONTEND_HPP
#define PYTS_FRONTEND_HPP

// Reads the supported subset of a Python module into class and function
// models. Statements outside the subset are skipped with a warning.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pyts/class_info.hpp"
#include "pyts/python/parser.hpp"

namespace pyts {

struct TypeVarDecl {
  std::string name;
  SourceLoc loc;
};

/// A module-level variable with its annotation and/or value.
struct VariableDecl {
  std::string name;
  py::ExprPtr annotation;
  py::ExprPtr value;
  SourceLoc loc;
};

/// `Base.register(Sub)` at module level.
struct Registration {
  std::string base;
  std::string sub;
  SourceLoc loc;
};

struct ModuleInfo {
  std::string path;
  std::vector<ClassInfo> classes;
  std::vector<MemberDecl> functions;
  std::vector<VariableDecl> variables;
  std::vector<TypeVarDecl> type_vars;
  std::vector<Registration> registrations;
  /// Names brought in by `from m import a, b` (`*` for a star import).
  std::vector<std::string> imported;
  std::vector<Diagnostic> warnings;
};

namespace detail {

class ModuleReader {
 public:
  explicit ModuleReader(ModuleInfo& out) : out_(out) {}

  void read(const py::Module& m) {
    for (const auto& s : m.body) top_level(*s);
  }

 private:
  void warn(const SourceLoc& loc, std::string message) {
    out_.warnings.push_back({Diagnostic::Severity::warning, "UnsupportedConstruct", loc, std::move(message)});
  }

  static bool is_docstring(const py::Stmt& s) {
    if (s.kind != py::StmtKind::expr) return false;
    const auto& e = *s.items[0];
    return e.kind == py::ExprKind::constant &&
           (e.constant == py::ConstKind::string || e.constant == py::ConstKind::ellipsis);
  }

  void top_level(const py::Stmt& s) {
    switch (s.kind) {
      case py::StmtKind::class_def: out_.classes.push_back(read_class(s)); return;
      case py::StmtKind::function_def: {
        MemberDecl f = read_function(s);
        f.kind = MemberKind::function;
        out_.functions.push_back(std::move(f));
        return;
      }
      case py::StmtKind::assign: return module_assign(s);
      case py::StmtKind::ann_assign: {
        const auto& target = *s.items[0];
        if (target.kind != py::ExprKind::name) return warn(s.loc, "annotated assignment to a non-name target");
        out_.variables.push_back({target.text, s.items[1], s.items.size() > 2 ? s.items[2] : nullptr, s.loc});
        return;
      }
      case py::StmtKind::expr: return module_expr(s);
      case py::StmtKind::import:
        for (const auto& kw : s.keywords) out_.imported.push_back(kw.first);
        return;
      case py::StmtKind::pass: return;
      case py::StmtKind::other: return warn(s.loc, "'" + s.name + "' statement at module level is skipped");
    }
  }

  void module_expr(const py::Stmt& s) {
    const auto& e = *s.items[0];
    // Base.register(Sub)
    if (e.kind == py::ExprKind::call && e.items[0]->kind == py::ExprKind::attribute &&
        e.items[0]->text == "register" && e.items.size() == 2) {
      std::string base = py::dotted_name(*e.items[0]->items[0]);
      std::string sub = py::dotted_name(*e.items[1]);
      if (!base.empty() && !sub.empty()) out_.registrations.push_back({base, sub, s.loc});
    }
  }

  void module_assign(const py::Stmt& s) {
    const auto& value = s.items.back();
    for (std::size_t i = 0; i + 1 < s.items.size(); ++i) {
      const auto& target = *s.items[i];
      if (target.kind != py::ExprKind::name) continue;
      if (is_call_to(*value, "TypeVar")) {
        out_.type_vars.push_back({target.text, s.loc});
        continue;
      }
      if (is_call_to(*value, "type") && value->items.size() == 4) {
        if (auto cls = read_type_call(target.text, *value)) {
          out_.classes.push_back(std::move(*cls));
          continue;
        }
        warn(s.loc, "type(...) call with non-literal arguments is skipped");
      }
      out_.variables.push_back({target.text, nullptr, value, s.loc});
    }
  }

  static bool is_call_to(const py::Expr& e, std::string_view callee) {
    return e.kind == py::ExprKind::call && py::simple_name(*e.items[0]) == callee;
  }

  // type('Name', (bases...), {'member': value, ...}) with literal arguments.
  std::optional<ClassInfo> read_type_call(const std::string& target, const py::Expr& call) {
    const auto& name = *call.items[1];
    const auto& bases = *call.items[2];
    const auto& dict = *call.items[3];
    if (name.kind != py::ExprKind::constant || name.constant != py::ConstKind::string) return std::nullopt;
    if (bases.kind != py::ExprKind::tuple || dict.kind != py::ExprKind::dict) return std::nullopt;
    ClassInfo c;
    c.name = name.text;
    c.dynamic = true;
    c.loc = call.loc;
    if (c.name != target) warn(call.loc, "class '" + c.name + "' is bound to the variable '" + target + "'");
    for (const auto& b : bases.items) {
      auto ref = read_base(*b);
      if (!ref) return std::nullopt;
      c.bases.push_back(std::move(*ref));
    }
    for (std::size_t i = 0; i + 1 < dict.items.size(); i += 2) {
      const auto& key = *dict.items[i];
      if (key.kind != py::ExprKind::constant || key.constant != py::ConstKind::string) return std::nullopt;
      MemberDecl m;
      m.name = key.text;
      m.kind = MemberKind::attribute;
      m.value = dict.items[i + 1];
      m.loc = key.loc;
      if (m.value->kind == py::ExprKind::name) {
        for (const auto& f : out_.functions) {
          if (f.name != m.value->text) continue;
          std::string keep = m.name;
          m = f;
          m.name = keep;
          m.kind = MemberKind::method;
        }
      }
      add_member(c, std::move(m));
    }
    finish_class(c);
    return c;
  }

  std::optional<BaseRef> read_base(const py::Expr& e) {
    if (e.kind == py::ExprKind::name || e.kind == py::ExprKind::attribute) {
      if (py::dotted_name(e).empty()) return std::nullopt;
      return BaseRef{py::simple_name(e), {}, e.loc};
    }
    if (e.kind == py::ExprKind::subscript) {
      const auto& head = *e.items[0];
      if (py::dotted_name(head).empty()) return std::nullopt;
      BaseRef ref{py::simple_name(head), {}, e.loc};
      const auto& index = e.items[1];
      if (index->kind == py::ExprKind::tuple) ref.args = index->items;
      else ref.args.push_back(index);
      return ref;
    }
    return std::nullopt;
  }

  ClassInfo read_class(const py::Stmt& s) {
    ClassInfo c;
    c.name = s.name;
    c.loc = s.loc;
    for (const auto& d : s.decorators) {
      std::string n = py::simple_name(*d);
      if (n == "runtime_checkable") c.runtime_checkable = true;
      else warn(d->loc, "decorator on class " + c.name + " is ignored");
    }
    for (const auto& b : s.items) {
      if (auto ref = read_base(*b)) c.bases.push_back(std::move(*ref));
      else warn(b->loc, "unsupported base expression in class " + c.name + " is skipped");
    }
    for (const auto& [key, value] : s.keywords) {
      if (key == "metaclass" && value && !py::dotted_name(*value).empty()) c.metaclass = py::simple_name(*value);
      else warn(s.loc, "class keyword '" + key + "' in class " + c.name + " is ignored");
    }
    for (const auto& st : s.body) class_statement(c, *st);
    finish_class(c);
    return c;
  }

  void finish_class(ClassInfo& c) {
    for (const auto& b : c.bases) {
      if (is_protocol_base(b.name)) c.kind = ClassKind::protocol;
      if (is_protocol_base(b.name) || is_generic_base(b.name)) {
        for (const auto& a : b.args) {
          if (a->kind != py::ExprKind::name) continue;
          if (std::find(c.type_params.begin(), c.type_params.end(), a->text) == c.type_params.end())
            c.type_params.push_back(a->text);
        }
      }
    }
    if (c.kind != ClassKind::protocol) {
      bool abc_base = std::any_of(c.bases.begin(), c.bases.end(), [](const BaseRef& b) { return b.name == "ABC"; });
      if (abc_base || c.metaclass == "ABCMeta") c.kind = ClassKind::abc;
    }
  }

  static void add_member(ClassInfo& c, MemberDecl m) {
    for (auto& existing : c.members) {
      if (existing.name == m.name) {
        existing = std::move(m);
        return;
      }
    }
    c.members.push_back(std::move(m));
  }

  void class_statement(ClassInfo& c, const py::Stmt& s) {
    switch (s.kind) {
      case py::StmtKind::function_def: {
        if (std::any_of(s.decorators.begin(), s.decorators.end(), [](const py::ExprPtr& d) {
              return d->kind == py::ExprKind::attribute && (d->text == "setter" || d->text == "deleter");
            }))
          return;
        MemberDecl m = read_function(s);
        if (m.name == "__init__") collect_instance_attributes(c, s, m);
        add_member(c, std::move(m));
        return;
      }
      case py::StmtKind::assign: {
        for (std::size_t i = 0; i + 1 < s.items.size(); ++i) {
          const auto& target = *s.items[i];
          if (target.kind != py::ExprKind::name) {
            warn(s.loc, "assignment to a non-name target in class " + c.name + " is skipped");
            continue;
          }
          if (target.text == "__slots__" || target.text == "__match_args__") continue;
          MemberDecl m;
          m.name = target.text;
          m.kind = MemberKind::attribute;
          m.value = s.items.back();
          m.loc = s.loc;
          add_member(c, std::move(m));
        }
        return;
      }
      case py::StmtKind::ann_assign: {
        const auto& target = *s.items[0];
        if (target.kind != py::ExprKind::name) return warn(s.loc, "annotated non-name target is skipped");
        MemberDecl m;
        m.name = target.text;
        m.kind = MemberKind::attribute;
        m.annotation = s.items[1];
        if (s.items.size() > 2) m.value = s.items[2];
        m.loc = s.loc;
        add_member(c, std::move(m));
        return;
      }
      case py::StmtKind::pass:
      case py::StmtKind::import: return;
      case py::StmtKind::expr:
        if (!is_docstring(s)) warn(s.loc, "expression statement in class " + c.name + " is skipped");
        return;
      case py::StmtKind::class_def: return warn(s.loc, "nested class " + s.name + " is skipped");
      case py::StmtKind::other: return warn(s.loc, "'" + s.name + "' statement in class " + c.name + " is skipped");
    }
  }

  MemberDecl read_function(const py::Stmt& s) {
    MemberDecl m;
    m.name = s.name;
    m.kind = MemberKind::method;
    m.returns = s.returns;
    m.loc = s.loc;
    for (const auto& p : s.params)
      m.params.push_back(ParamDecl{p.name, p.annotation, p.kind, p.default_value != nullptr});
    for (const auto& d : s.decorators) {
      std::string n = py::simple_name(*d);
      if (d->kind == py::ExprKind::call) n = py::simple_name(*d->items[0]);
      if (n == "abstractmethod") m.abstract = true;
      else if (n == "classmethod") m.kind = MemberKind::classmethod;
      else if (n == "staticmethod") m.kind = MemberKind::staticmethod;
      else if (n == "property" || n == "cached_property") m.kind = MemberKind::property;
      else if (n != "overload" && n != "override" && n != "final")
        warn(d->loc, "decorator @" + (n.empty() ? std::string("<expression>") : n) + " on " + m.name +
                         " is ignored");
    }
    return m;
  }

  // `self.name = value` (or `self.name: T = value`) inside __init__, looking
  // into nested blocks as well.
  void collect_instance_attributes(ClassInfo& c, const py::Stmt& init, const MemberDecl& sig) {
    if (sig.params.empty()) return;
    const std::string self = sig.params.front().name;
    std::vector<MemberDecl> found;
    auto visit = [&](auto&& rec, const std::vector<py::StmtPtr>& body) -> void {
      for (const auto& st : body) {
        if (st->kind == py::StmtKind::other) {
          rec(rec, st->body);
          continue;
        }
        if (st->kind != py::StmtKind::assign && st->kind != py::StmtKind::ann_assign) continue;
        const std::size_t targets = st->kind == py::StmtKind::assign ? st->items.size() - 1 : 1;
        for (std::size_t i = 0; i < targets; ++i) {
          const auto& t = *st->items[i];
          if (t.kind != py::ExprKind::attribute || t.items[0]->kind != py::ExprKind::name ||
              t.items[0]->text != self)
            continue;
          MemberDecl m;
          m.name = t.text;
          m.kind = MemberKind::attribute;
          m.instance_attribute = true;
          m.loc = st->loc;
          if (st->kind == py::StmtKind::ann_assign) {
            m.annotation = st->items[1];
            if (st->items.size() > 2) m.value = st->items[2];
          } else {
            m.value = st->items.back();
          }
          if (!m.annotation && m.value && m.value->kind == py::ExprKind::name) {
            for (const auto& p : sig.params)
              if (p.name == m.value->text) m.annotation = p.annotation;
          }
          bool seen = std::any_of(found.begin(), found.end(), [&](const MemberDecl& f) { return f.name == m.name; });
          if (!seen) found.push_back(std::move(m));
        }
      }
    };
    visit(visit, init.body);
    for (auto& m : found)
      if (!c.find_member(m.name)) c.members.push_back(std::move(m));
  }

  ModuleInfo& out_;
};

}  // namespace detail

/// Parses a module and extracts classes, functions, variables, type
/// variables and ABC registrations. Throws SyntaxError on malformed input.
inline ModuleInfo parse_module(std::string_view source, std::string path = "") {
  auto parsed = py::parse_python(source, path);
  ModuleInfo info;
  info.path = std::move(path);
  info.warnings = std::move(parsed.warnings);
  detail::ModuleReader(info).read(parsed.module);
  return info;
}

}  // namespace pyts

#endif
