#ifndef PYTS_ELABORATE_HPP
#define PYTS_ELABORATE_HPP

// From the surface class model to existential types.
//
//   annotations   int -> IntET, list[int] -> ListET[IntET], A | B -> sum,
//                 Callable[[A, B], R] -> A x B -> R, tuple[T, ...] -> variadic
//   methods       Self x P1 x ... -> R, with __init__ returning Self
//   classes       ∀params.∃Self<:Bound.{members, ...}
//
// The bound comes from the first base. Members of the remaining bases are
// merged into the record in MRO order where the first base's chain does not
// already supply them.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pyts/class_info.hpp"
#include "pyts/members.hpp"
#include "pyts/mro.hpp"
#include "pyts/prelude.hpp"
#include "pyts/python/parser.hpp"

namespace pyts {

/// What an annotation needs to know about a class name.
struct ClassSymbol {
  std::string et_name;
  std::size_t arity = 0;
};

using ClassLookup = std::function<std::optional<ClassSymbol>(std::string_view)>;

struct AnnotationContext {
  ClassLookup lookup_class;
  /// Type variables bound by the enclosing class.
  VarSet scope;
  /// TypeVars declared in the module.
  std::set<std::string> type_vars;
  /// Module TypeVars may appear free (generic functions and methods).
  bool allow_free_type_vars = false;
};

namespace detail {

inline std::size_t builtin_arity(std::string_view et) {
  if (et == "ListET" || et == "SetET" || et == "FrozensetET") return 1;
  if (et == "DictET") return 2;
  return 0;
}

inline std::string typing_alias(std::string_view n) {
  static const std::map<std::string, std::string, std::less<>> aliases = {
      {"List", "list"}, {"Dict", "dict"}, {"Set", "set"}, {"FrozenSet", "frozenset"},
      {"Tuple", "tuple"}, {"Type", "type"}, {"Text", "str"},
  };
  auto it = aliases.find(n);
  return it == aliases.end() ? std::string(n) : it->second;
}

inline std::vector<py::ExprPtr> index_items(const py::Expr& subscript) {
  const auto& index = subscript.items[1];
  if (index->kind == py::ExprKind::tuple) return index->items;
  return {index};
}

inline std::vector<TypeExpr> any_args(std::size_t n) { return std::vector<TypeExpr>(n, make_any()); }

inline TypeExpr literal_type(const py::Expr& e) {
  switch (e.constant) {
    case py::ConstKind::none_: return make_atom("NoneTypeET");
    case py::ConstKind::boolean: return make_atom("BoolET");
    case py::ConstKind::integer: return make_atom("IntET");
    case py::ConstKind::floating: return make_atom("FloatET");
    case py::ConstKind::imaginary: return make_atom("ComplexET");
    case py::ConstKind::string: return make_atom("StrET");
    case py::ConstKind::bytes: return make_atom("BytesET");
    case py::ConstKind::ellipsis: return make_any();
  }
  return make_any();
}

class AnnotationReader {
 public:
  explicit AnnotationReader(const AnnotationContext& ctx) : ctx_(ctx) {}

  TypeExpr read(const py::Expr& e) {
    switch (e.kind) {
      case py::ExprKind::name:
      case py::ExprKind::attribute: return named(e, e.text);
      case py::ExprKind::subscript: return subscript(e);
      case py::ExprKind::constant:
        if (e.constant == py::ConstKind::none_) return make_atom("NoneTypeET");
        if (e.constant == py::ConstKind::string) return forward_reference(e);
        break;
      case py::ExprKind::binop:
        if (e.text == "|") return make_union({read(*e.items[0]), read(*e.items[1])});
        break;
      default: break;
    }
    throw Error(ErrorCode::unknown_annotation, e.loc, "unsupported annotation form");
  }

 private:
  TypeExpr forward_reference(const py::Expr& e) {
    py::ParseResult parsed;
    try {
      parsed = py::parse_python(e.text, e.loc.file);
    } catch (const Error&) {
      throw Error(ErrorCode::unknown_annotation, e.loc, "malformed string annotation '" + e.text + "'");
    }
    const auto& body = parsed.module.body;
    if (body.size() != 1 || body[0]->kind != py::StmtKind::expr)
      throw Error(ErrorCode::unknown_annotation, e.loc, "malformed string annotation '" + e.text + "'");
    return read(*body[0]->items[0]);
  }

  TypeExpr named(const py::Expr& e, const std::string& raw) {
    if (ctx_.scope.count(raw)) return make_var(raw);
    const std::string n = typing_alias(raw);
    if (n == "Any") return make_any();
    if (n == "None") return make_atom("NoneTypeET");
    if (n == "Never" || n == "NoReturn") return make_atom("BottomET");
    if (ctx_.type_vars.count(n)) {
      if (ctx_.allow_free_type_vars) return make_var(n);
      throw Error(ErrorCode::misused_type_var, e.loc, "type variable " + n + " is not in scope here");
    }
    if (auto sym = ctx_.lookup_class ? ctx_.lookup_class(n) : std::nullopt) {
      if (sym->et_name == "TupleET") return make_variadic("TupleET", make_any());
      if (sym->arity == 0) return make_atom(sym->et_name);
      return make_apply(sym->et_name, any_args(sym->arity));
    }
    if (auto et = builtin_et_name(n); !et.empty()) {
      if (et == "TupleET") return make_variadic("TupleET", make_any());
      if (auto k = builtin_arity(et)) return make_apply(et, any_args(k));
      return make_atom(et);
    }
    if (n == "Optional" || n == "Union" || n == "Callable" || n == "ClassVar" || n == "Final")
      throw Error(ErrorCode::unknown_annotation, e.loc, n + " needs type arguments");
    throw Error(ErrorCode::unknown_annotation, e.loc, "unknown name '" + n + "' in annotation");
  }

  TypeExpr subscript(const py::Expr& e) {
    const auto& head = *e.items[0];
    const std::string n = typing_alias(py::simple_name(head));
    if (n.empty()) throw Error(ErrorCode::unknown_annotation, e.loc, "unsupported annotation form");
    auto items = index_items(e);
    if (n == "Optional") {
      if (items.size() != 1) throw Error(ErrorCode::arity_mismatch, e.loc, "Optional takes one argument");
      return make_union({read(*items[0]), make_atom("NoneTypeET")});
    }
    if (n == "Union") {
      std::vector<TypeExpr> alts;
      for (const auto& i : items) alts.push_back(read(*i));
      return make_union(alts);
    }
    if (n == "ClassVar" || n == "Final" || n == "Annotated") return read(*items[0]);
    if (n == "type") return make_atom("TypeET");
    if (n == "Literal") {
      std::vector<TypeExpr> alts;
      for (const auto& i : items) {
        if (i->kind != py::ExprKind::constant)
          throw Error(ErrorCode::unknown_annotation, i->loc, "Literal takes constants only");
        alts.push_back(literal_type(*i));
      }
      return make_union(alts);
    }
    if (n == "Callable") return callable(e, items);
    if (n == "tuple") return tuple(e, items);
    if (n == "Protocol" || n == "Generic")
      throw Error(ErrorCode::unknown_annotation, e.loc, n + " is not a valid annotation");

    std::vector<TypeExpr> args;
    for (const auto& i : items) args.push_back(read(*i));
    std::string et;
    std::size_t arity = 0;
    if (auto sym = ctx_.lookup_class ? ctx_.lookup_class(n) : std::nullopt) {
      et = sym->et_name;
      arity = sym->arity;
    } else if (auto b = builtin_et_name(n); !b.empty()) {
      et = b;
      arity = builtin_arity(b);
    } else {
      throw Error(ErrorCode::unknown_annotation, e.loc, "unknown name '" + n + "' in annotation");
    }
    if (arity == 0) throw Error(ErrorCode::not_generic, e.loc, n + " takes no type arguments");
    if (args.size() != arity) {
      throw Error(ErrorCode::arity_mismatch, e.loc, n + " expects " + std::to_string(arity) +
                                                  " type argument(s), got " + std::to_string(args.size()));
    }
    return make_apply(et, std::move(args));
  }

  TypeExpr callable(const py::Expr& e, const std::vector<py::ExprPtr>& items) {
    if (items.size() != 2) throw Error(ErrorCode::arity_mismatch, e.loc, "Callable takes [params] and a return type");
    TypeExpr ret = read(*items[1]);
    const auto& params = *items[0];
    if (params.kind == py::ExprKind::constant && params.constant == py::ConstKind::ellipsis)
      return make_function(make_any(), ret);
    if (params.kind != py::ExprKind::list)
      throw Error(ErrorCode::unknown_annotation, params.loc, "Callable parameters must be a list");
    std::vector<TypeExpr> domain;
    for (const auto& p : params.items) domain.push_back(read(*p));
    return make_function(make_domain(std::move(domain)), ret);
  }

  TypeExpr tuple(const py::Expr& e, const std::vector<py::ExprPtr>& items) {
    if (items.size() == 2 && items[1]->kind == py::ExprKind::constant &&
        items[1]->constant == py::ConstKind::ellipsis)
      return make_variadic("TupleET", read(*items[0]));
    if (items.size() == 1 && items[0]->kind == py::ExprKind::tuple && items[0]->items.empty())
      return make_apply("TupleET", {});
    std::vector<TypeExpr> args;
    for (const auto& i : items) {
      if (i->kind == py::ExprKind::constant && i->constant == py::ConstKind::ellipsis)
        throw Error(ErrorCode::unknown_annotation, e.loc, "'...' must follow a single tuple element type");
      args.push_back(read(*i));
    }
    return make_apply("TupleET", std::move(args));
  }

  const AnnotationContext& ctx_;
};

}  // namespace detail

inline TypeExpr annotation_to_type(const py::Expr& annotation, const AnnotationContext& ctx) {
  return detail::AnnotationReader(ctx).read(annotation);
}

// ---- values ---------------------------------------------------------------

struct ValueContext {
  ClassLookup lookup_class;
  /// Types of variables and functions already known.
  std::function<std::optional<TypeExpr>(std::string_view)> lookup_value;
  /// Definitions of classes, for inferring type arguments of constructor
  /// calls. May be null.
  const TypeEnv* env = nullptr;
};

namespace detail {

/// Binds variables of `vars` occurring in `pattern` to the matching parts
/// of `actual`. First binding wins.
inline void unify(const TypeExpr& pattern, const TypeExpr& actual, const VarSet& vars, Substitution& out) {
  if (auto v = pattern.as<node::Var>()) {
    if (vars.count(v->name) && !out.count(v->name) && !actual.is<node::Any>()) out.emplace(v->name, actual);
    return;
  }
  if (auto p = pattern.as<node::Apply>()) {
    auto a = actual.as<node::Apply>();
    if (!a || a->constructor != p->constructor || a->args.size() != p->args.size()) return;
    for (std::size_t i = 0; i < p->args.size(); ++i) unify(p->args[i], a->args[i], vars, out);
    return;
  }
  if (auto p = pattern.as<node::Product>()) {
    auto a = actual.as<node::Product>();
    if (!a || a->factors.size() != p->factors.size()) return;
    for (std::size_t i = 0; i < p->factors.size(); ++i) unify(p->factors[i], a->factors[i], vars, out);
    return;
  }
  if (auto p = pattern.as<node::Function>()) {
    if (auto a = actual.as<node::Function>()) {
      unify(p->domain, a->domain, vars, out);
      unify(p->codomain, a->codomain, vars, out);
    }
  }
}

class ValueTyper {
 public:
  explicit ValueTyper(const ValueContext& ctx) : ctx_(ctx) {}

  TypeExpr type_of(const py::Expr& e) {
    switch (e.kind) {
      case py::ExprKind::constant: return literal_type(e);
      case py::ExprKind::list: return container("ListET", e.items);
      case py::ExprKind::set: return container("SetET", e.items);
      case py::ExprKind::tuple: {
        std::vector<TypeExpr> elems;
        for (const auto& i : e.items) {
          if (i->kind == py::ExprKind::starred) return make_variadic("TupleET", make_any());
          elems.push_back(type_of(*i));
        }
        return make_apply("TupleET", std::move(elems));
      }
      case py::ExprKind::dict: {
        std::vector<py::ExprPtr> keys, values;
        for (std::size_t i = 0; i + 1 < e.items.size(); i += 2) {
          keys.push_back(e.items[i]);
          values.push_back(e.items[i + 1]);
        }
        return make_apply("DictET", {element_type(keys), element_type(values)});
      }
      case py::ExprKind::name: return name(e.text);
      case py::ExprKind::call: return call(e);
      case py::ExprKind::lambda: return lambda(e, std::nullopt);
      case py::ExprKind::unary:
        if (e.text == "not") return make_atom("BoolET");
        return numeric(type_of(*e.items[0]));
      default: return make_any();
    }
  }

  /// A lambda; with `self` set, the first parameter is the receiver.
  TypeExpr lambda(const py::Expr& e, const std::optional<TypeExpr>& self) {
    std::vector<TypeExpr> domain;
    for (std::size_t i = 0; i < e.params.size(); ++i) {
      const auto& p = e.params[i];
      if (i == 0 && self) domain.push_back(*self);
      else if (p.kind == py::ParamKind::var_positional) domain.push_back(make_variadic("TupleET", make_any()));
      else if (p.kind == py::ParamKind::var_keyword) domain.push_back(make_apply("DictET", {make_atom("StrET"), make_any()}));
      else domain.push_back(make_any());
    }
    const auto& body = *e.items[0];
    TypeExpr ret = body.kind == py::ExprKind::constant ? literal_type(body) : make_any();
    return make_function(make_domain(std::move(domain)), ret);
  }

 private:
  static TypeExpr numeric(TypeExpr t) {
    for (const char* n : {"BoolET", "IntET"})
      if (is_atom(t, n)) return make_atom("IntET");
    for (const char* n : {"FloatET", "ComplexET"})
      if (is_atom(t, n)) return t;
    return make_any();
  }

  TypeExpr element_type(const std::vector<py::ExprPtr>& items) {
    std::vector<TypeExpr> ts;
    for (const auto& i : items) {
      if (i->kind == py::ExprKind::starred || (i->kind == py::ExprKind::other && i->text == "**")) return make_any();
      ts.push_back(type_of(*i));
    }
    if (ts.empty()) return make_any();
    if (std::any_of(ts.begin(), ts.end(), [](const TypeExpr& t) { return t.is<node::Any>(); })) return make_any();
    return make_union(ts);
  }

  TypeExpr container(const char* et, const std::vector<py::ExprPtr>& items) {
    return make_apply(et, {element_type(items)});
  }

  TypeExpr name(const std::string& n) {
    if (ctx_.lookup_value) {
      if (auto t = ctx_.lookup_value(n)) return *t;
    }
    // A class named as a value is a class-as-value: an element of TypeET.
    if (ctx_.lookup_class && ctx_.lookup_class(n)) return make_atom("TypeET");
    if (!builtin_et_name(n).empty()) return make_atom("TypeET");
    return make_any();
  }

  TypeExpr call(const py::Expr& e) {
    const auto& callee = *e.items[0];
    std::vector<TypeExpr> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(type_of(*e.items[i]));
    if (callee.kind != py::ExprKind::name) return make_any();
    const std::string& n = callee.text;
    if (n == "type") return args.size() == 1 ? make_any() : make_atom("TypeET");
    if (ctx_.lookup_value) {
      if (auto t = ctx_.lookup_value(n)) {
        TypeExpr f = *t;
        if (auto q = f.as<node::Forall>()) f = q->body;
        if (auto fn = f.as<node::Function>()) return fn->codomain;
        return make_any();
      }
    }
    std::optional<ClassSymbol> sym = ctx_.lookup_class ? ctx_.lookup_class(n) : std::nullopt;
    if (!sym) {
      if (auto b = builtin_et_name(n); !b.empty()) sym = ClassSymbol{b, builtin_arity(b)};
    }
    if (!sym) return make_any();
    return construct(*sym, args);
  }

  // The instance type of a constructor call, inferring type arguments from
  // __init__ or, for container subclasses, from the bound.
  TypeExpr construct(const ClassSymbol& sym, const std::vector<TypeExpr>& args) {
    if (sym.et_name == "TupleET") {
      if (args.size() == 1 && args[0].is<node::Apply>() && *head_name(args[0]) == "TupleET") return args[0];
      return make_variadic("TupleET", make_any());
    }
    if (sym.arity == 0) return make_atom(sym.et_name);
    DefinitionPtr def = ctx_.env ? ctx_.env->find(sym.et_name) : nullptr;
    if (!def || def->params.size() != sym.arity) {
      // Built-in containers copy their argument's element types.
      if (args.size() == 1 && args[0].is<node::Apply>()) {
        auto a = args[0].as<node::Apply>();
        if (!a->variadic && a->args.size() == sym.arity) return make_apply(sym.et_name, a->args);
        if (a->variadic && sym.arity == 1) return make_apply(sym.et_name, a->args);
      }
      return make_apply(sym.et_name, any_args(sym.arity));
    }
    VarSet vars(def->params.begin(), def->params.end());
    Substitution found;
    if (auto init = def->record().find("__init__")) {
      if (auto fn = init->as<node::Function>()) {
        std::vector<TypeExpr> declared;
        if (auto p = fn->domain.as<node::Product>()) declared.assign(p->factors.begin() + 1, p->factors.end());
        for (std::size_t i = 0; i < declared.size() && i < args.size(); ++i) unify(declared[i], args[i], vars, found);
      }
    }
    if (def->bound && args.size() == 1) {
      auto b = def->bound->as<node::Apply>();
      auto a = args[0].as<node::Apply>();
      if (b && a && a->constructor == b->constructor) unify(*def->bound, args[0], vars, found);
    }
    std::vector<TypeExpr> out;
    for (const auto& p : def->params) out.push_back(found.count(p) ? found.at(p) : make_any());
    return make_apply(sym.et_name, std::move(out));
  }

  const ValueContext& ctx_;
};

}  // namespace detail

inline TypeExpr type_of_value(const py::Expr& value, const ValueContext& ctx) {
  return detail::ValueTyper(ctx).type_of(value);
}

// ---- functions and members ------------------------------------------------

/// A function or method signature with named parameters.
struct MemberSig {
  std::string name;
  std::vector<std::pair<std::string, TypeExpr>> params;
  TypeExpr return_type;
  bool is_method = false;
};

namespace detail {

inline TypeExpr param_type(const ParamDecl& p, const AnnotationContext& ctx) {
  std::optional<TypeExpr> ann;
  if (p.annotation) ann = annotation_to_type(*p.annotation, ctx);
  switch (p.kind) {
    case py::ParamKind::var_positional: return make_variadic("TupleET", ann.value_or(make_atom("ObjectET")));
    case py::ParamKind::var_keyword: return make_apply("DictET", {make_atom("StrET"), ann.value_or(make_atom("ObjectET"))});
    default: return ann.value_or(make_any());
  }
}

/// Wraps the free module TypeVars of a function type in a ∀.
inline TypeExpr generalize(TypeExpr t, const std::set<std::string>& type_vars, const VarSet& class_scope) {
  std::vector<std::string> vars;
  for (const auto& v : free_vars(t))
    if (type_vars.count(v) && !class_scope.count(v)) vars.push_back(v);
  return vars.empty() ? t : make_forall(std::move(vars), std::move(t));
}

}  // namespace detail

/// Signature of a function or method. `self` is the receiver type for
/// instance methods; class methods receive TypeET.
inline MemberSig member_signature(const MemberDecl& fn, const AnnotationContext& ctx,
                                  const std::optional<TypeExpr>& self = std::nullopt) {
  AnnotationContext local = ctx;
  local.allow_free_type_vars = true;
  MemberSig sig;
  sig.name = fn.name;
  const bool receiver = !fn.params.empty() && (fn.kind == MemberKind::method || fn.kind == MemberKind::classmethod ||
                                               (fn.kind == MemberKind::staticmethod && fn.name == "__new__"));
  sig.is_method = receiver && fn.kind == MemberKind::method && self;
  for (std::size_t i = 0; i < fn.params.size(); ++i) {
    const auto& p = fn.params[i];
    TypeExpr t;
    if (i == 0 && receiver) {
      t = fn.kind == MemberKind::method && self ? *self : make_atom("TypeET");
    } else {
      t = detail::param_type(p, local);
    }
    sig.params.emplace_back(p.name, t);
  }
  if (fn.name == "__init__" && self) sig.return_type = *self;
  else if (fn.returns) sig.return_type = annotation_to_type(*fn.returns, local);
  else sig.return_type = make_any();
  return sig;
}

/// The function type of a signature, quantified over the module TypeVars
/// it mentions that the class does not bind.
inline TypeExpr signature_type(const MemberSig& sig, const AnnotationContext& ctx) {
  std::vector<TypeExpr> domain;
  for (const auto& [n, t] : sig.params) domain.push_back(t);
  return detail::generalize(make_function(make_domain(std::move(domain)), sig.return_type), ctx.type_vars,
                            ctx.scope);
}

/// Function(params..., return) for a module-level function; unannotated
/// positions are Any, *args and **kwargs become tuple and dict factors.
inline TypeExpr elaborate_function(const MemberDecl& fn, const AnnotationContext& ctx) {
  return signature_type(member_signature(fn, ctx), ctx);
}

/// The type of one class member, with `self` as the receiver.
inline TypeExpr elaborate_member(const MemberDecl& m, const AnnotationContext& ctx, const ValueContext& values,
                                 const TypeExpr& self) {
  switch (m.kind) {
    case MemberKind::method:
    case MemberKind::classmethod:
    case MemberKind::staticmethod:
    case MemberKind::function: return signature_type(member_signature(m, ctx, self), ctx);
    case MemberKind::property:
      if (!m.returns) return make_any();
      return annotation_to_type(*m.returns, ctx);
    case MemberKind::attribute:
      if (m.annotation) return annotation_to_type(*m.annotation, ctx);
      if (!m.value) return make_any();
      if (m.value->kind == py::ExprKind::lambda) {
        if (m.instance_attribute) return detail::ValueTyper(values).lambda(*m.value, std::nullopt);
        return detail::ValueTyper(values).lambda(*m.value, self);
      }
      if (m.instance_attribute && m.value->kind != py::ExprKind::constant) return make_any();
      return type_of_value(*m.value, values);
  }
  return make_any();
}

// ---- classes --------------------------------------------------------------

namespace detail {

inline const std::set<std::string>& interface_exempt_members() {
  static const std::set<std::string> names = {
      "__init__", "__new__", "__subclasshook__", "__slots__", "__class_getitem__", "__init_subclass__",
      "__module__", "__doc__", "__dict__", "__weakref__", "__annotations__", "__parameters__",
      "__abstractmethods__", "__protocol_attrs__",
  };
  return names;
}

/// Self-variable name from a class name: its capitals (`SupportsAbs` ->
/// `SA`), or its first letter upper-cased.
inline std::string self_var_name(const std::string& cls) {
  std::string out;
  for (char c : cls)
    if (std::isupper(static_cast<unsigned char>(c))) out += c;
  if (out.empty()) {
    for (char c : cls) {
      if (std::isalpha(static_cast<unsigned char>(c))) {
        out = std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        break;
      }
    }
  }
  return out.empty() ? "X" : out;
}

inline void collect_atoms(const TypeExpr& t, VarSet& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Atom>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<N, node::Apply>) {
          out.insert(n.constructor);
          for (const auto& a : n.args) collect_atoms(a, out);
        } else if constexpr (std::is_same_v<N, node::Record>) {
          for (const auto& f : n.fields) collect_atoms(f.type, out);
        } else if constexpr (std::is_same_v<N, node::Product>) {
          for (const auto& a : n.factors) collect_atoms(a, out);
        } else if constexpr (std::is_same_v<N, node::Sum>) {
          for (const auto& a : n.alternatives) collect_atoms(a, out);
        } else if constexpr (std::is_same_v<N, node::Function>) {
          collect_atoms(n.domain, out);
          collect_atoms(n.codomain, out);
        } else if constexpr (std::is_same_v<N, node::Forall>) {
          collect_atoms(n.body, out);
        } else if constexpr (std::is_same_v<N, node::Exists>) {
          if (n.bound) collect_atoms(*n.bound, out);
          collect_atoms(n.body, out);
        }
      },
      t.node().value);
}

}  // namespace detail

/// Type parameters of a class: those of its Generic[...]/Protocol[...]
/// bases, else the TypeVars in its other bases' arguments, else (for a
/// bare generic first base such as `list`) the parameters of that base.
inline std::vector<std::string> effective_params(const ClassInfo& cls, const std::set<std::string>& module_type_vars,
                                                 const std::function<std::vector<std::string>(std::string_view)>&
                                                     base_params) {
  if (!cls.type_params.empty()) return cls.type_params;
  std::vector<std::string> out;
  auto visit = [&](auto&& rec, const py::Expr& e) -> void {
    if (e.kind == py::ExprKind::name && module_type_vars.count(e.text)) {
      if (std::find(out.begin(), out.end(), e.text) == out.end()) out.push_back(e.text);
      return;
    }
    for (const auto& i : e.items)
      if (i) rec(rec, *i);
  };
  for (const auto& b : cls.bases)
    for (const auto& a : b.args) visit(visit, *a);
  if (!out.empty()) return out;
  if (!cls.bases.empty() && cls.bases.front().args.empty()) return base_params(cls.bases.front().name);
  return {};
}

struct ClassContext {
  /// Class names visible to annotations (program classes and built-ins).
  ClassLookup lookup_class;
  std::set<std::string> module_type_vars;
  /// Type parameters decided for this class (see effective_params).
  std::vector<std::string> params;
  ValueContext values;
};

/// Builds the definition of `cls`. Base definitions must already be in
/// `env`; the result is not added.
inline Definition build_class_definition(const ClassInfo& cls, const TypeEnv& env, const ClassRegistry& registry,
                                         const ClassContext& cc) {
  Definition def;
  def.name = et_name_for_class(cls.name);
  def.class_name = cls.name;
  def.params = cc.params;
  def.interface = cls.kind == ClassKind::protocol ? InterfaceKind::protocol
                  : cls.kind == ClassKind::abc    ? InterfaceKind::abc
                                                  : InterfaceKind::none;

  AnnotationContext ann;
  ann.lookup_class = cc.lookup_class;
  ann.scope = VarSet(cc.params.begin(), cc.params.end());
  ann.type_vars = cc.module_type_vars;

  auto mro = c3_linearize(cls, registry);

  // Bases as types over the class parameters.
  for (const auto& b : cls.bases) {
    std::vector<TypeExpr> args;
    for (const auto& a : b.args) args.push_back(annotation_to_type(*a, ann));
    if (is_protocol_base(b.name)) {
      std::string family = "ProtocolET" + std::to_string(args.size());
      if (args.empty()) def.base_types.push_back(make_atom(family));
      else def.base_types.push_back(make_apply(family, std::move(args)));
      continue;
    }
    if (is_generic_base(b.name)) {
      if (args.empty())
        throw Error(ErrorCode::invalid_arity, b.loc, "Generic needs at least one type parameter");
      std::string family = "GenericET" + std::to_string(args.size());
      def.base_types.push_back(make_apply(family, std::move(args)));
      continue;
    }
    if (b.name == "ABC" || b.name == "object") {
      def.base_types.push_back(make_atom("ObjectET"));
      continue;
    }
    const std::string et = et_name_for_class(b.name);
    auto base_def = env.find(et);
    if (!base_def) throw Error(ErrorCode::unknown_base, b.loc, "base " + b.name + " has no type");
    if (base_def->variadic_params) {
      if (args.empty()) def.base_types.push_back(make_atom(et));
      else def.base_types.push_back(make_apply(et, std::move(args)));
      continue;
    }
    if (base_def->params.empty()) {
      if (!args.empty()) throw Error(ErrorCode::not_generic, b.loc, b.name + " is not generic");
      def.base_types.push_back(make_atom(et));
      continue;
    }
    if (args.empty()) {
      // A bare generic base: reuse its parameters when the class adopted
      // them, otherwise leave the arguments open.
      bool adopted = &b == &cls.bases.front() && cc.params == base_def->params;
      for (std::size_t i = 0; i < base_def->params.size(); ++i)
        args.push_back(adopted ? make_var(base_def->params[i]) : make_any());
    }
    if (args.size() != base_def->params.size()) {
      throw Error(ErrorCode::arity_mismatch, b.loc, b.name + " expects " +
                                                 std::to_string(base_def->params.size()) + " type argument(s)");
    }
    def.base_types.push_back(make_apply(et, std::move(args)));
  }
  def.bound = def.base_types.empty() ? make_atom("ObjectET") : def.base_types.front();
  if (auto h = head_name(*def.bound))
    if (auto bd = env.find(*h)) def.is_meta = bd->is_meta;

  // Own members, over a placeholder receiver renamed once the final
  // self-variable is known.
  const std::string placeholder = fresh_name("Self", VarSet(cc.params.begin(), cc.params.end()));
  const TypeExpr self = make_var(placeholder);
  std::vector<node::Field> fields;
  std::set<std::string> taken;
  for (const auto& m : cls.members) {
    fields.push_back({m.name, elaborate_member(m, ann, cc.values, self)});
    taken.insert(m.name);
    def.declared_members.push_back(m.name);
  }

  // Members of classes outside the first base's MRO, first definition
  // along the MRO winning.
  std::set<std::string> first_line;
  if (!cls.bases.empty()) {
    for (const auto& n : c3_linearize(cls.bases.front().name, registry)) first_line.insert(n);
  } else {
    first_line.insert("object");
  }
  std::map<std::string, TypeExpr> args_of;  // ET-name -> applied type over our params
  for (const auto& bt : def.base_types)
    if (auto h = head_name(bt)) args_of.emplace(*h, bt);
  for (std::size_t i = 1; i < mro.size(); ++i) {
    const std::string et = et_name_for_class(mro[i]);
    auto kdef = env.find(et);
    if (!kdef) continue;
    auto it = args_of.find(et);
    TypeExpr applied = it != args_of.end() ? it->second : make_atom(et);
    Substitution s;
    try {
      s = use_site(*kdef, applied, self);
    } catch (const Error&) {
      s = use_site(*kdef, make_atom(et), self);
    }
    for (const auto& bt : kdef->base_types)
      if (auto h = head_name(bt)) args_of.emplace(*h, substitute(bt, s));
    const bool own_line = first_line.count(mro[i]) != 0;
    auto own = [&](const std::string& name) {
      return kdef->declared_members.empty() ||
             std::find(kdef->declared_members.begin(), kdef->declared_members.end(), name) !=
                 kdef->declared_members.end();
    };
    for (const auto& f : kdef->record().fields) {
      if (!own(f.name) || !taken.insert(f.name).second) continue;
      if (!own_line) fields.push_back({f.name, substitute(f.type, s)});
    }
  }

  TypeExpr record = make_record(std::move(fields), true);

  VarSet avoid(cc.params.begin(), cc.params.end());
  detail::collect_atoms(record, avoid);
  detail::collect_atoms(*def.bound, avoid);
  avoid.insert(placeholder);
  def.self_var = fresh_name(detail::self_var_name(cls.name), avoid);
  def.signature = rename_var(record, placeholder, def.self_var);

  if (def.interface != InterfaceKind::none) {
    const auto& exempt = detail::interface_exempt_members();
    std::vector<std::string> abstract;
    for (const auto& m : cls.members)
      if (m.abstract) abstract.push_back(m.name);
    if (def.interface == InterfaceKind::abc && !abstract.empty()) {
      def.required_members = abstract;
    } else {
      for (const auto& f : def.record().fields)
        if (!exempt.count(f.name)) def.required_members.push_back(f.name);
      // Keep a marker so an empty protocol still requires nothing rather
      // than "every field".
      if (def.required_members.empty()) def.required_members.push_back("");
    }
  }
  return def;
}

/// Context for elaborating a class against an environment alone: class
/// names resolve when their ET-name is defined there.
inline ClassContext context_from_env(const ClassInfo& cls, const TypeEnv& env,
                                     const std::set<std::string>& module_type_vars = {}) {
  ClassContext cc;
  auto lookup = [&env, &cls](std::string_view n) -> std::optional<ClassSymbol> {
    std::string et = et_name_for_class(n);
    if (n == cls.name) return ClassSymbol{et, 0};
    if (auto d = env.find(et)) return ClassSymbol{et, d->params.size()};
    return std::nullopt;
  };
  cc.lookup_class = lookup;
  cc.module_type_vars = module_type_vars;
  cc.params = effective_params(cls, module_type_vars, [&env](std::string_view base) {
    if (auto d = env.find(et_name_for_class(base))) return d->params;
    return std::vector<std::string>{};
  });
  const std::size_t arity = cc.params.size();
  const std::string self_et = et_name_for_class(cls.name);
  cc.lookup_class = [lookup, arity, self_et, name = cls.name](std::string_view n) -> std::optional<ClassSymbol> {
    if (n == name) return ClassSymbol{self_et, arity};
    return lookup(n);
  };
  cc.values.lookup_class = cc.lookup_class;
  cc.values.env = &env;
  return cc;
}

/// Elaborates `cls` and adds its definition to `env`.
inline DefinitionPtr elaborate_class(const ClassInfo& cls, TypeEnv& env, const ClassRegistry& registry,
                                     const std::set<std::string>& module_type_vars = {}) {
  Definition def = build_class_definition(cls, env, registry, context_from_env(cls, env, module_type_vars));
  std::string name = def.name;
  env.add(std::move(def));
  return env.lookup(name);
}

}  // namespace pyts

#endif
