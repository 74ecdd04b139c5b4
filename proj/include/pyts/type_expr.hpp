#ifndef PYTS_TYPE_EXPR_HPP
#define PYTS_TYPE_EXPR_HPP

// Type expressions of the existential-type model of Python classes.
//
// A TypeExpr is an immutable, reference-counted tree. Copies are cheap and
// share structure, so values can be passed around freely and read from
// several threads at once.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pyts/error.hpp"

namespace pyts {

enum class TypeTag { atom, var, apply, record, product, sum, function, forall, exists, any };

struct TypeNode;

class TypeExpr {
 public:
  /// Default-constructed expressions are the gradual wildcard `Any`.
  TypeExpr();
  explicit TypeExpr(std::shared_ptr<const TypeNode> node) : node_(std::move(node)) {}

  const TypeNode& node() const { return *node_; }
  TypeTag tag() const;

  template <class T>
  const T* as() const;

  template <class T>
  bool is() const { return as<T>() != nullptr; }

  bool same_node(const TypeExpr& other) const { return node_ == other.node_; }

 private:
  std::shared_ptr<const TypeNode> node_;
};

namespace node {

struct Atom {
  std::string name;
};

struct Var {
  std::string name;
};

/// Generic application `Name[A, B]`. With `variadic` set, exactly one
/// element type is stored and the application reads `Name[A, ...]`.
struct Apply {
  std::string constructor;
  std::vector<TypeExpr> args;
  bool variadic = false;
};

struct Field {
  std::string name;
  TypeExpr type;
};

/// Fields are kept sorted by name. An open record admits members that are
/// present but not listed.
struct Record {
  std::vector<Field> fields;
  bool open = true;

  const TypeExpr* find(std::string_view field) const {
    auto it = std::lower_bound(fields.begin(), fields.end(), field,
                               [](const Field& f, std::string_view n) { return f.name < n; });
    if (it != fields.end() && it->name == field) return &it->type;
    return nullptr;
  }
};

struct Product {
  std::vector<TypeExpr> factors;
};

struct Sum {
  std::vector<TypeExpr> alternatives;
};

struct Function {
  TypeExpr domain;
  TypeExpr codomain;
};

struct Forall {
  std::vector<std::string> vars;
  TypeExpr body;
};

/// `∃var<:bound.body`. The variable scopes over both the bound and the body,
/// which admits F-bounded forms such as `∃P<:GenericET1[P]. ...`.
struct Exists {
  std::string var;
  std::optional<TypeExpr> bound;
  TypeExpr body;
};

struct Any {};

}  // namespace node

struct TypeNode {
  std::variant<node::Atom, node::Var, node::Apply, node::Record, node::Product, node::Sum,
               node::Function, node::Forall, node::Exists, node::Any>
      value;
};

inline TypeExpr::TypeExpr() {
  static const auto any_node = std::make_shared<const TypeNode>(TypeNode{node::Any{}});
  node_ = any_node;
}

inline TypeTag TypeExpr::tag() const { return static_cast<TypeTag>(node_->value.index()); }

template <class T>
const T* TypeExpr::as() const {
  return std::get_if<T>(&node_->value);
}

// ---- construction ---------------------------------------------------------

namespace detail {
template <class T>
TypeExpr wrap(T value) {
  return TypeExpr(std::make_shared<const TypeNode>(TypeNode{std::move(value)}));
}
}  // namespace detail

inline TypeExpr make_atom(std::string name) { return detail::wrap(node::Atom{std::move(name)}); }

inline TypeExpr make_var(std::string name) { return detail::wrap(node::Var{std::move(name)}); }

inline TypeExpr make_any() { return TypeExpr(); }

inline TypeExpr make_apply(std::string constructor, std::vector<TypeExpr> args) {
  return detail::wrap(node::Apply{std::move(constructor), std::move(args), false});
}

inline TypeExpr make_variadic(std::string constructor, TypeExpr element) {
  return detail::wrap(node::Apply{std::move(constructor), {std::move(element)}, true});
}

inline TypeExpr make_record(std::vector<node::Field> fields, bool open = true) {
  std::sort(fields.begin(), fields.end(),
            [](const node::Field& a, const node::Field& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < fields.size(); ++i) {
    if (fields[i].name == fields[i - 1].name)
      throw Error(ErrorCode::invalid_type, "duplicate record member '" + fields[i].name + "'");
  }
  return detail::wrap(node::Record{std::move(fields), open});
}

inline TypeExpr make_product(std::vector<TypeExpr> factors) {
  if (factors.size() < 2) throw Error(ErrorCode::invalid_type, "product needs at least two factors");
  return detail::wrap(node::Product{std::move(factors)});
}

inline TypeExpr make_sum(std::vector<TypeExpr> alternatives) {
  if (alternatives.size() < 2)
    throw Error(ErrorCode::invalid_type, "sum needs at least two alternatives");
  return detail::wrap(node::Sum{std::move(alternatives)});
}

inline TypeExpr make_function(TypeExpr domain, TypeExpr codomain) {
  return detail::wrap(node::Function{std::move(domain), std::move(codomain)});
}

inline TypeExpr make_forall(std::vector<std::string> vars, TypeExpr body) {
  if (vars.empty()) throw Error(ErrorCode::invalid_type, "forall needs at least one variable");
  return detail::wrap(node::Forall{std::move(vars), std::move(body)});
}

inline TypeExpr make_exists(std::string var, std::optional<TypeExpr> bound, TypeExpr body) {
  return detail::wrap(node::Exists{std::move(var), std::move(bound), std::move(body)});
}

/// Domain of a callable from its parameter types: NoneTypeET for zero
/// parameters, the parameter itself for one, a product otherwise.
inline TypeExpr make_domain(std::vector<TypeExpr> params) {
  if (params.empty()) return make_atom("NoneTypeET");
  if (params.size() == 1) return std::move(params.front());
  return make_product(std::move(params));
}

inline bool is_atom(const TypeExpr& t, std::string_view name) {
  auto a = t.as<node::Atom>();
  return a && a->name == name;
}

/// Name of the head constructor for atoms and applications.
inline std::optional<std::string> head_name(const TypeExpr& t) {
  if (auto a = t.as<node::Atom>()) return a->name;
  if (auto p = t.as<node::Apply>()) return p->constructor;
  return std::nullopt;
}

}  // namespace pyts

#endif
