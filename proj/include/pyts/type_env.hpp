#ifndef PYTS_TYPE_ENV_HPP
#define PYTS_TYPE_ENV_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pyts/type_ops.hpp"
#include "pyts/type_parser.hpp"

namespace pyts {

enum class InterfaceKind { none, protocol, abc };

/// A named existential type `∀params.∃self_var<:bound.signature`.
struct Definition {
  std::string name;
  std::vector<std::string> params;
  std::string self_var;
  std::optional<TypeExpr> bound;
  TypeExpr signature;  // always a record
  bool is_meta = false;

  /// Accepts any number of arguments (the TupleET family).
  bool variadic_params = false;
  bool builtin = false;
  InterfaceKind interface = InterfaceKind::none;
  /// Python class this type was elaborated from, when there is one.
  std::string class_name;
  /// Members a structural check must find. Empty means every listed field.
  std::vector<std::string> required_members;
  /// Members the class declares itself, as opposed to merged in from
  /// bases. Empty for built-in definitions, whose fields are all their own.
  std::vector<std::string> declared_members;
  /// Direct bases as applied types over `params` (first one is the bound's
  /// source). Empty for built-in definitions.
  std::vector<TypeExpr> base_types;

  const node::Record& record() const { return *signature.as<node::Record>(); }

  /// The full quantified type.
  TypeExpr type() const {
    TypeExpr body = make_exists(self_var, bound, signature);
    return params.empty() ? body : make_forall(params, body);
  }

  /// The existential with its parameters replaced by `args`.
  TypeExpr instantiate_with(const std::vector<TypeExpr>& args) const {
    if (params.empty()) {
      if (!args.empty() && !variadic_params)
        throw Error(ErrorCode::arity_mismatch, name + " takes no type arguments");
      return make_exists(self_var, bound, signature);
    }
    return pyts::instantiate(type(), args);
  }
};

/// Splits a quantified type into a Definition.
inline Definition definition_from_type(std::string name, const TypeExpr& type, bool is_meta = false) {
  Definition d;
  d.name = std::move(name);
  d.is_meta = is_meta;
  TypeExpr body = type;
  if (auto f = body.as<node::Forall>()) {
    d.params = f->vars;
    body = f->body;
  }
  auto e = body.as<node::Exists>();
  if (!e) throw Error(ErrorCode::invalid_type, d.name + " is not an existential type");
  if (!e->body.is<node::Record>())
    throw Error(ErrorCode::invalid_type, d.name + " has no record signature");
  d.self_var = e->var;
  d.bound = e->bound;
  d.signature = e->body;
  return d;
}

inline std::string to_text(const Definition& d) {
  std::string s = d.name + " = " + to_text(d.type());
  if (d.is_meta) s += " is PyTS";
  return s;
}

/// Parses `Name = <type>` with an optional trailing `is PyTS` marker.
inline Definition parse_definition(std::string_view text) {
  detail::TypeTextParser p(text, {});
  std::string name = p.ident();
  p.expect("=");
  TypeExpr type = p.parse_type();
  bool meta = false;
  if (p.eat_word("is")) {
    if (!p.eat_word("PyTS")) p.fail("expected 'PyTS' after 'is'");
    meta = true;
  }
  if (!p.done()) p.fail("unexpected trailing input");
  return definition_from_type(std::move(name), type, meta);
}

using DefinitionPtr = std::shared_ptr<const Definition>;

/// Named, possibly mutually recursive definitions. References between
/// definitions are by name, so IntET can mention StrET and vice versa.
///
/// Environments are layered: a child sees its parent's definitions and adds
/// its own, leaving the parent untouched. After construction an environment
/// is only read, so sharing one across threads is safe.
class TypeEnv {
 public:
  using FamilyResolver = std::function<DefinitionPtr(std::string_view)>;

  TypeEnv() = default;

  static TypeEnv child_of(std::shared_ptr<const TypeEnv> parent) {
    TypeEnv env;
    env.parent_ = std::move(parent);
    return env;
  }

  void set_family_resolver(FamilyResolver r) { families_ = std::move(r); }

  void add(Definition def) {
    if (find(def.name)) throw Error(ErrorCode::name_clash, def.name + " is already defined");
    order_.push_back(def.name);
    std::string key = def.name;
    defs_.emplace(std::move(key), std::make_shared<const Definition>(std::move(def)));
  }

  DefinitionPtr find(std::string_view name) const {
    if (auto it = defs_.find(name); it != defs_.end()) return it->second;
    if (parent_) return parent_->find(name);
    if (families_) return families_(name);
    return nullptr;
  }

  DefinitionPtr lookup(std::string_view name) const {
    auto d = find(name);
    if (!d) throw Error(ErrorCode::unknown_name, std::string(name) + " is not defined");
    return d;
  }

  bool contains(std::string_view name) const { return find(name) != nullptr; }

  /// Definitions added to this layer, in insertion order.
  std::vector<DefinitionPtr> own_definitions() const {
    std::vector<DefinitionPtr> out;
    for (const auto& n : order_) out.push_back(defs_.at(n));
    return out;
  }

  const TypeEnv* parent() const { return parent_.get(); }

  /// Declares `sub <: sup` between ET-names without any structural evidence
  /// (numeric tower, hardcoded virtual subclasses).
  void add_nominal_edge(std::string sub, std::string sup) {
    edges_[std::move(sub)].insert(std::move(sup));
  }

  /// Transitive closure of the nominal edges leaving `name`, across layers.
  std::set<std::string> nominal_supertypes(const std::string& name) const {
    std::set<std::string> seen;
    std::vector<std::string> todo{name};
    while (!todo.empty()) {
      std::string cur = todo.back();
      todo.pop_back();
      for (const TypeEnv* e = this; e; e = e->parent_.get()) {
        auto it = e->edges_.find(cur);
        if (it == e->edges_.end()) continue;
        for (const auto& sup : it->second)
          if (seen.insert(sup).second) todo.push_back(sup);
      }
    }
    return seen;
  }

 private:
  std::shared_ptr<const TypeEnv> parent_;
  std::map<std::string, DefinitionPtr, std::less<>> defs_;
  std::vector<std::string> order_;
  std::map<std::string, std::set<std::string>, std::less<>> edges_;
  FamilyResolver families_;
};

}  // namespace pyts

#endif
