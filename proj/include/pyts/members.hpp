#ifndef PYTS_MEMBERS_HPP
#define PYTS_MEMBERS_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pyts/type_env.hpp"

namespace pyts {

using MemberMap = std::map<std::string, TypeExpr, std::less<>>;

/// Type arguments of a named type: the given ones, or Any per parameter of
/// a bare generic name.
inline std::vector<TypeExpr> effective_args(const Definition& def, const TypeExpr& named) {
  if (auto app = named.as<node::Apply>()) return app->args;
  return std::vector<TypeExpr>(def.params.size(), make_any());
}

/// Rewrites a definition's parameters and self variable for one use site.
inline Substitution use_site(const Definition& def, const TypeExpr& named, const TypeExpr& self) {
  Substitution s;
  if (!def.params.empty()) {
    auto args = effective_args(def, named);
    if (args.size() != def.params.size()) {
      throw Error(ErrorCode::arity_mismatch, def.name + " expects " +
                                                 std::to_string(def.params.size()) +
                                                 " type argument(s), got " + std::to_string(args.size()));
    }
    for (std::size_t i = 0; i < args.size(); ++i) s.insert_or_assign(def.params[i], args[i]);
  }
  s.insert_or_assign(def.self_var, self);
  return s;
}

/// Members of a named type (atom or application), following its bound
/// chain. A member found earlier along the chain overrides later ones.
inline MemberMap collect_members(const TypeExpr& named, const TypeEnv& env, const TypeExpr& self) {
  MemberMap out;
  std::set<std::string> visited;
  TypeExpr cur = named;
  while (auto head = head_name(cur)) {
    if (!visited.insert(*head).second) break;
    auto def = env.lookup(*head);
    auto s = use_site(*def, cur, self);
    for (const auto& f : def->record().fields) out.try_emplace(f.name, substitute(f.type, s));
    if (!def->bound) break;
    cur = substitute(*def->bound, s);
  }
  return out;
}

/// Members a structural check against `named` requires: the declared
/// contract of the definition plus that of any interface it extends.
inline MemberMap interface_members(const TypeExpr& named, const TypeEnv& env, const TypeExpr& self) {
  MemberMap out;
  std::set<std::string> visited;
  TypeExpr cur = named;
  bool first = true;
  while (auto head = head_name(cur)) {
    if (!visited.insert(*head).second) break;
    auto def = env.lookup(*head);
    if (!first && (def->builtin || def->interface == InterfaceKind::none)) break;
    first = false;
    auto s = use_site(*def, cur, self);
    const auto& rec = def->record();
    if (def->required_members.empty()) {
      for (const auto& f : rec.fields) out.try_emplace(f.name, substitute(f.type, s));
    } else {
      for (const auto& name : def->required_members)
        if (auto t = rec.find(name)) out.try_emplace(name, substitute(*t, s));
    }
    if (!def->bound) break;
    cur = substitute(*def->bound, s);
  }
  return out;
}

}  // namespace pyts

#endif
