#ifndef PYTS_TYPE_OPS_HPP
#define PYTS_TYPE_OPS_HPP

// Pure syntactic operations on type expressions: free variables,
// capture-avoiding substitution, alpha-equivalence, instantiation of
// generic (∀-headed) types, and normalization.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pyts/render.hpp"
#include "pyts/type_expr.hpp"

namespace pyts {

using VarSet = std::set<std::string, std::less<>>;
using Substitution = std::map<std::string, TypeExpr, std::less<>>;

namespace detail {

inline void collect_free(const TypeExpr& t, VarSet& bound, VarSet& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Var>) {
          if (!bound.count(n.name)) out.insert(n.name);
        } else if constexpr (std::is_same_v<N, node::Apply>) {
          for (const auto& a : n.args) collect_free(a, bound, out);
        } else if constexpr (std::is_same_v<N, node::Record>) {
          for (const auto& f : n.fields) collect_free(f.type, bound, out);
        } else if constexpr (std::is_same_v<N, node::Product>) {
          for (const auto& f : n.factors) collect_free(f, bound, out);
        } else if constexpr (std::is_same_v<N, node::Sum>) {
          for (const auto& a : n.alternatives) collect_free(a, bound, out);
        } else if constexpr (std::is_same_v<N, node::Function>) {
          collect_free(n.domain, bound, out);
          collect_free(n.codomain, bound, out);
        } else if constexpr (std::is_same_v<N, node::Forall>) {
          VarSet inner = bound;
          inner.insert(n.vars.begin(), n.vars.end());
          collect_free(n.body, inner, out);
        } else if constexpr (std::is_same_v<N, node::Exists>) {
          VarSet inner = bound;
          inner.insert(n.var);
          if (n.bound) collect_free(*n.bound, inner, out);
          collect_free(n.body, inner, out);
        }
      },
      t.node().value);
}

inline void collect_all_vars(const TypeExpr& t, VarSet& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Var>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<N, node::Apply>) {
          for (const auto& a : n.args) collect_all_vars(a, out);
        } else if constexpr (std::is_same_v<N, node::Record>) {
          for (const auto& f : n.fields) collect_all_vars(f.type, out);
        } else if constexpr (std::is_same_v<N, node::Product>) {
          for (const auto& f : n.factors) collect_all_vars(f, out);
        } else if constexpr (std::is_same_v<N, node::Sum>) {
          for (const auto& a : n.alternatives) collect_all_vars(a, out);
        } else if constexpr (std::is_same_v<N, node::Function>) {
          collect_all_vars(n.domain, out);
          collect_all_vars(n.codomain, out);
        } else if constexpr (std::is_same_v<N, node::Forall>) {
          out.insert(n.vars.begin(), n.vars.end());
          collect_all_vars(n.body, out);
        } else if constexpr (std::is_same_v<N, node::Exists>) {
          out.insert(n.var);
          if (n.bound) collect_all_vars(*n.bound, out);
          collect_all_vars(n.body, out);
        }
      },
      t.node().value);
}

}  // namespace detail

inline VarSet free_vars(const TypeExpr& t) {
  VarSet bound, out;
  detail::collect_free(t, bound, out);
  return out;
}

/// Every variable name occurring in `t`, free or bound.
inline VarSet all_vars(const TypeExpr& t) {
  VarSet out;
  detail::collect_all_vars(t, out);
  return out;
}

/// `base` with primes appended until it is not in `avoid`.
inline std::string fresh_name(std::string base, const VarSet& avoid) {
  while (avoid.count(base)) base += '\'';
  return base;
}

namespace detail {

inline TypeExpr subst(const TypeExpr& t, const Substitution& s);

inline std::vector<TypeExpr> subst_all(const std::vector<TypeExpr>& ts, const Substitution& s) {
  std::vector<TypeExpr> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(subst(t, s));
  return out;
}

// Drops the entries shadowed by `binders`, then renames any binder that
// would capture a free variable of a remaining replacement.
inline std::pair<std::vector<std::string>, Substitution> enter_binders(
    const std::vector<std::string>& binders, const Substitution& s, const VarSet& scope_vars) {
  Substitution inner;
  for (const auto& [k, v] : s) {
    if (std::find(binders.begin(), binders.end(), k) == binders.end()) inner.emplace(k, v);
  }
  VarSet replacement_free;
  for (const auto& [k, v] : inner) {
    auto fv = free_vars(v);
    replacement_free.insert(fv.begin(), fv.end());
  }
  std::vector<std::string> renamed = binders;
  VarSet avoid = replacement_free;
  avoid.insert(scope_vars.begin(), scope_vars.end());
  for (const auto& [k, v] : inner) avoid.insert(k);
  avoid.insert(binders.begin(), binders.end());
  for (auto& b : renamed) {
    if (!inner.empty() && replacement_free.count(b)) {
      std::string fresh = fresh_name(b, avoid);
      avoid.insert(fresh);
      inner.insert_or_assign(b, make_var(fresh));
      b = fresh;
    }
  }
  return {std::move(renamed), std::move(inner)};
}

inline TypeExpr subst(const TypeExpr& t, const Substitution& s) {
  if (s.empty()) return t;
  return std::visit(
      [&](const auto& n) -> TypeExpr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Var>) {
          auto it = s.find(n.name);
          return it == s.end() ? t : it->second;
        } else if constexpr (std::is_same_v<N, node::Atom> || std::is_same_v<N, node::Any>) {
          return t;
        } else if constexpr (std::is_same_v<N, node::Apply>) {
          return wrap(node::Apply{n.constructor, subst_all(n.args, s), n.variadic});
        } else if constexpr (std::is_same_v<N, node::Record>) {
          std::vector<node::Field> fields;
          for (const auto& f : n.fields) fields.push_back({f.name, subst(f.type, s)});
          return wrap(node::Record{std::move(fields), n.open});
        } else if constexpr (std::is_same_v<N, node::Product>) {
          return wrap(node::Product{subst_all(n.factors, s)});
        } else if constexpr (std::is_same_v<N, node::Sum>) {
          return wrap(node::Sum{subst_all(n.alternatives, s)});
        } else if constexpr (std::is_same_v<N, node::Function>) {
          return wrap(node::Function{subst(n.domain, s), subst(n.codomain, s)});
        } else if constexpr (std::is_same_v<N, node::Forall>) {
          auto [vars, inner] = enter_binders(n.vars, s, free_vars(n.body));
          return wrap(node::Forall{std::move(vars), subst(n.body, inner)});
        } else {
          static_assert(std::is_same_v<N, node::Exists>);
          VarSet scope = free_vars(n.body);
          if (n.bound) {
            auto fb = free_vars(*n.bound);
            scope.insert(fb.begin(), fb.end());
          }
          auto [vars, inner] = enter_binders({n.var}, s, scope);
          std::optional<TypeExpr> bound;
          if (n.bound) bound = subst(*n.bound, inner);
          return wrap(node::Exists{vars.front(), std::move(bound), subst(n.body, inner)});
        }
      },
      t.node().value);
}

}  // namespace detail

/// Simultaneous capture-avoiding substitution.
inline TypeExpr substitute(const TypeExpr& t, const Substitution& s) { return detail::subst(t, s); }

inline TypeExpr substitute(const TypeExpr& t, const std::string& var, const TypeExpr& replacement) {
  return detail::subst(t, Substitution{{var, replacement}});
}

inline TypeExpr rename_var(const TypeExpr& t, const std::string& from, const std::string& to) {
  if (from == to) return t;
  return substitute(t, from, make_var(to));
}

// ---- alpha-equivalence ----------------------------------------------------

namespace detail {

// Bound variables map to the depth of their binder; free ones compare by name.
struct AlphaScope {
  std::map<std::string, int, std::less<>> left, right;
  int depth = 0;
};

inline bool alpha(const TypeExpr& a, const TypeExpr& b, const AlphaScope& sc);

inline bool alpha_all(const std::vector<TypeExpr>& a, const std::vector<TypeExpr>& b,
                      const AlphaScope& sc) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!alpha(a[i], b[i], sc)) return false;
  return true;
}

inline bool alpha_set(const std::vector<TypeExpr>& a, const std::vector<TypeExpr>& b,
                      const AlphaScope& sc) {
  auto covered_ab = std::all_of(a.begin(), a.end(), [&](const TypeExpr& x) {
    return std::any_of(b.begin(), b.end(), [&](const TypeExpr& y) { return alpha(x, y, sc); });
  });
  auto covered_ba = std::all_of(b.begin(), b.end(), [&](const TypeExpr& y) {
    return std::any_of(a.begin(), a.end(), [&](const TypeExpr& x) { return alpha(x, y, sc); });
  });
  return covered_ab && covered_ba;
}

inline const TypeExpr& object_top() {
  static const TypeExpr top = make_atom("ObjectET");
  return top;
}

inline bool alpha(const TypeExpr& a, const TypeExpr& b, const AlphaScope& sc) {
  if (a.same_node(b) && sc.left == sc.right) return true;
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case TypeTag::atom: return a.as<node::Atom>()->name == b.as<node::Atom>()->name;
    case TypeTag::any: return true;
    case TypeTag::var: {
      const auto& x = a.as<node::Var>()->name;
      const auto& y = b.as<node::Var>()->name;
      auto lx = sc.left.find(x);
      auto ry = sc.right.find(y);
      if (lx == sc.left.end() && ry == sc.right.end()) return x == y;
      if (lx == sc.left.end() || ry == sc.right.end()) return false;
      return lx->second == ry->second;
    }
    case TypeTag::apply: {
      auto x = a.as<node::Apply>();
      auto y = b.as<node::Apply>();
      return x->constructor == y->constructor && x->variadic == y->variadic &&
             alpha_all(x->args, y->args, sc);
    }
    case TypeTag::record: {
      auto x = a.as<node::Record>();
      auto y = b.as<node::Record>();
      if (x->open != y->open || x->fields.size() != y->fields.size()) return false;
      for (std::size_t i = 0; i < x->fields.size(); ++i) {
        if (x->fields[i].name != y->fields[i].name) return false;
        if (!alpha(x->fields[i].type, y->fields[i].type, sc)) return false;
      }
      return true;
    }
    case TypeTag::product:
      return alpha_all(a.as<node::Product>()->factors, b.as<node::Product>()->factors, sc);
    case TypeTag::sum:
      return alpha_set(a.as<node::Sum>()->alternatives, b.as<node::Sum>()->alternatives, sc);
    case TypeTag::function: {
      auto x = a.as<node::Function>();
      auto y = b.as<node::Function>();
      return alpha(x->domain, y->domain, sc) && alpha(x->codomain, y->codomain, sc);
    }
    case TypeTag::forall: {
      auto x = a.as<node::Forall>();
      auto y = b.as<node::Forall>();
      if (x->vars.size() != y->vars.size()) return false;
      AlphaScope inner = sc;
      for (std::size_t i = 0; i < x->vars.size(); ++i) {
        inner.left[x->vars[i]] = inner.depth;
        inner.right[y->vars[i]] = inner.depth;
        ++inner.depth;
      }
      return alpha(x->body, y->body, inner);
    }
    case TypeTag::exists: {
      auto x = a.as<node::Exists>();
      auto y = b.as<node::Exists>();
      AlphaScope inner = sc;
      inner.left[x->var] = inner.depth;
      inner.right[y->var] = inner.depth;
      ++inner.depth;
      // An absent bound is the top type.
      const TypeExpr& bx = x->bound ? *x->bound : object_top();
      const TypeExpr& by = y->bound ? *y->bound : object_top();
      return alpha(bx, by, inner) && alpha(x->body, y->body, inner);
    }
  }
  return false;
}

}  // namespace detail

/// Equality up to consistent renaming of bound variables. Record fields
/// compare by name; sums compare as sets of alternatives.
inline bool alpha_eq(const TypeExpr& a, const TypeExpr& b) {
  return detail::alpha(a, b, detail::AlphaScope{});
}

// ---- instantiation --------------------------------------------------------

inline TypeExpr instantiate(const TypeExpr& generic, const std::vector<TypeExpr>& args) {
  auto f = generic.as<node::Forall>();
  if (!f) throw Error(ErrorCode::not_generic, to_text(generic) + " has no type parameters");
  if (f->vars.size() != args.size()) {
    throw Error(ErrorCode::arity_mismatch, to_text(generic) + " expects " +
                                               std::to_string(f->vars.size()) + " argument(s), got " +
                                               std::to_string(args.size()));
  }
  Substitution s;
  for (std::size_t i = 0; i < args.size(); ++i) s.insert_or_assign(f->vars[i], args[i]);
  return substitute(f->body, s);
}

// ---- normalization --------------------------------------------------------

/// Flattens nested sums, drops alpha-equivalent duplicates, collapses
/// singleton sums and orders alternatives by their canonical text.
/// Record fields are already kept in name order. Idempotent.
inline TypeExpr normalize(const TypeExpr& t);

namespace detail {

inline std::vector<TypeExpr> normalize_all(const std::vector<TypeExpr>& ts) {
  std::vector<TypeExpr> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(normalize(t));
  return out;
}

inline void flatten_sum(const TypeExpr& t, std::vector<TypeExpr>& out) {
  if (auto s = t.as<node::Sum>()) {
    for (const auto& alt : s->alternatives) flatten_sum(alt, out);
  } else {
    out.push_back(t);
  }
}

}  // namespace detail

/// Builds a normalized union; a single distinct alternative is returned as is.
inline TypeExpr make_union(const std::vector<TypeExpr>& alternatives) {
  std::vector<TypeExpr> flat;
  for (const auto& a : alternatives) detail::flatten_sum(normalize(a), flat);
  std::vector<std::pair<std::string, TypeExpr>> keyed;
  for (auto& a : flat) {
    bool dup = std::any_of(keyed.begin(), keyed.end(),
                           [&](const auto& k) { return alpha_eq(k.second, a); });
    if (!dup) keyed.emplace_back(to_text(a), a);
  }
  if (keyed.empty()) throw Error(ErrorCode::invalid_type, "empty union");
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  if (keyed.size() == 1) return keyed.front().second;
  std::vector<TypeExpr> alts;
  for (auto& k : keyed) alts.push_back(std::move(k.second));
  return make_sum(std::move(alts));
}

inline TypeExpr normalize(const TypeExpr& t) {
  return std::visit(
      [&](const auto& n) -> TypeExpr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Atom> || std::is_same_v<N, node::Var> ||
                      std::is_same_v<N, node::Any>) {
          return t;
        } else if constexpr (std::is_same_v<N, node::Apply>) {
          return detail::wrap(node::Apply{n.constructor, detail::normalize_all(n.args), n.variadic});
        } else if constexpr (std::is_same_v<N, node::Record>) {
          std::vector<node::Field> fields;
          for (const auto& f : n.fields) fields.push_back({f.name, normalize(f.type)});
          return make_record(std::move(fields), n.open);
        } else if constexpr (std::is_same_v<N, node::Product>) {
          return detail::wrap(node::Product{detail::normalize_all(n.factors)});
        } else if constexpr (std::is_same_v<N, node::Sum>) {
          return make_union(n.alternatives);
        } else if constexpr (std::is_same_v<N, node::Function>) {
          return make_function(normalize(n.domain), normalize(n.codomain));
        } else if constexpr (std::is_same_v<N, node::Forall>) {
          return make_forall(n.vars, normalize(n.body));
        } else {
          std::optional<TypeExpr> bound;
          if (n.bound) bound = normalize(*n.bound);
          return make_exists(n.var, std::move(bound), normalize(n.body));
        }
      },
      t.node().value);
}

}  // namespace pyts

#endif
