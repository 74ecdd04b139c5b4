#ifndef PYTS_SUBTYPE_HPP
#define PYTS_SUBTYPE_HPP

// Subtyping between type expressions, with derivations as evidence.
//
// Rules, tried in order:
//   refl         a and b alpha-equivalent
//   any          Any on either side
//   bottom/top   BottomET below everything, everything below ObjectET
//   sum-left     every alternative of a below b
//   sum-right    a below some alternative of b
//   var-bound    X below b when the assumed bound of X is
//   function     contravariant domain, covariant codomain
//   product      same arity, pointwise
//   record       width and depth; a closed right side needs a closed left
//                side with exactly the same members
//   exists       bounds and bodies compared under X <: bound of the left
//   forall       same arity, bodies over shared fresh variables
//   apply        same constructor, invariant arguments; fixed tuples below
//                variadic ones when every element is
//   atom-edge    declared nominal edges (numeric tower, virtual table)
//   inherit      a named type is below whatever its bound is below
//   structural   a named type is below a protocol whose members it has
//   unfold       a named type against a literal existential or record
//   object-members  a below b whenever ObjectET is, tried last
//
// Goals that unfold names are tracked while they are pending; meeting one
// again is accepted (coinduction), so mutually recursive definitions such
// as IntET and StrET terminate.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pyts/members.hpp"
#include "pyts/type_env.hpp"

namespace pyts {

struct Derivation {
  bool verdict = false;
  std::string rule;
  /// Position of this goal inside its parent ("domain", "field foo", ...).
  std::string label;
  /// Why a failing leaf failed.
  std::string reason;
  TypeExpr lhs;
  TypeExpr rhs;
  std::vector<Derivation> premises;
};

/// Bounds assumed for type variables; later entries shadow earlier ones.
using Assumptions = std::vector<std::pair<std::string, TypeExpr>>;

class SubtypeChecker {
 public:
  explicit SubtypeChecker(const TypeEnv& env) : env_(env) {}

  Derivation check(const TypeExpr& a, const TypeExpr& b, const Assumptions& as = {}) {
    if (is_atom(a, "ObjectET")) return with_object(a, b, as);
    Derivation d = rules(a, b, as);
    if (d.verdict || in_object_ || !object_members_apply(a, b)) return d;
    Derivation via = with_object(object_top(), b, as);
    if (!via.verdict) return d;
    Derivation o = node_for("object-members", a, b);
    push(o, std::move(via), "ObjectET");
    return conclude(std::move(o));
  }

  // Inside ObjectET's own unfolding the fallback would be circular.
  Derivation with_object(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    bool outer = in_object_;
    in_object_ = true;
    Derivation d = rules(a, b, as);
    in_object_ = outer;
    return d;
  }

  Derivation rules(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    if (alpha_eq(a, b)) return leaf(true, "refl", a, b);
    if (a.is<node::Any>() || b.is<node::Any>()) return leaf(true, "any", a, b);
    if (is_atom(a, "BottomET")) return leaf(true, "bottom", a, b);
    if (is_atom(b, "ObjectET")) return leaf(true, "top", a, b);

    if (auto s = a.as<node::Sum>()) {
      Derivation d = node_for("sum-left", a, b);
      for (std::size_t i = 0; i < s->alternatives.size(); ++i)
        push(d, check(s->alternatives[i], b, as), "alternative " + std::to_string(i));
      return conclude(d);
    }
    if (auto s = b.as<node::Sum>()) {
      Derivation d = node_for("sum-right", a, b);
      for (std::size_t i = 0; i < s->alternatives.size(); ++i) {
        Derivation p = check(a, s->alternatives[i], as);
        p.label = "alternative " + std::to_string(i);
        if (p.verdict) {
          d.premises = {std::move(p)};
          d.verdict = true;
          return d;
        }
        d.premises.push_back(std::move(p));
      }
      d.verdict = false;
      d.reason = "no alternative of " + to_text(b) + " is a supertype of " + to_text(a);
      return d;
    }
    if (auto v = a.as<node::Var>()) return var_bound(v->name, a, b, as);
    if (b.is<node::Var>()) return fail(a, b, to_text(b) + " is an abstract type variable");

    if (a.tag() == b.tag()) {
      switch (a.tag()) {
        case TypeTag::function: return function(a, b, as);
        case TypeTag::product: return product(a, b, as);
        case TypeTag::record: return record(a, b, as);
        case TypeTag::exists: return exists(a, b, as);
        case TypeTag::forall: return forall(a, b, as);
        default: break;
      }
    }

    const bool named_a = a.is<node::Atom>() || a.is<node::Apply>();
    const bool named_b = b.is<node::Atom>() || b.is<node::Apply>();
    if (named_a && named_b) return named(a, b, as);
    if (named_a && (b.is<node::Exists>() || b.is<node::Record>())) {
      return coinductive("unfold", a, b, [&] {
        Derivation d = node_for("unfold", a, b);
        push(d, check(unfold(a), b, as), "definition of " + *head_name(a));
        return conclude(d);
      });
    }
    if (a.is<node::Exists>() && named_b) {
      return coinductive("unfold", a, b, [&] {
        Derivation d = node_for("unfold", a, b);
        push(d, check(a, unfold(b), as), "definition of " + *head_name(b));
        return conclude(d);
      });
    }
    if (auto e = a.as<node::Exists>(); e && b.is<node::Record>()) {
      std::string z = fresh_for(a, b, as, e->var);
      TypeExpr bound = e->bound ? rename_var(*e->bound, e->var, z) : make_atom("ObjectET");
      Assumptions inner = as;
      inner.emplace_back(z, bound);
      Derivation d = node_for("open", a, b);
      push(d, check(rename_var(e->body, e->var, z), b, inner), "body");
      return conclude(d);
    }
    return fail(a, b, to_text(a) + " is not a subtype of " + to_text(b));
  }

  /// Both directions hold (the invariant position of generic arguments).
  Derivation equivalent(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    if (alpha_eq(a, b)) return leaf(true, "refl", a, b);
    Derivation d = node_for("invariant", a, b);
    push(d, check(a, b, as), "covariant");
    push(d, check(b, a, as), "contravariant");
    return conclude(d);
  }

 private:
  static const TypeExpr& object_top() {
    static const TypeExpr top = make_atom("ObjectET");
    return top;
  }

  // Every value is an object, so whatever ObjectET satisfies holds of a too.
  static bool object_members_apply(const TypeExpr& a, const TypeExpr& b) {
    if (is_atom(a, "ObjectET") || b.is<node::Var>() || b.is<node::Sum>()) return false;
    return b.is<node::Record>() || b.is<node::Exists>() || b.is<node::Atom>() || b.is<node::Apply>();
  }

  static Derivation leaf(bool verdict, std::string rule, const TypeExpr& a, const TypeExpr& b) {
    Derivation d;
    d.verdict = verdict;
    d.rule = std::move(rule);
    d.lhs = a;
    d.rhs = b;
    return d;
  }

  static Derivation fail(const TypeExpr& a, const TypeExpr& b, std::string reason) {
    Derivation d = leaf(false, "mismatch", a, b);
    d.reason = std::move(reason);
    return d;
  }

  static Derivation node_for(std::string rule, const TypeExpr& a, const TypeExpr& b) {
    return leaf(true, std::move(rule), a, b);
  }

  static void push(Derivation& parent, Derivation child, std::string label) {
    child.label = std::move(label);
    parent.premises.push_back(std::move(child));
  }

  static Derivation conclude(Derivation d) {
    d.verdict = std::all_of(d.premises.begin(), d.premises.end(),
                            [](const Derivation& p) { return p.verdict; });
    if (!d.verdict && d.reason.empty()) {
      for (const auto& p : d.premises) {
        if (p.verdict) continue;
        d.reason = p.label + ": " + (p.reason.empty() ? "failed" : p.reason);
        break;
      }
    }
    return d;
  }

  std::string fresh_for(const TypeExpr& a, const TypeExpr& b, const Assumptions& as,
                        const std::string& base) const {
    VarSet avoid = all_vars(a);
    auto vb = all_vars(b);
    avoid.insert(vb.begin(), vb.end());
    for (const auto& [name, bound] : as) {
      avoid.insert(name);
      auto fv = free_vars(bound);
      avoid.insert(fv.begin(), fv.end());
    }
    return fresh_name(base, avoid);
  }

  Derivation var_bound(const std::string& name, const TypeExpr& a, const TypeExpr& b,
                       const Assumptions& as) {
    for (auto it = as.rbegin(); it != as.rend(); ++it) {
      if (it->first != name) continue;
      Derivation d = node_for("var-bound", a, b);
      push(d, check(it->second, b, as), "bound of " + name);
      return conclude(d);
    }
    return fail(a, b, name + " has no assumed bound");
  }

  Derivation function(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    auto fa = a.as<node::Function>();
    auto fb = b.as<node::Function>();
    Derivation d = node_for("function", a, b);
    push(d, check(fb->domain, fa->domain, as), "domain");
    push(d, check(fa->codomain, fb->codomain, as), "codomain");
    return conclude(d);
  }

  Derivation product(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    const auto& xs = a.as<node::Product>()->factors;
    const auto& ys = b.as<node::Product>()->factors;
    if (xs.size() != ys.size()) {
      return fail(a, b, "arity " + std::to_string(xs.size()) + " differs from " +
                            std::to_string(ys.size()));
    }
    Derivation d = node_for("product", a, b);
    for (std::size_t i = 0; i < xs.size(); ++i)
      push(d, check(xs[i], ys[i], as), "factor " + std::to_string(i));
    return conclude(d);
  }

  Derivation record(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    auto ra = a.as<node::Record>();
    auto rb = b.as<node::Record>();
    if (!rb->open) {
      if (ra->open) return fail(a, b, "an open record is incomparable with a closed one");
      if (ra->fields.size() != rb->fields.size())
        return fail(a, b, "closed records list different members");
    }
    Derivation d = node_for("record", a, b);
    for (const auto& f : rb->fields) {
      const TypeExpr* mine = ra->find(f.name);
      if (!mine) {
        push(d, fail(a, b, "missing member " + f.name), "field " + f.name);
        continue;
      }
      push(d, check(*mine, f.type, as), "field " + f.name);
    }
    return conclude(d);
  }

  Derivation exists(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    auto ea = a.as<node::Exists>();
    auto eb = b.as<node::Exists>();
    std::string z = fresh_for(a, b, as, ea->var);
    TypeExpr bound_a = ea->bound ? rename_var(*ea->bound, ea->var, z) : make_atom("ObjectET");
    Assumptions inner = as;
    inner.emplace_back(z, bound_a);
    Derivation d = node_for("exists", a, b);
    if (eb->bound) push(d, check(bound_a, rename_var(*eb->bound, eb->var, z), inner), "bound");
    push(d, check(rename_var(ea->body, ea->var, z), rename_var(eb->body, eb->var, z), inner), "body");
    return conclude(d);
  }

  Derivation forall(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    auto fa = a.as<node::Forall>();
    auto fb = b.as<node::Forall>();
    if (fa->vars.size() != fb->vars.size()) return fail(a, b, "quantifier arity differs");
    Substitution sa, sb;
    VarSet avoid = all_vars(a);
    auto vb = all_vars(b);
    avoid.insert(vb.begin(), vb.end());
    for (const auto& [name, bound] : as) avoid.insert(name);
    for (std::size_t i = 0; i < fa->vars.size(); ++i) {
      std::string z = fresh_name(fa->vars[i], avoid);
      avoid.insert(z);
      sa.insert_or_assign(fa->vars[i], make_var(z));
      sb.insert_or_assign(fb->vars[i], make_var(z));
    }
    Derivation d = node_for("forall", a, b);
    push(d, check(substitute(fa->body, sa), substitute(fb->body, sb), as), "body");
    return conclude(d);
  }

  Derivation apply(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    auto x = a.as<node::Apply>();
    auto y = b.as<node::Apply>();
    if (y->variadic) {
      if (x->variadic) {
        Derivation d = node_for("apply", a, b);
        push(d, equivalent(x->args.front(), y->args.front(), as), "element");
        return conclude(d);
      }
      Derivation d = node_for("tuple-variadic", a, b);
      for (std::size_t i = 0; i < x->args.size(); ++i)
        push(d, check(x->args[i], y->args.front(), as), "element " + std::to_string(i));
      return conclude(d);
    }
    if (x->variadic) return fail(a, b, "a variadic application is not below a fixed-arity one");
    if (x->args.size() != y->args.size()) {
      return fail(a, b, "argument count " + std::to_string(x->args.size()) + " differs from " +
                            std::to_string(y->args.size()));
    }
    Derivation d = node_for("apply", a, b);
    for (std::size_t i = 0; i < x->args.size(); ++i)
      push(d, equivalent(x->args[i], y->args[i], as), "argument " + std::to_string(i));
    return conclude(d);
  }

  Derivation named(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    const std::string ha = *head_name(a);
    const std::string hb = *head_name(b);
    if (ha == hb && a.is<node::Apply>() && b.is<node::Apply>()) return apply(a, b, as);
    if (b.is<node::Atom>() && env_.nominal_supertypes(ha).count(hb)) return leaf(true, "atom-edge", a, b);

    auto def_a = env_.lookup(ha);
    Derivation inherit;
    bool tried_inherit = false;
    if (def_a->bound) {
      TypeExpr up = substitute(*def_a->bound, use_site(*def_a, a, a));
      inherit = node_for("inherit", a, b);
      push(inherit, check(up, b, as), "bound of " + ha);
      inherit = conclude(std::move(inherit));
      if (inherit.verdict) return inherit;
      tried_inherit = true;
    }
    auto def_b = env_.lookup(hb);
    if (def_b->interface == InterfaceKind::protocol && ha != hb) return structural(a, b, as);
    if (tried_inherit) {
      inherit.reason = to_text(a) + " is not a subtype of " + to_text(b);
      return inherit;
    }
    return fail(a, b, to_text(a) + " is not a subtype of " + to_text(b));
  }

  Derivation structural(const TypeExpr& a, const TypeExpr& b, const Assumptions& as) {
    return coinductive("structural", a, b, [&] {
      TypeExpr self = make_var(fresh_for(a, b, as, "Self"));
      MemberMap required = interface_members(b, env_, self);
      MemberMap actual = collect_members(a, env_, self);
      Derivation d = node_for("structural", a, b);
      for (const auto& [name, expected] : required) {
        auto it = actual.find(name);
        if (it == actual.end()) {
          push(d, fail(a, b, "missing member " + name), "member " + name);
          continue;
        }
        push(d, check(it->second, expected, as), "member " + name);
      }
      return conclude(d);
    });
  }

  TypeExpr unfold(const TypeExpr& named_type) const {
    auto def = env_.lookup(*head_name(named_type));
    return def->instantiate_with(effective_args(*def, named_type));
  }

  template <class F>
  Derivation coinductive(const char* rule, const TypeExpr& a, const TypeExpr& b, F&& body) {
    std::string key = std::string(rule) + "|" + to_text(a) + "|" + to_text(b);
    if (pending_.count(key)) return leaf(true, "assumption", a, b);
    pending_.insert(key);
    Derivation d = body();
    pending_.erase(key);
    return d;
  }

  const TypeEnv& env_;
  std::set<std::string> pending_;
  bool in_object_ = false;
};

inline Derivation subtype(const TypeExpr& a, const TypeExpr& b, const TypeEnv& env,
                          const Assumptions& assumptions = {}) {
  return SubtypeChecker(env).check(a, b, assumptions);
}

inline bool is_subtype(const TypeExpr& a, const TypeExpr& b, const TypeEnv& env,
                       const Assumptions& assumptions = {}) {
  return subtype(a, b, env, assumptions).verdict;
}

// ---- witnesses ------------------------------------------------------------

struct Binding {
  /// Reference to the implementation, e.g. `Duck.quack`.
  std::string implementation;
  TypeExpr type;
};

/// A representation type together with implementations of the members of
/// an existential's signature.
struct Witness {
  std::string representation;
  std::map<std::string, Binding, std::less<>> bindings;
};

/// Checks that `w` inhabits `target` (an existential): the representation
/// meets the bound and every listed member is bound to an implementation
/// whose type is below the member's type with the representation
/// substituted for the hidden variable.
inline Derivation check_witness(const Witness& w, const TypeExpr& target, const TypeEnv& env) {
  auto e = target.as<node::Exists>();
  if (!e) throw Error(ErrorCode::invalid_type, "witness target must be an existential type");
  auto rec = e->body.as<node::Record>();
  if (!rec) throw Error(ErrorCode::invalid_type, "witness target has no record signature");

  TypeExpr rep = make_atom(w.representation);
  // An undefined representation is opaque: below ObjectET and itself only.
  std::shared_ptr<const TypeEnv> parent(&env, [](const TypeEnv*) {});
  TypeEnv local = TypeEnv::child_of(parent);
  if (!env.contains(w.representation))
    local.add(definition_from_type(w.representation, make_exists("R", std::nullopt, make_record({}, true))));
  SubtypeChecker checker(local);
  Derivation d;
  d.rule = "witness";
  d.lhs = rep;
  d.rhs = target;
  if (e->bound) {
    // The representation class may only be known through its ET-name.
    TypeExpr rep_for_bound = rep;
    if (!env.contains(w.representation) && env.contains(w.representation + "ET"))
      rep_for_bound = make_atom(w.representation + "ET");
    Derivation b = checker.check(rep_for_bound, substitute(*e->bound, e->var, rep_for_bound));
    if (!b.verdict) {
      throw Error(ErrorCode::bound_violated,
                  w.representation + " is not a subtype of " + to_text(*e->bound));
    }
    b.label = "bound";
    d.premises.push_back(std::move(b));
  }
  for (const auto& f : rec->fields) {
    auto it = w.bindings.find(f.name);
    if (it == w.bindings.end())
      throw Error(ErrorCode::missing_member, "no binding for member '" + f.name + "'");
    Derivation m = checker.check(it->second.type, substitute(f.type, e->var, rep));
    m.label = "member " + f.name;
    d.premises.push_back(std::move(m));
  }
  d.verdict = std::all_of(d.premises.begin(), d.premises.end(),
                          [](const Derivation& p) { return p.verdict; });
  if (!d.verdict) d.reason = "a binding does not match its member type";
  return d;
}

}  // namespace pyts

#endif
