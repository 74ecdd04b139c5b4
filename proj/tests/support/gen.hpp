#ifndef PYTS_TEST_GEN_HPP
#define PYTS_TEST_GEN_HPP

// Random type expressions for the property tests. Seeds are fixed per test
// so failures reproduce.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "pyts/type_ops.hpp"

namespace pyts::testing {

class TypeGen {
 public:
  explicit TypeGen(unsigned seed) : rng_(seed) {}

  std::mt19937& rng() { return rng_; }

  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool chance(int percent) { return below(100) < percent; }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(below(static_cast<int>(xs.size())))];
  }

  /// Open terms over the variable pool, every constructor represented.
  TypeExpr open_type(int depth) {
    if (depth <= 0 || chance(25)) {
      int k = below(10);
      if (k < 4) return make_var(pick(vars_));
      if (k == 4) return make_any();
      return make_atom(pick(atoms_));
    }
    switch (below(8)) {
      case 0: {
        if (chance(30)) return make_variadic("TupleET", open_type(depth - 1));
        if (chance(50)) return make_apply("ListET", {open_type(depth - 1)});
        return make_apply("DictET", {open_type(depth - 1), open_type(depth - 1)});
      }
      case 1: {
        std::vector<node::Field> fields;
        for (const auto& n : fields_)
          if (chance(50)) fields.push_back({n, open_type(depth - 1)});
        return make_record(std::move(fields), chance(50));
      }
      case 2: return make_product(several(depth));
      case 3: return make_sum(several(depth));
      case 4:
      case 5: return make_function(open_type(depth - 1), open_type(depth - 1));
      case 6: {
        std::vector<std::string> vs{pick(vars_)};
        if (chance(40)) {
          std::string w = pick(vars_);
          if (w != vs.front()) vs.push_back(w);
        }
        return make_forall(vs, open_type(depth - 1));
      }
      default: {
        std::optional<TypeExpr> bound;
        if (chance(40)) bound = open_type(depth - 2);
        return make_exists(pick(vars_), bound, open_type(depth - 1));
      }
    }
  }

  /// Closed terms over prelude names, no Any and no quantifiers: the
  /// fragment the subtype laws are stated on.
  TypeExpr closed_type(int depth) {
    if (depth <= 0 || chance(35)) return make_atom(pick(law_atoms_));
    switch (below(6)) {
      case 0: return make_apply("ListET", {closed_type(depth - 1)});
      case 1: {
        std::vector<node::Field> fields;
        for (const auto& n : fields_)
          if (chance(50)) fields.push_back({n, closed_type(depth - 1)});
        return make_record(std::move(fields), !chance(20));
      }
      case 2: {
        std::vector<TypeExpr> fs{closed_type(depth - 1), closed_type(depth - 1)};
        return make_product(std::move(fs));
      }
      case 3: {
        std::vector<TypeExpr> as{closed_type(depth - 1), closed_type(depth - 1)};
        return make_sum(std::move(as));
      }
      default: return make_function(closed_type(depth - 1), closed_type(depth - 1));
    }
  }

  TypeExpr law_atom() { return make_atom(pick(law_atoms_)); }

  const std::vector<std::string>& vars() const { return vars_; }

  /// Renames every binder in `t` to a fresh name; the result is
  /// alpha-equivalent by construction.
  TypeExpr rename_binders(const TypeExpr& t) { return rename(t, {}); }

 private:
  std::vector<TypeExpr> several(int depth) {
    std::vector<TypeExpr> out{open_type(depth - 1), open_type(depth - 1)};
    if (chance(30)) out.push_back(open_type(depth - 1));
    return out;
  }

  std::string fresh() { return "R" + std::to_string(counter_++); }

  TypeExpr rename(const TypeExpr& t, std::map<std::string, std::string> env) {
    auto all = [&](const std::vector<TypeExpr>& ts) {
      std::vector<TypeExpr> out;
      for (const auto& x : ts) out.push_back(rename(x, env));
      return out;
    };
    switch (t.tag()) {
      case TypeTag::atom:
      case TypeTag::any: return t;
      case TypeTag::var: {
        auto it = env.find(t.as<node::Var>()->name);
        return it == env.end() ? t : make_var(it->second);
      }
      case TypeTag::apply: {
        auto p = t.as<node::Apply>();
        return p->variadic ? make_variadic(p->constructor, rename(p->args.front(), env))
                           : make_apply(p->constructor, all(p->args));
      }
      case TypeTag::record: {
        std::vector<node::Field> fields;
        for (const auto& f : t.as<node::Record>()->fields) fields.push_back({f.name, rename(f.type, env)});
        return make_record(std::move(fields), t.as<node::Record>()->open);
      }
      case TypeTag::product: return make_product(all(t.as<node::Product>()->factors));
      case TypeTag::sum: return make_sum(all(t.as<node::Sum>()->alternatives));
      case TypeTag::function: {
        auto f = t.as<node::Function>();
        return make_function(rename(f->domain, env), rename(f->codomain, env));
      }
      case TypeTag::forall: {
        auto f = t.as<node::Forall>();
        std::vector<std::string> vs;
        for (const auto& v : f->vars) {
          vs.push_back(fresh());
          env[v] = vs.back();
        }
        return make_forall(vs, rename(f->body, env));
      }
      case TypeTag::exists: {
        auto e = t.as<node::Exists>();
        std::string v = fresh();
        env[e->var] = v;
        std::optional<TypeExpr> bound;
        if (e->bound) bound = rename(*e->bound, env);
        return make_exists(v, bound, rename(e->body, env));
      }
    }
    return t;
  }

  std::mt19937 rng_;
  int counter_ = 0;
  std::vector<std::string> vars_{"X", "Y", "Z", "W"};
  std::vector<std::string> atoms_{"IntET", "StrET", "BoolET", "FloatET", "NoneTypeET", "Duck"};
  std::vector<std::string> law_atoms_{"BottomET", "ObjectET", "BoolET", "IntET", "FloatET",
                                      "ComplexET", "StrET", "NoneTypeET", "BytesET"};
  std::vector<std::string> fields_{"f", "g", "h"};
};

}  // namespace pyts::testing

#endif
