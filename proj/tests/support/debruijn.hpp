#ifndef PYTS_TEST_DEBRUIJN_HPP
#define PYTS_TEST_DEBRUIJN_HPP

// Reference implementation for binder handling: bound variables become
// de Bruijn indices, so capture cannot happen and alpha-equivalence is
// string equality. Sums are printed as sorted sets of their alternatives.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "pyts/type_ops.hpp"

namespace pyts::testing {

class DeBruijn {
 public:
  /// `replace` maps free variable names to already converted text.
  explicit DeBruijn(std::map<std::string, std::string> replace = {}) : replace_(std::move(replace)) {}

  std::string convert(const TypeExpr& t) {
    switch (t.tag()) {
      case TypeTag::atom: return "a:" + t.as<node::Atom>()->name;
      case TypeTag::any: return "any";
      case TypeTag::var: {
        const auto& n = t.as<node::Var>()->name;
        for (std::size_t i = stack_.size(); i-- > 0;)
          if (stack_[i] == n) return "#" + std::to_string(stack_.size() - 1 - i);
        if (auto it = replace_.find(n); it != replace_.end()) return it->second;
        return "v:" + n;
      }
      case TypeTag::apply: {
        auto p = t.as<node::Apply>();
        return "app:" + p->constructor + (p->variadic ? "*" : "") + list(p->args);
      }
      case TypeTag::record: {
        auto r = t.as<node::Record>();
        std::string s = r->open ? "rec+(" : "rec(";
        for (const auto& f : r->fields) s += f.name + "=" + convert(f.type) + ";";
        return s + ")";
      }
      case TypeTag::product: return "prod" + list(t.as<node::Product>()->factors);
      case TypeTag::sum: {
        std::vector<std::string> alts;
        for (const auto& a : t.as<node::Sum>()->alternatives) alts.push_back(convert(a));
        std::sort(alts.begin(), alts.end());
        alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
        std::string s = "sum(";
        for (const auto& a : alts) s += a + ";";
        return s + ")";
      }
      case TypeTag::function: {
        auto f = t.as<node::Function>();
        return "fn(" + convert(f->domain) + ";" + convert(f->codomain) + ")";
      }
      case TypeTag::forall: {
        auto f = t.as<node::Forall>();
        for (const auto& v : f->vars) stack_.push_back(v);
        std::string s = "all" + std::to_string(f->vars.size()) + "(" + convert(f->body) + ")";
        stack_.resize(stack_.size() - f->vars.size());
        return s;
      }
      case TypeTag::exists: {
        auto e = t.as<node::Exists>();
        stack_.push_back(e->var);
        std::string bound = e->bound ? convert(*e->bound) : "a:ObjectET";
        std::string s = "ex(" + bound + ";" + convert(e->body) + ")";
        stack_.pop_back();
        return s;
      }
    }
    return "?";
  }

 private:
  std::string list(const std::vector<TypeExpr>& ts) {
    std::string s = "(";
    for (const auto& t : ts) s += convert(t) + ";";
    return s + ")";
  }

  std::map<std::string, std::string> replace_;
  std::vector<std::string> stack_;
};

inline std::string debruijn(const TypeExpr& t) { return DeBruijn().convert(t); }

/// debruijn(substitute(t, var, r)) computed without any renaming.
inline std::string debruijn_subst(const TypeExpr& t, const std::string& var, const TypeExpr& r) {
  std::map<std::string, std::string> replace{{var, debruijn(r)}};
  return DeBruijn(std::move(replace)).convert(t);
}

}  // namespace pyts::testing

#endif
