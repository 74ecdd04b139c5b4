#ifndef PYTS_RENDER_HPP
#define PYTS_RENDER_HPP

// Canonical text rendering of type expressions.
//
//   atoms and variables verbatim, `Any` for the wildcard
//   `∀T1,T2.body`  `∃X.body`  `∃X<:Bound.body`
//   `{name: type, ...}`   (`...` marks an open record)
//   `A -> B` (right associative)  `A x B`  `A + B`
//   `Name[A, B]`  `Name[A, ...]`
//
// Binding strength, loosest first: quantifiers, `->`, `+`, `x`.

#include <sstream>
#include <string>

#include "pyts/type_expr.hpp"

namespace pyts {

namespace detail {

enum Prec { prec_quant = 0, prec_function = 1, prec_sum = 2, prec_product = 3, prec_primary = 4 };

inline int precedence(const TypeExpr& t) {
  switch (t.tag()) {
    case TypeTag::forall:
    case TypeTag::exists: return prec_quant;
    case TypeTag::function: return prec_function;
    case TypeTag::sum: return prec_sum;
    case TypeTag::product: return prec_product;
    default: return prec_primary;
  }
}

inline void render(std::ostream& os, const TypeExpr& t, int min_prec);

inline void render_at(std::ostream& os, const TypeExpr& t, int min_prec) {
  if (precedence(t) < min_prec) {
    os << '(';
    render(os, t, prec_quant);
    os << ')';
  } else {
    render(os, t, min_prec);
  }
}

inline void render(std::ostream& os, const TypeExpr& t, int) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Atom> || std::is_same_v<N, node::Var>) {
          os << n.name;
        } else if constexpr (std::is_same_v<N, node::Any>) {
          os << "Any";
        } else if constexpr (std::is_same_v<N, node::Apply>) {
          os << n.constructor << '[';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) os << ", ";
            render_at(os, n.args[i], prec_quant);
          }
          if (n.variadic) os << ", ...";
          os << ']';
        } else if constexpr (std::is_same_v<N, node::Record>) {
          os << '{';
          bool first = true;
          for (const auto& f : n.fields) {
            if (!first) os << ", ";
            first = false;
            os << f.name << ": ";
            render_at(os, f.type, prec_quant);
          }
          if (n.open) os << (first ? "..." : ", ...");
          os << '}';
        } else if constexpr (std::is_same_v<N, node::Product>) {
          for (std::size_t i = 0; i < n.factors.size(); ++i) {
            if (i) os << " x ";
            render_at(os, n.factors[i], prec_primary);
          }
        } else if constexpr (std::is_same_v<N, node::Sum>) {
          for (std::size_t i = 0; i < n.alternatives.size(); ++i) {
            if (i) os << " + ";
            render_at(os, n.alternatives[i], prec_product);
          }
        } else if constexpr (std::is_same_v<N, node::Function>) {
          render_at(os, n.domain, prec_sum);
          os << " -> ";
          render_at(os, n.codomain, prec_function);
        } else if constexpr (std::is_same_v<N, node::Forall>) {
          os << "∀";
          for (std::size_t i = 0; i < n.vars.size(); ++i) os << (i ? "," : "") << n.vars[i];
          os << '.';
          render(os, n.body, prec_quant);
        } else if constexpr (std::is_same_v<N, node::Exists>) {
          os << "∃" << n.var;
          if (n.bound) {
            os << "<:";
            render_at(os, *n.bound, prec_sum);
          }
          os << '.';
          render(os, n.body, prec_quant);
        }
      },
      t.node().value);
}

}  // namespace detail

inline std::string to_text(const TypeExpr& t) {
  std::ostringstream os;
  detail::render(os, t, detail::prec_quant);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const TypeExpr& t) {
  detail::render(os, t, detail::prec_quant);
  return os;
}

}  // namespace pyts

#endif
