#ifndef PYTS_JSON_IO_HPP
#define PYTS_JSON_IO_HPP

// JSON tree encoding of type expressions and of the engine's results.
// Shapes are described by the schemas under schemas/.

#include <nlohmann/json.hpp>

#include "pyts/conformance.hpp"

namespace pyts {

using json = nlohmann::ordered_json;

inline json to_json(const TypeExpr& t) {
  return std::visit(
      [&](const auto& n) -> json {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Atom>) {
          return {{"tag", "atom"}, {"name", n.name}};
        } else if constexpr (std::is_same_v<N, node::Var>) {
          return {{"tag", "var"}, {"name", n.name}};
        } else if constexpr (std::is_same_v<N, node::Apply>) {
          json args = json::array();
          for (const auto& a : n.args) args.push_back(to_json(a));
          return {{"tag", "apply"}, {"constructor", n.constructor}, {"args", args}, {"variadic", n.variadic}};
        } else if constexpr (std::is_same_v<N, node::Record>) {
          json fields = json::array();
          for (const auto& f : n.fields) fields.push_back({{"name", f.name}, {"type", to_json(f.type)}});
          return {{"tag", "record"}, {"fields", fields}, {"open", n.open}};
        } else if constexpr (std::is_same_v<N, node::Product>) {
          json fs = json::array();
          for (const auto& f : n.factors) fs.push_back(to_json(f));
          return {{"tag", "product"}, {"factors", fs}};
        } else if constexpr (std::is_same_v<N, node::Sum>) {
          json alts = json::array();
          for (const auto& a : n.alternatives) alts.push_back(to_json(a));
          return {{"tag", "sum"}, {"alternatives", alts}};
        } else if constexpr (std::is_same_v<N, node::Function>) {
          return {{"tag", "function"}, {"domain", to_json(n.domain)}, {"codomain", to_json(n.codomain)}};
        } else if constexpr (std::is_same_v<N, node::Forall>) {
          return {{"tag", "forall"}, {"vars", n.vars}, {"body", to_json(n.body)}};
        } else if constexpr (std::is_same_v<N, node::Exists>) {
          json j = {{"tag", "exists"}, {"var", n.var}};
          j["bound"] = n.bound ? to_json(*n.bound) : json(nullptr);
          j["body"] = to_json(n.body);
          return j;
        } else {
          return {{"tag", "any"}};
        }
      },
      t.node().value);
}

inline TypeExpr type_from_json(const json& j) {
  try {
    const std::string tag = j.at("tag").get<std::string>();
    auto all = [](const json& arr) {
      std::vector<TypeExpr> out;
      for (const auto& x : arr) out.push_back(type_from_json(x));
      return out;
    };
    if (tag == "atom") return make_atom(j.at("name").get<std::string>());
    if (tag == "var") return make_var(j.at("name").get<std::string>());
    if (tag == "any") return make_any();
    if (tag == "apply") {
      auto args = all(j.at("args"));
      if (j.value("variadic", false)) {
        if (args.size() != 1) throw Error(ErrorCode::invalid_type, "variadic application needs one element type");
        return make_variadic(j.at("constructor").get<std::string>(), args.front());
      }
      return make_apply(j.at("constructor").get<std::string>(), std::move(args));
    }
    if (tag == "record") {
      std::vector<node::Field> fields;
      for (const auto& f : j.at("fields")) fields.push_back({f.at("name").get<std::string>(), type_from_json(f.at("type"))});
      return make_record(std::move(fields), j.value("open", true));
    }
    if (tag == "product") return make_product(all(j.at("factors")));
    if (tag == "sum") return make_sum(all(j.at("alternatives")));
    if (tag == "function") return make_function(type_from_json(j.at("domain")), type_from_json(j.at("codomain")));
    if (tag == "forall") return make_forall(j.at("vars").get<std::vector<std::string>>(), type_from_json(j.at("body")));
    if (tag == "exists") {
      std::optional<TypeExpr> bound;
      if (j.contains("bound") && !j.at("bound").is_null()) bound = type_from_json(j.at("bound"));
      return make_exists(j.at("var").get<std::string>(), std::move(bound), type_from_json(j.at("body")));
    }
    throw Error(ErrorCode::invalid_type, "unknown type tag '" + tag + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_type, std::string("malformed type JSON: ") + e.what());
  }
}

inline std::string_view to_string(InterfaceKind k) {
  switch (k) {
    case InterfaceKind::none: return "none";
    case InterfaceKind::protocol: return "protocol";
    case InterfaceKind::abc: return "abc";
  }
  return "none";
}

inline json to_json(const Definition& d) {
  json j;
  j["name"] = d.name;
  j["class"] = d.class_name.empty() ? json(nullptr) : json(d.class_name);
  j["params"] = d.params;
  j["self_var"] = d.self_var;
  j["bound"] = d.bound ? to_json(*d.bound) : json(nullptr);
  j["signature"] = to_json(d.signature);
  j["is_meta"] = d.is_meta;
  j["interface"] = std::string(to_string(d.interface));
  json required = json::array();
  for (const auto& m : d.required_members)
    if (!m.empty()) required.push_back(m);
  j["required_members"] = required;
  j["text"] = to_text(d);
  return j;
}

inline json to_json(const ConformanceReport& r) {
  json members = json::array();
  for (const auto& m : r.members) {
    members.push_back({{"name", m.name},
                       {"expected", to_text(m.expected)},
                       {"actual", m.actual ? json(to_text(*m.actual)) : json(nullptr)},
                       {"compatible", m.compatible},
                       {"reason", m.reason}});
  }
  return {{"subject", r.subject}, {"target", r.target}, {"verdict", r.verdict}, {"members", members}};
}

inline json to_json(const RelationEdge& e) {
  return {{"from", e.from}, {"to", e.to}, {"kind", std::string(to_string(e.kind))}};
}

inline json to_json(const Derivation& d) {
  json premises = json::array();
  for (const auto& p : d.premises) premises.push_back(to_json(p));
  json j = {{"verdict", d.verdict}, {"rule", d.rule}, {"lhs", to_text(d.lhs)}, {"rhs", to_text(d.rhs)}};
  if (!d.label.empty()) j["label"] = d.label;
  if (!d.reason.empty()) j["reason"] = d.reason;
  j["premises"] = premises;
  return j;
}

inline json to_json(const Diagnostic& d) {
  return {{"severity", d.severity == Diagnostic::Severity::warning ? "warning" : "error"},
          {"code", d.code},
          {"file", d.loc.file},
          {"line", d.loc.line},
          {"column", d.loc.column},
          {"message", d.message}};
}

}  // namespace pyts

#endif
