#ifndef PYTS_CONFORMANCE_HPP
#define PYTS_CONFORMANCE_HPP

// type-instance-of with member-level diagnostics, and the graph of the
// three class relations (subclass-of, object-instance-of, type-instance-of).

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "pyts/program.hpp"
#include "pyts/subtype.hpp"

namespace pyts {

struct MemberReport {
  std::string name;
  TypeExpr expected;
  std::optional<TypeExpr> actual;
  bool compatible = false;
  /// Empty when compatible; otherwise names the failing position.
  std::string reason;
};

struct ConformanceReport {
  std::string subject;
  std::string target;
  bool verdict = false;
  std::vector<MemberReport> members;
};

/// Variable standing for the hidden representation in both signatures.
inline constexpr const char* shared_self = "Self";

namespace detail {

inline const Derivation* first_failure(const Derivation& d) {
  for (const auto& p : d.premises)
    if (!p.verdict) return &p;
  return nullptr;
}

inline bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

// Finds the failing position below a member derivation: the function node
// (under quantifiers), then its domain factor or codomain.
inline std::string failure_reason(const Derivation& d) {
  const Derivation* cur = &d;
  while (cur->rule == "forall" || cur->rule == "unfold") {
    const Derivation* next = first_failure(*cur);
    if (!next) break;
    cur = next;
  }
  if (cur->rule == "function") {
    const Derivation* f = first_failure(*cur);
    if (f && f->label == "codomain")
      return "return: " + to_text(f->lhs) + " is not a subtype of " + to_text(f->rhs);
    if (f && f->label == "domain") {
      // The domain is compared contravariantly: expected <: actual.
      if (f->rule == "product") {
        if (const Derivation* g = first_failure(*f); g && starts_with(g->label, "factor ")) {
          return "parameter " + g->label.substr(7) + ": " + to_text(g->lhs) + " is not a subtype of " +
                 to_text(g->rhs);
        }
      }
      if (f->lhs.is<node::Product>() || f->rhs.is<node::Product>())
        return "parameters: " + (f->reason.empty() ? std::string("parameter lists differ") : f->reason);
      return "parameter 0: " + to_text(f->lhs) + " is not a subtype of " + to_text(f->rhs);
    }
  }
  return cur->reason.empty() ? to_text(d.lhs) + " is not a subtype of " + to_text(d.rhs) : cur->reason;
}

// A name given as a class name or as an ET-name, possibly applied.
inline TypeExpr resolve_named(const TypeExpr& t, const TypeEnv& env) {
  auto fix = [&](const std::string& n) {
    if (env.contains(n)) return n;
    std::string et = et_name_for_class(n);
    if (env.contains(et)) return et;
    throw Error(ErrorCode::unknown_name, "'" + n + "' names no class or type");
  };
  if (auto a = t.as<node::Atom>()) return make_atom(fix(a->name));
  if (auto p = t.as<node::Apply>()) {
    std::vector<TypeExpr> args;
    for (const auto& x : p->args) args.push_back(resolve_named(x, env));
    return p->variadic ? make_variadic(fix(p->constructor), args.front()) : make_apply(fix(p->constructor), args);
  }
  return t;
}

}  // namespace detail

/// Reads `Name` or `Name[Arg, ...]` where names are class names or ET-names.
inline TypeExpr resolve_type_name(std::string_view text, const TypeEnv& env) {
  TypeExpr t;
  try {
    t = parse_type(text);
  } catch (const Error&) {
    throw Error(ErrorCode::unknown_name, "'" + std::string(text) + "' is not a type name");
  }
  if (!head_name(t)) throw Error(ErrorCode::unknown_name, "'" + std::string(text) + "' is not a type name");
  return detail::resolve_named(t, env);
}

/// Does `subject` structurally satisfy the contract of `target`? Both
/// signatures are rewritten onto one shared self variable, then every
/// member `target` requires is looked up in `subject` and compared.
inline ConformanceReport type_instance_of(const TypeExpr& subject, const TypeExpr& target, const TypeEnv& env) {
  auto subject_head = head_name(subject);
  auto target_head = head_name(target);
  if (!subject_head || !target_head) throw Error(ErrorCode::invalid_type, "type_instance_of needs named types");
  auto subject_def = env.lookup(*subject_head);
  auto target_def = env.lookup(*target_head);
  if (target_def->is_meta || (target_def->builtin && target_def->interface == InterfaceKind::none &&
                              target_def->class_name != "Protocol" && target_def->class_name != "Generic")) {
    throw Error(ErrorCode::not_an_interface, *target_head + " is a nominal built-in type, not a contract");
  }
  (void)subject_def;

  ConformanceReport report;
  report.subject = to_text(subject);
  report.target = to_text(target);
  const TypeExpr self = make_var(shared_self);
  auto expected = interface_members(target, env, self);
  auto actual = collect_members(subject, env, self);
  Assumptions as{{shared_self, subject}};
  SubtypeChecker checker(env);
  report.verdict = true;
  for (const auto& [name, want] : expected) {
    MemberReport m;
    m.name = name;
    m.expected = want;
    auto it = actual.find(name);
    if (it == actual.end()) {
      m.reason = "missing member " + name;
    } else {
      m.actual = it->second;
      Derivation d = checker.check(it->second, want, as);
      m.compatible = d.verdict;
      if (!d.verdict) m.reason = detail::failure_reason(d);
    }
    report.verdict = report.verdict && m.compatible;
    report.members.push_back(std::move(m));
  }
  return report;
}

inline ConformanceReport type_instance_of(std::string_view subject, std::string_view target, const TypeEnv& env) {
  return type_instance_of(resolve_type_name(subject, env), resolve_type_name(target, env), env);
}

// ---- relations ------------------------------------------------------------

enum class RelationKind { subclass_of, object_instance_of, type_instance_of };

inline std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::subclass_of: return "subclass-of";
    case RelationKind::object_instance_of: return "object-instance-of";
    case RelationKind::type_instance_of: return "type-instance-of";
  }
  return "subclass-of";
}

/// An edge between two classes, by class name.
struct RelationEdge {
  std::string from;
  std::string to;
  RelationKind kind = RelationKind::subclass_of;

  bool operator==(const RelationEdge& o) const { return from == o.from && to == o.to && kind == o.kind; }
};

struct RelationGraph {
  std::vector<RelationEdge> edges;
  /// Problems met while relating individual classes.
  std::vector<Diagnostic> diagnostics;
};

namespace detail {

inline bool is_interface_class(const ClassInfo& c) { return c.kind != ClassKind::plain; }

inline std::vector<const ProgramClass*> relation_interfaces(const Program& p) {
  std::vector<const ProgramClass*> out;
  for (const auto& n : p.class_order) {
    const auto& c = p.classes.at(n);
    if (!c.def || !is_interface_class(*c.info)) continue;
    if (c.from_stub && !p.imported.count(n) && !p.imported.count("*")) continue;
    out.push_back(&c);
  }
  return out;
}

}  // namespace detail

/// Edges among the program's classes: each direct base (`object` when none
/// is written), each metaclass, and each satisfied protocol or ABC contract
/// that inheritance does not already account for.
inline RelationGraph relations_graph(const Program& p) {
  RelationGraph g;
  const auto interfaces = detail::relation_interfaces(p);
  for (const auto* c : p.user_classes()) {
    const auto& info = *c->info;
    if (info.bases.empty()) g.edges.push_back({info.name, "object", RelationKind::subclass_of});
    for (const auto& b : info.bases) g.edges.push_back({info.name, b.name, RelationKind::subclass_of});
    try {
      g.edges.push_back({info.name, effective_metaclass(info.name, p.registry), RelationKind::object_instance_of});
    } catch (const Error& e) {
      g.diagnostics.push_back(detail::error_diagnostic(e, info.loc));
      continue;
    }
    if (!c->def) continue;
    for (const auto* target : interfaces) {
      const auto& tname = target->info->name;
      if (tname == info.name) continue;
      try {
        if (subclass_of(info.name, tname, p.registry, p.virtual_table)) continue;
        auto report = type_instance_of(make_atom(c->def->name), make_atom(target->def->name), p.env);
        if (report.verdict) g.edges.push_back({info.name, tname, RelationKind::type_instance_of});
      } catch (const Error& e) {
        g.diagnostics.push_back(detail::error_diagnostic(e, info.loc));
      }
    }
  }
  return g;
}

/// Graphviz rendering: solid subclass-of, dashed object-instance-of and
/// dotted type-instance-of edges; metaclasses as plain boxes, other
/// instantiable classes as rounded boxes, protocols and ABCs as ellipses.
inline std::string to_dot(const RelationGraph& g, const Program& p) {
  std::vector<std::string> nodes;
  auto note = [&](const std::string& n) {
    if (std::find(nodes.begin(), nodes.end(), n) == nodes.end()) nodes.push_back(n);
  };
  for (const auto& e : g.edges) {
    note(e.from);
    note(e.to);
  }
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::string out = "digraph relations {\n  rankdir=BT;\n";
  for (const auto& n : nodes) {
    std::string shape = "shape=box, style=rounded";
    auto info = p.registry.find(n);
    if (info && detail::is_interface_class(*info)) {
      shape = "shape=ellipse";
    } else if (info) {
      try {
        if (subclass_of(n, "type", p.registry)) shape = "shape=box";
      } catch (const Error&) {
      }
    }
    out += "  " + quote(n) + " [" + shape + "];\n";
  }
  for (const auto& e : g.edges) {
    const char* style = e.kind == RelationKind::subclass_of          ? "solid"
                        : e.kind == RelationKind::object_instance_of ? "dashed"
                                                                     : "dotted";
    out += "  " + quote(e.from) + " -> " + quote(e.to) + " [style=" + style + ", label=\"" +
           std::string(to_string(e.kind)) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace pyts

#endif
