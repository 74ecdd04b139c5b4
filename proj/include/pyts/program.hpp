#ifndef PYTS_PROGRAM_HPP
#define PYTS_PROGRAM_HPP

// A set of modules loaded together: parsed in parallel, then registered and
// elaborated one class at a time, bases first, into one environment layered
// over the prelude.

#include <future>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pyts/elaborate.hpp"
#include "pyts/frontend.hpp"
#include "pyts/stubs.hpp"

namespace pyts {

struct SourceFile {
  std::string path;
  std::string text;
};

struct ProgramOptions {
  PreludeOptions prelude;
  VirtualTable virtual_table;
  /// Make the typing stubs (SupportsInt, Sized, ...) available.
  bool include_stubs = true;
};

struct ProgramClass {
  ClassInfoPtr info;
  /// Null when elaboration failed; the reason is among the diagnostics.
  DefinitionPtr def;
  std::string module;
  bool from_stub = false;
};

struct Program {
  std::shared_ptr<const TypeEnv> prelude;
  TypeEnv env;
  ClassRegistry registry;
  VirtualTable virtual_table;
  std::map<std::string, ProgramClass, std::less<>> classes;
  /// Program classes in source order (stub classes last).
  std::vector<std::string> class_order;
  std::map<std::string, TypeExpr, std::less<>> functions;
  std::map<std::string, TypeExpr, std::less<>> variables;
  /// Variable and function names in source order.
  std::vector<std::string> value_order;
  std::vector<Registration> registrations;
  /// Names imported by any module.
  std::set<std::string, std::less<>> imported;
  std::vector<Diagnostic> diagnostics;

  bool has_errors() const {
    for (const auto& d : diagnostics)
      if (d.severity == Diagnostic::Severity::error) return true;
    return false;
  }

  const ProgramClass* find_class(std::string_view name) const {
    auto it = classes.find(name);
    return it == classes.end() ? nullptr : &it->second;
  }

  /// Classes the user wrote, in source order.
  std::vector<const ProgramClass*> user_classes() const {
    std::vector<const ProgramClass*> out;
    for (const auto& n : class_order) {
      const auto& c = classes.at(n);
      if (!c.from_stub) out.push_back(&c);
    }
    return out;
  }
};

namespace detail {

struct ParsedModule {
  std::string path;
  std::optional<ModuleInfo> info;
  std::optional<Diagnostic> failure;
};

inline ParsedModule parse_one(const SourceFile& f) {
  ParsedModule out;
  out.path = f.path;
  try {
    out.info = parse_module(f.text, f.path);
  } catch (const Error& e) {
    out.failure = Diagnostic{Diagnostic::Severity::error, std::string(to_string(e.code())),
                             e.loc().value_or(SourceLoc{f.path, 0, 0}), e.message()};
  }
  return out;
}

inline Diagnostic error_diagnostic(const Error& e, const SourceLoc& loc) {
  return Diagnostic{Diagnostic::Severity::error, std::string(to_string(e.code())), e.loc().value_or(loc),
                    e.message()};
}

class ProgramBuilder {
 public:
  ProgramBuilder(Program& p, const ProgramOptions& options) : p_(p), options_(options) {}

  void build(std::vector<ParsedModule> modules) {
    p_.virtual_table = options_.virtual_table;
    p_.prelude = std::make_shared<const TypeEnv>(prelude_env(options_.prelude));
    p_.env = TypeEnv::child_of(p_.prelude);
    p_.registry = builtin_registry();

    std::vector<const ModuleInfo*> user;
    for (auto& m : modules) {
      if (m.failure) p_.diagnostics.push_back(*m.failure);
      if (!m.info) continue;
      for (auto& w : m.info->warnings) p_.diagnostics.push_back(w);
      user.push_back(&*m.info);
    }
    std::optional<ModuleInfo> stubs;
    if (options_.include_stubs) stubs = parse_module(stub_source, std::string(stub_path));

    for (const auto* m : user) register_module(*m, false);
    if (stubs) register_module(*stubs, true);

    order_classes();
    decide_params();
    for (const auto* m : user) type_functions(*m);
    for (const auto& n : topo_) elaborate(n);
    for (const auto* m : user) type_variables(*m);
    apply_virtual_table(p_.env, options_.virtual_table);
    for (const auto* m : user) {
      for (const auto& r : m->registrations) p_.registrations.push_back(r);
      p_.imported.insert(m->imported.begin(), m->imported.end());
    }
  }

 private:
  void register_module(const ModuleInfo& m, bool stub) {
    std::set<std::string> tvs;
    for (const auto& tv : m.type_vars) tvs.insert(tv.name);
    for (const auto& c : m.classes) {
      if (auto existing = p_.find_class(c.name)) {
        if (stub) continue;
        p_.diagnostics.push_back({Diagnostic::Severity::error, "NameClash", c.loc,
                                  "class " + c.name + " is already defined in " + existing->module});
        continue;
      }
      if (p_.registry.contains(c.name) || !builtin_et_name(c.name).empty()) {
        if (stub) continue;
        p_.diagnostics.push_back({Diagnostic::Severity::error, "NameClash", c.loc,
                                  "class " + c.name + " shadows a built-in class"});
        continue;
      }
      p_.registry.add(c);
      p_.classes.emplace(c.name, ProgramClass{p_.registry.find(c.name), nullptr, m.path, stub});
      p_.class_order.push_back(c.name);
      type_vars_[c.name] = tvs;
    }
    for (const auto& f : m.functions) function_vars_[f.name] = tvs;
    for (const auto& v : m.variables) function_vars_[v.name] = tvs;
  }

  // Bases first; a class whose hierarchy cannot be linearized is reported
  // and left out together with its dependents.
  void order_classes() {
    std::set<std::string> done;
    for (const auto& n : p_.class_order) {
      const auto& pc = p_.classes.at(n);
      if (auto b = failed_base(*pc.info)) {
        p_.diagnostics.push_back({Diagnostic::Severity::error, "UnknownBase", pc.info->loc,
                                  n + ": base " + *b + " could not be elaborated"});
        failed_.insert(n);
        continue;
      }
      try {
        c3_linearize(n, p_.registry);
        effective_metaclass(n, p_.registry);
      } catch (const Error& e) {
        p_.diagnostics.push_back(error_diagnostic(e, pc.info->loc));
        failed_.insert(n);
      }
    }
    auto visit = [&](auto&& self, const std::string& n) -> void {
      if (!done.insert(n).second) return;
      const auto* pc = p_.find_class(n);
      if (!pc) return;
      for (const auto& b : pc->info->bases)
        if (!failed_.count(n)) self(self, b.name);
      topo_.push_back(n);
    };
    for (const auto& n : p_.class_order)
      if (!failed_.count(n)) visit(visit, n);
  }

  std::vector<std::string> params_of(std::string_view cls) const {
    if (auto it = params_.find(std::string(cls)); it != params_.end()) return it->second;
    if (auto d = p_.prelude->find(builtin_et_name(cls))) return d->params;
    return {};
  }

  void decide_params() {
    for (const auto& n : topo_) {
      const auto& info = *p_.classes.at(n).info;
      params_[n] = effective_params(info, type_vars_[n], [this](std::string_view b) { return params_of(b); });
    }
  }

  ClassLookup class_lookup() const {
    return [this](std::string_view n) -> std::optional<ClassSymbol> {
      auto it = params_.find(std::string(n));
      if (it == params_.end()) return std::nullopt;
      return ClassSymbol{et_name_for_class(n), it->second.size()};
    };
  }

  ValueContext value_context() const {
    ValueContext v;
    v.lookup_class = class_lookup();
    v.lookup_value = [this](std::string_view n) -> std::optional<TypeExpr> {
      if (auto it = p_.variables.find(n); it != p_.variables.end()) return it->second;
      if (auto it = p_.functions.find(n); it != p_.functions.end()) return it->second;
      return std::nullopt;
    };
    v.env = &p_.env;
    return v;
  }

  void type_functions(const ModuleInfo& m) {
    for (const auto& f : m.functions) {
      AnnotationContext ctx;
      ctx.lookup_class = class_lookup();
      ctx.type_vars = function_vars_[f.name];
      try {
        if (!p_.functions.count(f.name)) p_.value_order.push_back(f.name);
        p_.functions.insert_or_assign(f.name, elaborate_function(f, ctx));
      } catch (const Error& e) {
        p_.diagnostics.push_back(error_diagnostic(e, f.loc));
      }
    }
  }

  void type_variables(const ModuleInfo& m) {
    for (const auto& v : m.variables) {
      try {
        TypeExpr t;
        if (v.annotation) {
          AnnotationContext ctx;
          ctx.lookup_class = class_lookup();
          ctx.type_vars = function_vars_[v.name];
          t = annotation_to_type(*v.annotation, ctx);
        } else {
          t = type_of_value(*v.value, value_context());
        }
        if (!p_.variables.count(v.name)) p_.value_order.push_back(v.name);
        p_.variables.insert_or_assign(v.name, t);
      } catch (const Error& e) {
        p_.diagnostics.push_back(error_diagnostic(e, v.loc));
      }
    }
  }

  std::optional<std::string> failed_base(const ClassInfo& info) const {
    for (const auto& b : info.bases)
      if (failed_.count(b.name)) return b.name;
    return std::nullopt;
  }

  void elaborate(const std::string& n) {
    auto& pc = p_.classes.at(n);
    const auto& info = *pc.info;
    if (auto b = failed_base(info)) {
      p_.diagnostics.push_back({Diagnostic::Severity::error, "UnknownBase", info.loc,
                                n + ": base " + *b + " could not be elaborated"});
      failed_.insert(n);
      return;
    }
    ClassContext cc;
    cc.lookup_class = class_lookup();
    cc.module_type_vars = type_vars_[n];
    cc.params = params_[n];
    cc.values = value_context();
    try {
      Definition def = build_class_definition(info, p_.env, p_.registry, cc);
      std::string et = def.name;
      p_.env.add(std::move(def));
      pc.def = p_.env.lookup(et);
    } catch (const Error& e) {
      p_.diagnostics.push_back(error_diagnostic(e, info.loc));
      failed_.insert(n);
    }
  }

  Program& p_;
  const ProgramOptions& options_;
  std::map<std::string, std::set<std::string>> type_vars_;
  std::map<std::string, std::set<std::string>> function_vars_;
  std::map<std::string, std::vector<std::string>> params_;
  std::set<std::string> failed_;
  std::vector<std::string> topo_;
};

}  // namespace detail

/// Loads `files` as one program. Errors are collected as diagnostics
/// rather than thrown, so one bad class does not hide the rest.
inline Program load_program(const std::vector<SourceFile>& files, const ProgramOptions& options = {}) {
  std::vector<std::future<detail::ParsedModule>> pending;
  for (const auto& f : files) pending.push_back(std::async(std::launch::async, detail::parse_one, std::cref(f)));
  std::vector<detail::ParsedModule> modules;
  for (auto& f : pending) modules.push_back(f.get());
  Program p;
  detail::ProgramBuilder(p, options).build(std::move(modules));
  return p;
}

inline Program load_program_source(std::string_view source, std::string path = "<input>",
                                   const ProgramOptions& options = {}) {
  return load_program({SourceFile{std::move(path), std::string(source)}}, options);
}

}  // namespace pyts

#endif
