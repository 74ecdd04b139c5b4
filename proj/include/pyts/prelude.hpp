#ifndef PYTS_PRELUDE_HPP
#define PYTS_PRELUDE_HPP

// Built-in existential types: atomic and container types, ObjectET as the
// top, the GenericETn / ProtocolETn / TupleETn families and the meta-level
// TypeET. Signatures list only a few members and are all open.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pyts/type_env.hpp"
#include "pyts/type_parser.hpp"

namespace pyts {

enum class Family { generic, protocol, tuple };

struct FamilyIndex {
  Family family;
  int arity = 0;
};

namespace detail {

inline std::vector<std::string> numbered_params(int n) {
  std::vector<std::string> vars;
  for (int i = 1; i <= n; ++i) vars.push_back("T" + std::to_string(i));
  return vars;
}

inline TypeExpr quantify(std::vector<std::string> vars, TypeExpr body) {
  return vars.empty() ? body : make_forall(std::move(vars), std::move(body));
}

inline TypeExpr varargs_domain() {
  return parse_type("TupleET[ObjectET, ...] x DictET[StrET, ObjectET]");
}

}  // namespace detail

/// GenericETn (n >= 1), ProtocolETn (n >= 0) and TupleETn (n >= 0).
inline TypeExpr family_type(FamilyIndex index) {
  const int n = index.arity;
  if (n < 0) throw Error(ErrorCode::invalid_arity, "negative family arity");
  auto vars = detail::numbered_params(n);
  switch (index.family) {
    case Family::generic: {
      if (n == 0)
        throw Error(ErrorCode::invalid_arity, "GenericET needs at least one type parameter");
      std::vector<TypeExpr> typevars(n, make_atom("TypeVarET"));
      TypeExpr sig = make_record(
          {{"__parameters__", make_function(make_atom("NoneTypeET"),
                                            make_apply("TupleET", std::move(typevars)))}},
          true);
      return make_forall(std::move(vars), make_exists("G", make_atom("ObjectET"), sig));
    }
    case Family::protocol: {
      std::vector<TypeExpr> bound_args{make_var("P")};
      for (const auto& v : vars) bound_args.push_back(make_var(v));
      TypeExpr bound = make_apply("GenericET" + std::to_string(n + 1), std::move(bound_args));
      auto new_domain = detail::varargs_domain().as<node::Product>()->factors;
      new_domain.insert(new_domain.begin(), make_var("P"));
      TypeExpr sig = make_record(
          {
              {"__new__", make_function(make_product(std::move(new_domain)), make_atom("BottomET"))},
              {"_is_protocol", make_function(make_atom("NoneTypeET"), make_atom("BoolET"))},
              {"_is_runtime_protocol", make_function(make_atom("NoneTypeET"), make_atom("BoolET"))},
          },
          true);
      return detail::quantify(std::move(vars), make_exists("P", std::move(bound), sig));
    }
    case Family::tuple: {
      TypeExpr sig = parse_type("{__len__: TU -> IntET, ...}", {"TU"});
      return detail::quantify(std::move(vars), make_exists("TU", std::nullopt, sig));
    }
  }
  throw Error(ErrorCode::invalid_arity, "unknown family");
}

inline TypeExpr object_et() {
  return parse_type(
      "∃O.{__new__: TupleET[ObjectET, ...] x DictET[StrET, ObjectET] -> O, "
      "__init__: O x TupleET[ObjectET, ...] x DictET[StrET, ObjectET] -> O, ...}");
}

inline TypeExpr type_et() {
  return parse_type(
      "∃M<:ObjectET.{__new__: StrET x TupleET[TypeET, ...] x DictET[StrET, ObjectET] x "
      "DictET[StrET, ObjectET] -> M, ...}");
}

/// Canonical witnesses of TypeET: `type` and its subclasses.
inline std::vector<std::string> type_et_witnesses() { return {"type", "ABCMeta", "_ProtocolMeta"}; }

/// Python builtin class name to ET-name, or empty when it has none.
inline std::string builtin_et_name(std::string_view cls) {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"object", "ObjectET"},   {"bool", "BoolET"},       {"int", "IntET"},
      {"float", "FloatET"},     {"complex", "ComplexET"}, {"str", "StrET"},
      {"bytes", "BytesET"},     {"NoneType", "NoneTypeET"}, {"list", "ListET"},
      {"tuple", "TupleET"},     {"set", "SetET"},         {"frozenset", "FrozensetET"},
      {"dict", "DictET"},       {"bytearray", "BytearrayET"}, {"type", "TypeET"},
      {"TypeVar", "TypeVarET"},
  };
  auto it = table.find(cls);
  return it == table.end() ? std::string() : it->second;
}

/// ET-name for a class name: the builtin mapping, otherwise the name with
/// the `ET` suffix appended.
inline std::string et_name_for_class(std::string_view cls) {
  auto b = builtin_et_name(cls);
  return b.empty() ? std::string(cls) + "ET" : b;
}

namespace detail {

struct PreludeEntry {
  const char* class_name;
  const char* text;
};

// clang-format off
inline const std::vector<PreludeEntry>& prelude_entries() {
  static const std::vector<PreludeEntry> entries = {
    {"object",    "ObjectET = ∃O.{__new__: TupleET[ObjectET, ...] x DictET[StrET, ObjectET] -> O, "
                  "__init__: O x TupleET[ObjectET, ...] x DictET[StrET, ObjectET] -> O, ...}"},
    {"bool",      "BoolET = ∃B.{...}"},
    {"int",       "IntET = ∃IT.{__repr__: IT -> StrET, ...}"},
    {"float",     "FloatET = ∃F.{...}"},
    {"complex",   "ComplexET = ∃C.{...}"},
    {"str",       "StrET = ∃S.{__len__: S -> IntET, ...}"},
    {"bytes",     "BytesET = ∃BY.{...}"},
    {"",          "BottomET = ∃BO.{...}"},
    {"NoneType",  "NoneTypeET = ∃N.{...}"},
    {"list",      "ListET = ∀T.∃L.{__len__: L -> IntET, ...}"},
    {"set",       "SetET = ∀T.∃SE.{__len__: SE -> IntET, ...}"},
    {"frozenset", "FrozensetET = ∀T.∃FS.{__len__: FS -> IntET, ...}"},
    {"dict",      "DictET = ∀K,V.∃D.{__len__: D -> IntET, ...}"},
    {"tuple",     "TupleET = ∃TU.{__len__: TU -> IntET, ...}"},
    {"bytearray", "BytearrayET = ∃BA.{__len__: BA -> IntET, ...}"},
    {"TypeVar",   "TypeVarET = ∃TV<:ObjectET.{__name__: NoneTypeET -> StrET, ...}"},
    {"type",      "TypeET = ∃M<:ObjectET.{__new__: StrET x TupleET[TypeET, ...] x "
                  "DictET[StrET, ObjectET] x DictET[StrET, ObjectET] -> M, ...} is PyTS"},
  };
  return entries;
}
// clang-format on

inline std::optional<int> family_suffix(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix || name.size() == prefix.size()) return std::nullopt;
  auto digits = name.substr(prefix.size());
  int n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  if (digits.size() > 1 && digits.front() == '0') return std::nullopt;
  return n;
}

inline DefinitionPtr resolve_family(std::string_view name) {
  std::optional<FamilyIndex> index;
  const char* cls = "";
  if (auto n = family_suffix(name, "GenericET"); n && *n >= 1) {
    index = FamilyIndex{Family::generic, *n};
    cls = "Generic";
  } else if (auto m = family_suffix(name, "ProtocolET")) {
    index = FamilyIndex{Family::protocol, *m};
    cls = "Protocol";
  }
  if (!index) return nullptr;
  Definition d = definition_from_type(std::string(name), family_type(*index));
  d.builtin = true;
  d.class_name = cls;
  return std::make_shared<const Definition>(std::move(d));
}

}  // namespace detail

struct PreludeOptions {
  /// Nominal edges BoolET <: IntET <: FloatET <: ComplexET.
  bool numeric_tower = true;
};

inline TypeEnv prelude_env(const PreludeOptions& options = {}) {
  TypeEnv env;
  for (const auto& entry : detail::prelude_entries()) {
    Definition d = parse_definition(entry.text);
    d.builtin = true;
    d.class_name = entry.class_name;
    d.variadic_params = d.name == "TupleET";
    env.add(std::move(d));
  }
  env.set_family_resolver(detail::resolve_family);
  if (options.numeric_tower) {
    env.add_nominal_edge("BoolET", "IntET");
    env.add_nominal_edge("IntET", "FloatET");
    env.add_nominal_edge("FloatET", "ComplexET");
  }
  return env;
}

/// Pairs `Sub Base` of class names standing in for a static checker's
/// hardcoded subclass knowledge (`list Collection`).
struct VirtualTable {
  std::vector<std::pair<std::string, std::string>> edges;

  bool empty() const { return edges.empty(); }
};

inline VirtualTable parse_virtual_table(std::string_view text, std::string_view origin = "") {
  VirtualTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string sub, base, extra;
    if (!(fields >> sub)) continue;
    if (!(fields >> base) || (fields >> extra)) {
      throw syntax_error(SourceLoc{std::string(origin), lineno, 1},
                         "expected exactly two class names per line");
    }
    table.edges.emplace_back(std::move(sub), std::move(base));
  }
  return table;
}

inline VirtualTable load_virtual_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::usage, "cannot read virtual-subclass table '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_virtual_table(buf.str(), path);
}

/// Adds the table's pairs to `env` as nominal edges between ET-names.
inline void apply_virtual_table(TypeEnv& env, const VirtualTable& table) {
  for (const auto& [sub, base] : table.edges)
    env.add_nominal_edge(et_name_for_class(sub), et_name_for_class(base));
}

}  // namespace pyts

#endif
