#ifndef PYTS_ORACLE_HPP
#define PYTS_ORACLE_HPP

// Runtime ground truth (issubclass results, MROs and metaclasses recorded
// by running the corpus under CPython) compared with the static verdicts.
//
// Some disagreements are inherent and reported as expected:
//   presence-only           runtime protocol checks look only at member names
//   virtual-registration    Base.register(Sub) is invisible statically
//   subclass-hook           __subclasshook__ logic is not simulated
//   not-runtime-checkable   the runtime refuses the check altogether
// Everything else is unexpected.

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pyts/json_io.hpp"

namespace pyts {

struct OracleClass {
  std::string name;
  std::vector<std::string> mro;
  std::string metaclass;
};

/// true, false, or the name of the exception the check raised.
struct OracleResult {
  std::variant<bool, std::string> value;

  bool is_error() const { return std::holds_alternative<std::string>(value); }
  bool truth() const { return !is_error() && std::get<bool>(value); }
  std::string text() const {
    if (is_error()) return "error:" + std::get<std::string>(value);
    return truth() ? "true" : "false";
  }
};

struct OracleCheck {
  std::string sub;
  std::string sup;
  OracleResult result;
};

struct OracleInstanceCheck {
  std::string value_expr;
  std::string target;
  OracleResult result;
};

struct OracleRecord {
  std::vector<OracleClass> classes;
  std::vector<OracleCheck> subclass_checks;
  std::vector<OracleInstanceCheck> instance_checks;
};

namespace detail {

inline OracleResult oracle_result(const json& j) {
  if (j.is_boolean()) return {j.get<bool>()};
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.rfind("error:", 0) == 0) return {s.substr(6)};
  }
  throw Error(ErrorCode::invalid_type, "oracle result must be a boolean or \"error:<Name>\"");
}

}  // namespace detail

inline OracleRecord parse_oracle(std::string_view text) {
  OracleRecord r;
  try {
    json j = json::parse(text);
    for (const auto& c : j.at("classes"))
      r.classes.push_back({c.at("name").get<std::string>(), c.at("mro").get<std::vector<std::string>>(),
                           c.at("metaclass").get<std::string>()});
    for (const auto& c : j.at("subclass_checks"))
      r.subclass_checks.push_back(
          {c.at("sub").get<std::string>(), c.at("sup").get<std::string>(), detail::oracle_result(c.at("result"))});
    if (j.contains("instance_checks")) {
      for (const auto& c : j.at("instance_checks"))
        r.instance_checks.push_back({c.at("value_expr").get<std::string>(), c.at("target").get<std::string>(),
                                     detail::oracle_result(c.at("result"))});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::usage, std::string("malformed oracle JSON: ") + e.what());
  }
  return r;
}

inline OracleRecord load_oracle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::usage, "cannot read oracle file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_oracle(buf.str());
}

struct Divergence {
  std::string sub;
  std::string sup;
  /// "mro", "metaclass" or "subclass".
  std::string aspect;
  std::string runtime;
  std::string static_side;
  /// One of the expected categories, or "unexpected".
  std::string category;

  bool expected() const { return category != "unexpected"; }
};

struct OracleDiff {
  std::vector<Divergence> divergences;
  std::size_t unexpected = 0;
  /// Checks naming classes the program does not define.
  std::vector<std::string> skipped;
};

namespace detail {

inline std::string join(const std::vector<std::string>& xs, std::string_view sep) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : std::string(sep)) + x;
  return out;
}

inline bool registered_below(const Program& p, const std::string& sub, const std::string& sup) {
  for (const auto& r : p.registrations) {
    if (!p.registry.contains(r.sub) || !p.registry.contains(r.base)) continue;
    if (subclass_of(sub, r.sub, p.registry) && subclass_of(r.base, sup, p.registry)) return true;
  }
  return false;
}

inline bool defines_subclass_hook(const Program& p, const std::string& cls) {
  for (const auto& n : c3_linearize(cls, p.registry)) {
    auto info = p.registry.find(n);
    if (info && !info->builtin && info->find_member("__subclasshook__")) return true;
  }
  return false;
}

}  // namespace detail

/// The static answer to `issubclass(sub, sup)`: inheritance (with the
/// virtual-subclass table), plus structural conformance for protocols.
inline bool static_subclass_verdict(const Program& p, const std::string& sub, const std::string& sup) {
  if (subclass_of(sub, sup, p.registry, p.virtual_table)) return true;
  auto target = p.find_class(sup);
  auto subject = p.find_class(sub);
  if (target && subject && target->def && subject->def && target->info->kind == ClassKind::protocol)
    return type_instance_of(make_atom(subject->def->name), make_atom(target->def->name), p.env).verdict;
  return false;
}

inline OracleDiff oracle_diff(const Program& p, const OracleRecord& oracle) {
  OracleDiff diff;
  auto add = [&](Divergence d) {
    if (!d.expected()) ++diff.unexpected;
    diff.divergences.push_back(std::move(d));
  };
  for (const auto& c : oracle.classes) {
    if (!p.registry.contains(c.name)) {
      diff.skipped.push_back(c.name);
      continue;
    }
    std::vector<std::string> mro;
    std::string meta;
    try {
      mro = c3_linearize(c.name, p.registry);
      meta = effective_metaclass(c.name, p.registry);
    } catch (const Error& e) {
      add({c.name, "", "mro", detail::join(c.mro, " -> "), "error:" + std::string(to_string(e.code())), "unexpected"});
      continue;
    }
    if (mro != c.mro) add({c.name, "", "mro", detail::join(c.mro, " -> "), detail::join(mro, " -> "), "unexpected"});
    if (meta != c.metaclass) add({c.name, "", "metaclass", c.metaclass, meta, "unexpected"});
  }
  for (const auto& chk : oracle.subclass_checks) {
    if (!p.registry.contains(chk.sub) || !p.registry.contains(chk.sup)) {
      diff.skipped.push_back(chk.sub + " <: " + chk.sup);
      continue;
    }
    bool stat = false;
    std::string stat_text;
    try {
      stat = static_subclass_verdict(p, chk.sub, chk.sup);
      stat_text = stat ? "true" : "false";
    } catch (const Error& e) {
      stat_text = "error:" + std::string(to_string(e.code()));
    }
    const std::string rt = chk.result.text();
    if (rt == stat_text) continue;
    auto target = p.registry.find(chk.sup);
    std::string category = "unexpected";
    if (chk.result.is_error()) {
      if (target->kind == ClassKind::protocol && !target->runtime_checkable) category = "not-runtime-checkable";
    } else if (chk.result.truth() && stat_text == "false") {
      if (target->kind == ClassKind::protocol && target->runtime_checkable) category = "presence-only";
      else if (detail::registered_below(p, chk.sub, chk.sup)) category = "virtual-registration";
      else if (detail::defines_subclass_hook(p, chk.sup)) category = "subclass-hook";
    }
    add({chk.sub, chk.sup, "subclass", rt, stat_text, category});
  }
  return diff;
}

inline json to_json(const Divergence& d) {
  json j = {{"aspect", d.aspect}, {"sub", d.sub}};
  j["sup"] = d.sup.empty() ? json(nullptr) : json(d.sup);
  j["runtime"] = d.runtime;
  j["static"] = d.static_side;
  j["category"] = d.category;
  j["expected"] = d.expected();
  return j;
}

inline json to_json(const OracleDiff& diff) {
  json ds = json::array();
  for (const auto& d : diff.divergences) ds.push_back(to_json(d));
  return {{"divergences", ds}, {"unexpected", diff.unexpected}, {"skipped", diff.skipped}};
}

}  // namespace pyts

#endif
