#ifndef PYTS_CLI_HPP
#define PYTS_CLI_HPP

// The command-line driver, independent of argument parsing so tests can
// call it directly.
//
// Exit status: 0 ok or conformant, 1 nonconformant or unexpected
// divergence, 2 usage error, 3 parse or elaboration error.

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pyts/oracle.hpp"

namespace pyts::cli {

enum class Command { elaborate, check, mro, relations, oracle_diff, dump_prelude };
enum class Format { text, json, dot };

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_parse = 3;

struct QuerySpec {
  Command command = Command::elaborate;
  std::vector<std::string> inputs;
  std::optional<std::string> subject;
  std::optional<std::string> target;
  /// Class for `mro`; every class when absent.
  std::optional<std::string> class_name;
  /// Default: dot for `relations`, text otherwise.
  std::optional<Format> format;
  std::optional<std::string> virtual_table_path;
  std::optional<std::string> oracle_path;
  bool numeric_tower = true;
};

inline std::optional<Command> parse_command(std::string_view s) {
  if (s == "elaborate") return Command::elaborate;
  if (s == "check") return Command::check;
  if (s == "mro") return Command::mro;
  if (s == "relations") return Command::relations;
  if (s == "oracle-diff") return Command::oracle_diff;
  if (s == "dump-prelude") return Command::dump_prelude;
  return std::nullopt;
}

inline std::optional<Format> parse_format(std::string_view s) {
  if (s == "text") return Format::text;
  if (s == "json") return Format::json;
  if (s == "dot") return Format::dot;
  return std::nullopt;
}

namespace detail {

class Runner {
 public:
  Runner(const QuerySpec& spec, std::ostream& out, std::ostream& err) : spec_(spec), out_(out), err_(err) {}

  int run() {
    if (auto problem = validate()) return usage(*problem);
    if (spec_.command == Command::dump_prelude) return dump_prelude();

    ProgramOptions options;
    options.prelude.numeric_tower = spec_.numeric_tower;
    std::vector<SourceFile> files;
    try {
      if (spec_.virtual_table_path) options.virtual_table = load_virtual_table(*spec_.virtual_table_path);
      for (const auto& path : spec_.inputs) files.push_back({path, read_file(path)});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::syntax_error) return report_error(e, exit_parse);
      return usage(e.message());
    }
    Program program = load_program(files, options);
    for (const auto& d : program.diagnostics) err_ << to_string(d) << "\n";
    if (program.has_errors()) return exit_parse;

    try {
      switch (spec_.command) {
        case Command::elaborate: return elaborate(program);
        case Command::check: return check(program);
        case Command::mro: return mro(program);
        case Command::relations: return relations(program);
        case Command::oracle_diff: return oracle(program);
        case Command::dump_prelude: break;
      }
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::unknown_name:
        case ErrorCode::not_an_interface:
        case ErrorCode::usage: return usage(e.message());
        default: return report_error(e, exit_parse);
      }
    }
    return exit_ok;
  }

 private:
  Format format() const {
    if (spec_.format) return *spec_.format;
    return spec_.command == Command::relations ? Format::dot : Format::text;
  }

  std::optional<std::string> validate() const {
    const bool needs_inputs = spec_.command != Command::dump_prelude;
    if (needs_inputs && spec_.inputs.empty()) return "at least one input file is required";
    if (spec_.command == Command::check && (!spec_.subject || !spec_.target))
      return "check requires --subject and --target";
    if (spec_.command == Command::oracle_diff && !spec_.oracle_path) return "oracle-diff requires --oracle";
    if (format() == Format::dot && spec_.command != Command::relations)
      return "--format dot is only available for relations";
    return std::nullopt;
  }

  int usage(const std::string& message) {
    err_ << "usage error: " << message << "\n";
    return exit_usage;
  }

  int report_error(const Error& e, int status) {
    err_ << "error: " << e.what() << "\n";
    return status;
  }

  static std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::usage, "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  void print_json(const json& j) { out_ << j.dump(2) << "\n"; }

  int dump_prelude() {
    PreludeOptions options;
    options.numeric_tower = spec_.numeric_tower;
    TypeEnv env = prelude_env(options);
    if (format() == Format::json) {
      json defs = json::array();
      for (const auto& d : env.own_definitions()) defs.push_back(to_json(*d));
      print_json({{"definitions", defs}});
    } else {
      for (const auto& d : env.own_definitions()) out_ << to_text(*d) << "\n";
    }
    return exit_ok;
  }

  int elaborate(const Program& p) {
    if (format() == Format::json) {
      json defs = json::array();
      for (const auto* c : p.user_classes()) defs.push_back(to_json(*c->def));
      json values = json::array();
      for (const auto& n : p.value_order) {
        bool fn = p.functions.count(n) && !p.variables.count(n);
        const TypeExpr& t = fn ? p.functions.find(n)->second : p.variables.find(n)->second;
        values.push_back({{"name", n}, {"kind", fn ? "function" : "variable"}, {"type", to_json(t)}, {"text", to_text(t)}});
      }
      json diags = json::array();
      for (const auto& d : p.diagnostics) diags.push_back(to_json(d));
      print_json({{"definitions", defs}, {"values", values}, {"diagnostics", diags}});
      return exit_ok;
    }
    for (const auto* c : p.user_classes()) out_ << to_text(*c->def) << "\n";
    for (const auto& n : p.value_order) {
      bool fn = p.functions.count(n) && !p.variables.count(n);
      out_ << n << " : " << to_text(fn ? p.functions.find(n)->second : p.variables.find(n)->second) << "\n";
    }
    return exit_ok;
  }

  int check(const Program& p) {
    ConformanceReport r = type_instance_of(*spec_.subject, *spec_.target, p.env);
    if (format() == Format::json) {
      print_json(to_json(r));
    } else {
      out_ << *spec_.subject << (r.verdict ? " is" : " is not") << " a type-instance of " << *spec_.target << "\n";
      for (const auto& m : r.members) {
        out_ << "  " << m.name << ": " << (m.compatible ? "ok" : m.actual ? "incompatible" : "missing") << "\n";
        out_ << "    expected: " << to_text(m.expected) << "\n";
        if (m.actual) out_ << "    actual:   " << to_text(*m.actual) << "\n";
        if (!m.compatible) out_ << "    " << m.reason << "\n";
      }
    }
    return r.verdict ? exit_ok : exit_failed;
  }

  int mro(const Program& p) {
    std::vector<std::string> names;
    if (spec_.class_name) {
      if (!p.registry.contains(*spec_.class_name))
        throw Error(ErrorCode::unknown_name, "no class named '" + *spec_.class_name + "'");
      names.push_back(*spec_.class_name);
    } else {
      for (const auto* c : p.user_classes()) names.push_back(c->info->name);
    }
    if (format() == Format::json) {
      json out = json::array();
      for (const auto& n : names) out.push_back({{"class", n}, {"mro", c3_linearize(n, p.registry)}});
      print_json(out);
    } else {
      for (const auto& n : names) out_ << pyts::detail::join(c3_linearize(n, p.registry), " -> ") << "\n";
    }
    return exit_ok;
  }

  int relations(const Program& p) {
    RelationGraph g = relations_graph(p);
    for (const auto& d : g.diagnostics) err_ << to_string(d) << "\n";
    switch (format()) {
      case Format::dot: out_ << to_dot(g, p); break;
      case Format::json: {
        json edges = json::array();
        for (const auto& e : g.edges) edges.push_back(to_json(e));
        print_json(edges);
        break;
      }
      case Format::text:
        for (const auto& e : g.edges) out_ << e.from << " " << to_string(e.kind) << " " << e.to << "\n";
        break;
    }
    return exit_ok;
  }

  int oracle(const Program& p) {
    OracleDiff diff = oracle_diff(p, load_oracle(*spec_.oracle_path));
    if (format() == Format::json) {
      print_json(to_json(diff));
    } else {
      for (const auto& d : diff.divergences) {
        out_ << (d.expected() ? "expected" : "UNEXPECTED") << " [" << d.category << "] " << d.aspect << " " << d.sub;
        if (!d.sup.empty()) out_ << " <: " << d.sup;
        out_ << ": runtime " << d.runtime << ", static " << d.static_side << "\n";
      }
      for (const auto& s : diff.skipped) out_ << "skipped " << s << " (not defined by the inputs)\n";
      out_ << diff.divergences.size() << " divergence(s), " << diff.unexpected << " unexpected\n";
    }
    return diff.unexpected ? exit_failed : exit_ok;
  }

  const QuerySpec& spec_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace detail

inline int run(const QuerySpec& spec, std::ostream& out, std::ostream& err) {
  return detail::Runner(spec, out, err).run();
}

}  // namespace pyts::cli

#endif
