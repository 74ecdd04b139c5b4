#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "pyts/cli.hpp"

int main(int argc, char** argv) {
  using pyts::cli::QuerySpec;
  QuerySpec spec;
  std::string format;
  std::string virtual_table;
  bool no_numeric_tower = false;

  CLI::App app{"Existential-type checker for Python class hierarchies"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub, bool with_inputs) {
    if (with_inputs) sub->add_option("inputs", spec.inputs, "Python source files")->check(CLI::ExistingFile);
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("--virtual-table", virtual_table, "File of 'Sub Base' virtual-subclass pairs")
        ->envname("PYTS_VIRTUAL_TABLE");
    sub->add_flag("--no-numeric-tower", no_numeric_tower, "Drop the bool <: int <: float <: complex edges");
  };

  auto* elaborate = app.add_subcommand("elaborate", "Print the existential types of the classes and values");
  common(elaborate, true);
  auto* check = app.add_subcommand("check", "Check that one class structurally satisfies another's contract");
  common(check, true);
  check->add_option("--subject", spec.subject, "Class or type being checked")->required();
  check->add_option("--target", spec.target, "Protocol, ABC or class whose contract is checked")->required();
  auto* mro = app.add_subcommand("mro", "Print C3 method resolution orders");
  common(mro, true);
  mro->add_option("--class", spec.class_name, "Only this class");
  auto* relations = app.add_subcommand("relations", "Print the subclass/instance/type-instance graph");
  common(relations, true);
  auto* oracle = app.add_subcommand("oracle-diff", "Compare static verdicts with recorded runtime results");
  common(oracle, true);
  oracle->add_option("--oracle", spec.oracle_path, "Runtime oracle JSON")->required()->check(CLI::ExistingFile);
  auto* prelude = app.add_subcommand("dump-prelude", "Print the built-in types");
  common(prelude, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : pyts::cli::exit_usage;
  }

  auto* chosen = app.get_subcommands().front();
  spec.command = *pyts::cli::parse_command(chosen->get_name());
  if (!format.empty()) spec.format = pyts::cli::parse_format(format);
  if (!virtual_table.empty()) spec.virtual_table_path = virtual_table;
  spec.numeric_tower = !no_numeric_tower;
  return pyts::cli::run(spec, std::cout, std::cerr);
}
