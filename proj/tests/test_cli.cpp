#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "pyts/cli.hpp"
#include "support/corpus.hpp"

using namespace pyts;
using pyts::testing::corpus_path;
using pyts::testing::source_path;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(cli::QuerySpec spec) {
  std::ostringstream out, err;
  int status = cli::run(spec, out, err);
  return {status, out.str(), err.str()};
}

cli::QuerySpec spec(cli::Command c, std::vector<std::string> inputs) {
  cli::QuerySpec s;
  s.command = c;
  for (auto& i : inputs) s.inputs.push_back(corpus_path(i));
  return s;
}

// Runs the installed binary through the shell; stdout only.
Outcome exec(const std::string& args) {
  std::string cmd = std::string(PYTS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out, ""};
}

}  // namespace

TEST(Cli, CheckSub2IsNonconformant) {
  auto s = spec(cli::Command::check, {"protocols.py"});
  s.subject = "Sub2";
  s.target = "MyProtocol";
  auto r = run(s);
  EXPECT_EQ(r.status, cli::exit_failed);
  EXPECT_NE(r.out.find("Sub2 is not a type-instance of MyProtocol"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("foo: incompatible"), std::string::npos);
  EXPECT_NE(r.out.find("expected: Self x IntET -> BoolET"), std::string::npos);
  EXPECT_NE(r.out.find("actual:   Self x StrET -> IntET"), std::string::npos);
  s.subject = "Sub3";
  EXPECT_EQ(run(s).status, cli::exit_ok);
}

TEST(Cli, CheckJson) {
  auto s = spec(cli::Command::check, {"protocols.py"});
  s.subject = "Sub2";
  s.target = "MyProtocol";
  s.format = cli::Format::json;
  auto j = json::parse(run(s).out);
  EXPECT_EQ(j["members"][0]["actual"], "Self x StrET -> IntET");
}

TEST(Cli, Mro) {
  auto s = spec(cli::Command::mro, {"point.py"});
  s.class_name = "Point";
  auto r = run(s);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "Point -> object\n");
  s.class_name = "Nope";
  EXPECT_EQ(run(s).status, cli::exit_usage);
}

TEST(Cli, RelationsDefaultToDot) {
  auto r = run(spec(cli::Command::relations, {"magic_number.py"}));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("digraph relations {", 0), 0u);
  EXPECT_NE(r.out.find("\"MagicNumber\" -> \"SupportsInt\" [style=dotted"), std::string::npos) << r.out;
}

TEST(Cli, Elaborate) {
  auto r = run(spec(cli::Command::elaborate, {"mylist.py"}));
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("foo : MyListET[IntET]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("bar : ListET[TypeET]"), std::string::npos);
}

TEST(Cli, DumpPrelude) {
  cli::QuerySpec s;
  s.command = cli::Command::dump_prelude;
  auto r = run(s);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("IntET = ∃IT.{__repr__: IT -> StrET, ...}"), std::string::npos);
  EXPECT_NE(r.out.find("is PyTS"), std::string::npos);
}

TEST(Cli, OracleDiff) {
  auto s = spec(cli::Command::oracle_diff, {"protocols.py"});
  s.oracle_path = source_path("tests/data/protocols.oracle.json");
  auto r = run(s);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("2 divergence(s), 0 unexpected"), std::string::npos) << r.out;
  // Pointing the protocol record at the ABC corpus gives unexpected MROs.
  auto bad = spec(cli::Command::oracle_diff, {"abc_hooks.py"});
  bad.oracle_path = s.oracle_path;
  EXPECT_EQ(run(bad).status, cli::exit_failed);
}

TEST(Cli, UsageErrors) {
  auto s = spec(cli::Command::check, {"protocols.py"});
  s.subject = "Sub2";
  EXPECT_EQ(run(s).status, cli::exit_usage);
  s.target = "Nope";
  EXPECT_EQ(run(s).status, cli::exit_usage);
  s.target = "int";
  EXPECT_EQ(run(s).status, cli::exit_usage);
  EXPECT_EQ(run(spec(cli::Command::relations, {})).status, cli::exit_usage);
  EXPECT_EQ(run(spec(cli::Command::oracle_diff, {"protocols.py"})).status, cli::exit_usage);
  auto dot = spec(cli::Command::elaborate, {"protocols.py"});
  dot.format = cli::Format::dot;
  EXPECT_EQ(run(dot).status, cli::exit_usage);
  cli::QuerySpec missing;
  missing.inputs = {"/nonexistent/file.py"};
  EXPECT_EQ(run(missing).status, cli::exit_usage);
}

TEST(Cli, ParseErrors) {
  auto path = std::filesystem::temp_directory_path() / "pyts_cli_bad.py";
  {
    std::ofstream(path) << "class Broken(:\n    pass\n";
  }
  cli::QuerySpec s;
  s.inputs = {path.string()};
  auto r = run(s);
  EXPECT_EQ(r.status, cli::exit_parse);
  EXPECT_NE(r.err.find("pyts_cli_bad.py:1:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("[SyntaxError]"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, Commands) {
  EXPECT_EQ(cli::parse_command("oracle-diff"), cli::Command::oracle_diff);
  EXPECT_EQ(cli::parse_command("dump-prelude"), cli::Command::dump_prelude);
  EXPECT_FALSE(cli::parse_command("nope"));
  EXPECT_EQ(cli::parse_format("dot"), cli::Format::dot);
  EXPECT_FALSE(cli::parse_format("xml"));
}

TEST(CliBinary, ExitCodes) {
  auto protocols = corpus_path("protocols.py");
  EXPECT_EQ(exec("check --subject Sub2 --target MyProtocol " + protocols).status, 1);
  EXPECT_EQ(exec("check --subject Sub3 --target MyProtocol " + protocols).status, 0);
  EXPECT_EQ(exec("check --subject Sub3 " + protocols).status, 2);
  EXPECT_EQ(exec("frobnicate").status, 2);
  EXPECT_EQ(exec("mro " + corpus_path("point.py")).out, "Point -> object\n");
}

TEST(CliBinary, VirtualTableFromEnvironment) {
  auto table = std::filesystem::temp_directory_path() / "pyts_cli_vt.txt";
  {
    std::ofstream(table) << "Sub2 MyABC\n";
  }
  auto args = "relations --format text " + corpus_path("abc_hooks.py");
  auto without = exec(args).out;
  auto with = exec("relations --virtual-table " + table.string() + " --format text " + corpus_path("abc_hooks.py")).out;
  auto env = Outcome{};
  {
    std::string cmd = "PYTS_VIRTUAL_TABLE=" + table.string() + " " + std::string(PYTS_CLI_PATH) + " " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) env.out.append(buf, n);
    pclose(pipe);
  }
  EXPECT_NE(without.find("Sub2 type-instance-of MyABC\n"), std::string::npos) << without;
  EXPECT_EQ(with.find("Sub2 type-instance-of MyABC\n"), std::string::npos) << with;
  EXPECT_EQ(env.out, with);
  std::filesystem::remove(table);
}

TEST(CliBinary, OutputIsDeterministic) {
  for (const char* f : {"protocols.py", "abc_hooks.py", "magic_number.py", "mylist.py"}) {
    for (const char* cmd : {"elaborate --format json ", "relations ", "mro "}) {
      auto args = cmd + corpus_path(f);
      EXPECT_EQ(exec(args).out, exec(args).out) << args;
    }
  }
}
