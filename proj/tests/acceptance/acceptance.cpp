// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures, capped at 1.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "pyts/oracle.hpp"
#include "support/c3_oracle.hpp"
#include "support/corpus.hpp"
#include "support/gen.hpp"

using namespace pyts;
using pyts::testing::corpus;
using pyts::testing::source_path;

namespace {

constexpr double divergence_seconds = 1.0;
constexpr double laws_seconds = 30.0;
constexpr int law_cases = 1000;
constexpr int min_hierarchies = 50;

struct Result {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

Program program(const std::string& file) { return load_program_source(corpus(file), file); }

const MemberReport* find_member(const ConformanceReport& r, const std::string& name) {
  for (const auto& m : r.members)
    if (m.name == name) return &m;
  return nullptr;
}

Result protocol_divergence() {
  Result r;
  auto start = std::chrono::steady_clock::now();
  Program p = program("protocols.py");
  auto sub2 = type_instance_of("Sub2", "MyProtocol", p.env);
  auto sub3 = type_instance_of("Sub3", "MyProtocol", p.env);
  const TypeExpr self = make_var("Self");
  auto foo = find_member(sub2, "foo");
  r.require(!sub2.verdict, "Sub2 reported conformant");
  r.require(foo && !foo->compatible, "Sub2.foo not reported incompatible");
  if (foo) {
    r.require(alpha_eq(foo->expected, parse_type("Self x IntET -> BoolET", {"Self"})),
              "expected signature " + to_text(foo->expected));
    r.require(foo->actual && alpha_eq(*foo->actual, parse_type("Self x StrET -> IntET", {"Self"})),
              "actual signature " + (foo->actual ? to_text(*foo->actual) : std::string("missing")));
  }
  r.require(sub3.verdict, "Sub3 reported nonconformant");
  auto diff = oracle_diff(p, load_oracle(source_path("tests/data/protocols.oracle.json")));
  std::set<std::string> divergent;
  for (const auto& d : diff.divergences) divergent.insert(d.sub);
  r.require(divergent == std::set<std::string>{"Sub1", "Sub2"} && diff.unexpected == 0,
            "oracle-diff does not list exactly Sub1 and Sub2");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.require(secs < divergence_seconds, "took " + std::to_string(secs) + " s");
  return r;
}

Result elaboration_goldens() {
  Result r;
  struct Golden {
    const char* file;
    const char* cls;
    const char* type;
  };
  for (const Golden& g : {Golden{"mylist.py", "MyList", "∀T.∃L<:ListET[T].{pretty_string: L -> StrET, ...}"},
                          Golden{"mylist_type_call.py", "MyList", "∀T.∃L<:ListET[T].{pretty_string: L -> StrET, ...}"},
                          Golden{"supports.py", "SupportsInt", "∃SI<:ProtocolET0.{__int__: SI -> IntET, ...}"},
                          Golden{"supports.py", "SupportsAbs", "∀T.∃SA<:ProtocolET1[T].{__abs__: SA -> T, ...}"}}) {
    Program p = program(g.file);
    auto c = p.find_class(g.cls);
    r.require(c && c->def, std::string(g.cls) + " not elaborated");
    if (c && c->def)
      r.require(alpha_eq(c->def->type(), parse_type(g.type)), std::string(g.cls) + " = " + to_text(c->def->type()));
  }
  return r;
}

Result meta_layer() {
  Result r;
  for (const char* f : {"mylist.py", "mylist_type_call.py"}) {
    Program p = program(f);
    auto bar = p.variables.find("bar");
    auto foo = p.variables.find("foo");
    r.require(bar != p.variables.end() && alpha_eq(bar->second, parse_type("ListET[TypeET]")),
              std::string(f) + ": bar");
    r.require(foo != p.variables.end() && alpha_eq(foo->second, parse_type("MyListET[IntET]")),
              std::string(f) + ": foo");
  }
  return r;
}

Result witness_goldens() {
  Result r;
  TypeEnv env = prelude_env();
  env.add(parse_definition("QuackET = ∃Q.{quack: Q -> StrET}"));
  const TypeExpr quack = env.lookup("QuackET")->type();
  Program p = program("duck.py");
  for (const char* cls : {"Duck", "Donald"}) {
    auto c = p.find_class(cls);
    const auto& def = *c->def;
    // The implementation's own signature with the class itself as receiver.
    TypeExpr impl = substitute(*def.record().find("quack"), def.self_var, make_atom(cls));
    Witness w{cls, {{"quack", {std::string(cls) + ".quack", impl}}}};
    try {
      r.require(check_witness(w, quack, env).verdict, std::string(cls) + " rejected");
    } catch (const Error& e) {
      r.require(false, std::string(cls) + ": " + e.what());
    }
  }
  try {
    check_witness(Witness{"Duck", {}}, quack, env);
    r.require(false, "empty binding set accepted");
  } catch (const Error& e) {
    r.require(e.code() == ErrorCode::missing_member, std::string("wrong error ") + e.what());
  }
  return r;
}

Result subtype_laws() {
  Result r;
  auto start = std::chrono::steady_clock::now();
  TypeEnv env = prelude_env();
  auto sub = [&](const TypeExpr& a, const TypeExpr& b) { return is_subtype(a, b, env); };
  pyts::testing::TypeGen g(20240611);

  int refl = 0, topbot = 0, variance = 0, chains = 0;
  for (int i = 0; i < law_cases; ++i) {
    auto t = g.closed_type(4);
    if (!sub(t, t)) r.require(false, "reflexivity: " + to_text(t));
    ++refl;
    if (!sub(make_atom("BottomET"), t) || !sub(t, make_atom("ObjectET"))) r.require(false, "top/bottom: " + to_text(t));
    ++topbot;
    auto a = g.law_atom(), b = g.law_atom(), c = g.law_atom(), d = g.law_atom();
    if (sub(make_function(a, b), make_function(c, d)) != (sub(c, a) && sub(b, d)))
      r.require(false, "variance: " + to_text(make_function(a, b)) + " vs " + to_text(make_function(c, d)));
    ++variance;
  }
  std::vector<TypeExpr> pool;
  for (int i = 0; i < 60; ++i) pool.push_back(g.closed_type(3));
  for (int i = 0; i < 14; ++i) pool.push_back(g.law_atom());
  pool.push_back(make_atom("BottomET"));
  pool.push_back(make_atom("ObjectET"));
  const std::size_t n = pool.size();
  std::vector<std::vector<char>> rel(n, std::vector<char>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rel[i][j] = sub(pool[i], pool[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; rel[i][j] && k < n; ++k) {
        if (!rel[j][k]) continue;
        ++chains;
        if (!rel[i][k]) r.require(false, "transitivity: " + to_text(pool[i]) + " / " + to_text(pool[k]));
      }
  r.require(std::min({refl, topbot, variance, chains}) >= law_cases, "fewer than 1000 cases for some law");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.require(secs < laws_seconds, "took " + std::to_string(secs) + " s");
  if (r.ok) r.detail = std::to_string(chains) + " transitive chains";
  return r;
}

Result c3_equivalence() {
  Result r;
  auto replay = pyts::testing::replay_c3_oracle();
  r.require(replay.hierarchies >= min_hierarchies, std::to_string(replay.hierarchies) + " hierarchies");
  r.require(replay.rejected > 0, "no inconsistent hierarchy in the record");
  r.require(replay.mismatches.empty(), replay.mismatches.empty() ? "" : replay.mismatches.front());
  if (r.ok)
    r.detail = std::to_string(replay.hierarchies) + " hierarchies, " + std::to_string(replay.classes) + " classes";
  return r;
}

Result magic_number() {
  Result r;
  Program p = program("magic_number.py");
  r.require(type_instance_of("MagicNumber", "SupportsInt", p.env).verdict, "not a type-instance");
  auto dot = to_dot(relations_graph(p), p);
  r.require(dot.find("\"MagicNumber\" -> \"SupportsInt\" [style=dotted") != std::string::npos, "no dotted edge");
  r.require(dot.find("\"MagicNumber\" -> \"SupportsInt\" [style=solid") == std::string::npos, "solid edge present");
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"protocol divergence (Sub2 vs MyProtocol, < 1 s)", protocol_divergence},
      {"elaboration goldens (alpha-equivalent, exact)", elaboration_goldens},
      {"meta-layer golden (bar : ListET[TypeET])", meta_layer},
      {"witness goldens (Duck, Donald : QuackET)", witness_goldens},
      {"subtype laws (>= 1000 cases each, < 30 s)", subtype_laws},
      {"C3 equivalence with CPython (>= 50 hierarchies)", c3_equivalence},
      {"MagicNumber golden (type-instance-of SupportsInt)", magic_number},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failures += !r.ok;
    std::cout << (r.ok ? "PASS " : "FAIL ") << name;
    if (!r.detail.empty()) std::cout << " -- " << r.detail;
    std::cout << "\n";
  }
  return failures ? 1 : 0;
}
