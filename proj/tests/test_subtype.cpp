#include <gtest/gtest.h>

#include "pyts/prelude.hpp"
#include "pyts/subtype.hpp"
#include "support/gen.hpp"

using namespace pyts;

namespace {

TypeExpr T(std::string_view text, VarSet free = {}) { return parse_type(text, std::move(free)); }

class Subtype : public ::testing::Test {
 protected:
  Subtype() : env(prelude_env()) {
    env.add(parse_definition("QuackET = ∃Q.{quack: Q -> StrET}"));
    env.add(parse_definition("DuckET = ∃D<:ObjectET.{quack: D -> StrET, waddle: D -> NoneTypeET, ...}"));
    env.add(parse_definition("RobotET = ∃R<:ObjectET.{beep: R -> StrET, ...}"));
    env.add(parse_definition("MallardET = ∃M<:DuckET.{dive: M -> BoolET, ...}"));
    Definition proto = parse_definition("QuackerET = ∃Q<:ProtocolET0.{quack: Q -> StrET, ...}");
    proto.interface = InterfaceKind::protocol;
    proto.required_members = {"quack"};
    env.add(std::move(proto));
  }

  bool sub(std::string_view a, std::string_view b) { return is_subtype(T(a), T(b), env); }

  TypeEnv env;
};

const Derivation* find_rule(const Derivation& d, std::string_view rule) {
  if (d.rule == rule) return &d;
  for (const auto& p : d.premises)
    if (auto r = find_rule(p, rule)) return r;
  return nullptr;
}

void check_shape(const Derivation& d) {
  static const std::set<std::string> leaves{"refl", "any", "bottom", "top", "atom-edge", "assumption", "mismatch"};
  if (leaves.count(d.rule)) {
    EXPECT_TRUE(d.premises.empty()) << d.rule;
    EXPECT_EQ(d.verdict, d.rule != "mismatch") << d.rule;
    return;
  }
  bool all = std::all_of(d.premises.begin(), d.premises.end(), [](const Derivation& p) { return p.verdict; });
  EXPECT_EQ(d.verdict, all) << d.rule << ": " << d.lhs << " <: " << d.rhs;
  for (const auto& p : d.premises) check_shape(p);
}

}  // namespace

TEST_F(Subtype, FunctionVarianceAgainstMypy) {
  // Frozen from mypy: Callable[[float], int] is rejected where
  // Callable[[int], bool] is expected, Callable[[float], bool] is accepted.
  auto bad = subtype(T("FloatET -> IntET"), T("IntET -> BoolET"), env);
  EXPECT_FALSE(bad.verdict);
  ASSERT_EQ(bad.rule, "function");
  EXPECT_TRUE(bad.premises.at(0).verdict);
  EXPECT_EQ(bad.premises.at(0).label, "domain");
  EXPECT_FALSE(bad.premises.at(1).verdict);
  EXPECT_EQ(bad.premises.at(1).label, "codomain");
  EXPECT_EQ(to_text(bad.premises.at(1).lhs), "IntET");
  EXPECT_EQ(to_text(bad.premises.at(1).rhs), "BoolET");
  EXPECT_TRUE(sub("FloatET -> BoolET", "IntET -> BoolET"));
}

TEST_F(Subtype, LeafRules) {
  EXPECT_EQ(subtype(T("IntET"), T("IntET"), env).rule, "refl");
  EXPECT_EQ(subtype(T("BottomET"), T("StrET -> IntET"), env).rule, "bottom");
  EXPECT_EQ(subtype(T("{a: IntET}"), T("ObjectET"), env).rule, "top");
  EXPECT_EQ(subtype(T("Any"), T("IntET"), env).rule, "any");
  EXPECT_EQ(subtype(T("IntET"), T("Any"), env).rule, "any");
  EXPECT_EQ(subtype(T("BoolET"), T("FloatET"), env).rule, "atom-edge");
  EXPECT_FALSE(sub("FloatET", "IntET"));
  EXPECT_FALSE(sub("ObjectET", "IntET"));
}

TEST_F(Subtype, Records) {
  EXPECT_TRUE(sub("{a: IntET, b: StrET, ...}", "{a: FloatET, ...}"));
  EXPECT_TRUE(sub("{a: IntET, b: StrET}", "{a: IntET, ...}"));
  EXPECT_FALSE(sub("{a: IntET, ...}", "{a: IntET, b: StrET, ...}"));
  EXPECT_FALSE(sub("{a: IntET, ...}", "{a: IntET}"));
  EXPECT_FALSE(sub("{a: IntET, b: StrET}", "{a: IntET}"));
  EXPECT_TRUE(sub("{a: BoolET}", "{a: IntET}"));
  auto d = subtype(T("{b: StrET, ...}"), T("{a: IntET, ...}"), env);
  EXPECT_EQ(d.reason, "field a: missing member a");
}

TEST_F(Subtype, ProductsAndSums) {
  EXPECT_TRUE(sub("BoolET x StrET", "IntET x StrET"));
  EXPECT_FALSE(sub("IntET x StrET", "StrET x IntET"));
  EXPECT_FALSE(sub("IntET x StrET", "IntET x StrET x BoolET"));
  EXPECT_TRUE(sub("IntET", "StrET + IntET"));
  EXPECT_TRUE(sub("BoolET + IntET", "FloatET + StrET"));
  EXPECT_FALSE(sub("IntET + StrET", "IntET"));
  EXPECT_EQ(subtype(T("IntET + StrET"), T("IntET"), env).rule, "sum-left");
}

TEST_F(Subtype, GenericApplicationIsInvariant) {
  EXPECT_TRUE(sub("ListET[IntET]", "ListET[IntET]"));
  EXPECT_FALSE(sub("ListET[BoolET]", "ListET[IntET]"));
  EXPECT_FALSE(sub("ListET[IntET]", "ListET[BoolET]"));
  EXPECT_TRUE(sub("ListET[Any]", "ListET[IntET]"));
  EXPECT_FALSE(sub("DictET[StrET, IntET]", "DictET[StrET]"));
}

TEST_F(Subtype, Tuples) {
  EXPECT_TRUE(sub("TupleET[IntET, BoolET]", "TupleET[IntET, ...]"));
  EXPECT_TRUE(sub("TupleET[]", "TupleET[StrET, ...]"));
  EXPECT_FALSE(sub("TupleET[IntET, StrET]", "TupleET[IntET, ...]"));
  EXPECT_FALSE(sub("TupleET[IntET, ...]", "TupleET[IntET]"));
  EXPECT_TRUE(sub("TupleET[IntET, ...]", "TupleET[IntET, ...]"));
}

TEST_F(Subtype, InheritThroughBounds) {
  EXPECT_TRUE(sub("MallardET", "DuckET"));
  EXPECT_FALSE(sub("DuckET", "MallardET"));
  EXPECT_TRUE(sub("MallardET", "ObjectET"));
  EXPECT_EQ(subtype(T("MallardET"), T("DuckET"), env).rule, "inherit");
}

TEST_F(Subtype, StructuralOnlyForProtocols) {
  EXPECT_TRUE(sub("DuckET", "QuackerET"));
  EXPECT_TRUE(sub("MallardET", "QuackerET"));
  EXPECT_FALSE(sub("RobotET", "QuackerET"));
  EXPECT_FALSE(sub("RobotET", "DuckET"));
  auto d = subtype(T("DuckET"), T("QuackerET"), env);
  EXPECT_NE(find_rule(d, "structural"), nullptr);
}

TEST_F(Subtype, UnfoldAgainstLiteralTypes) {
  EXPECT_TRUE(sub("DuckET", "∃X.{quack: X -> StrET, ...}"));
  EXPECT_TRUE(sub("DuckET", "{...}"));
  EXPECT_FALSE(sub("RobotET", "∃X.{quack: X -> StrET, ...}"));
  EXPECT_TRUE(sub("IntET", "IntET"));
}

TEST_F(Subtype, Existentials) {
  EXPECT_TRUE(sub("∃X.{f: X -> BoolET, g: IntET, ...}", "∃Y.{f: Y -> IntET, ...}"));
  EXPECT_FALSE(sub("∃X.{f: X -> StrET, ...}", "∃Y.{f: Y -> IntET, ...}"));
  EXPECT_TRUE(sub("∃X<:DuckET.{...}", "∃Y<:ObjectET.{...}"));
  EXPECT_FALSE(sub("∃X<:ObjectET.{...}", "∃Y<:DuckET.{...}"));
  // The hidden variable is known only through its bound.
  EXPECT_TRUE(sub("∃X<:DuckET.{f: X, ...}", "∃Y.{f: DuckET, ...}"));
  EXPECT_FALSE(sub("∃X<:DuckET.{f: X, ...}", "∃Y.{f: RobotET, ...}"));
}

TEST_F(Subtype, Quantifiers) {
  EXPECT_TRUE(sub("∀A.A -> A", "∀B.B -> B"));
  EXPECT_FALSE(sub("∀A,B.A -> B", "∀A.A -> A"));
  EXPECT_FALSE(sub("∀A.A -> IntET", "∀A.A -> BoolET"));
}

TEST_F(Subtype, VariablesUseAssumedBounds) {
  EXPECT_TRUE(is_subtype(T("X", {"X"}), T("FloatET"), env, {{"X", T("IntET")}}));
  EXPECT_FALSE(is_subtype(T("X", {"X"}), T("StrET"), env, {{"X", T("IntET")}}));
  EXPECT_FALSE(is_subtype(T("X", {"X"}), T("IntET"), env));
  EXPECT_FALSE(is_subtype(T("IntET"), T("X", {"X"}), env, {{"X", T("IntET")}}));
  EXPECT_TRUE(is_subtype(T("X", {"X"}), T("X", {"X"}), env));
}

TEST_F(Subtype, RecursiveDefinitionsTerminate) {
  env.add(parse_definition("NodeET = ∃N.{next: N -> NodeET, value: N -> IntET, ...}"));
  Definition chain = parse_definition("ChainET = ∃C<:ProtocolET0.{next: C -> ChainET, value: C -> IntET, ...}");
  chain.interface = InterfaceKind::protocol;
  chain.required_members = {"next", "value"};
  env.add(std::move(chain));
  // Nominal classes stay apart; the protocol target recurses structurally.
  EXPECT_FALSE(sub("NodeET", "∃X.{next: X -> MallardET, ...}"));
  EXPECT_TRUE(sub("NodeET", "ChainET"));
  EXPECT_TRUE(sub("NodeET", "∃X.{next: X -> ChainET, ...}"));
  EXPECT_TRUE(sub("IntET", "∃X.{__repr__: X -> StrET, ...}"));
}

TEST_F(Subtype, DerivationShapeInvariant) {
  pyts::testing::TypeGen g(808);
  for (int i = 0; i < 500; ++i) {
    auto a = g.closed_type(3);
    auto b = g.closed_type(3);
    check_shape(subtype(a, b, env));
    check_shape(subtype(a, a, env));
  }
  check_shape(subtype(T("DuckET"), T("QuackerET"), env));
  check_shape(subtype(T("RobotET"), T("QuackerET"), env));
}

TEST_F(Subtype, UnknownNamesThrow) {
  EXPECT_THROW(subtype(T("NopeET"), T("IntET"), env), Error);
}

// ---- witnesses ----------------------------------------------------------------

TEST_F(Subtype, WitnessesOfQuack) {
  auto quack = env.lookup("QuackET")->type();
  for (const char* rep : {"Duck", "Donald"}) {
    Witness w{rep, {{"quack", {std::string(rep) + ".quack", make_function(make_atom(rep), make_atom("StrET"))}}}};
    auto d = check_witness(w, quack, env);
    EXPECT_TRUE(d.verdict) << rep;
    EXPECT_EQ(d.premises.size(), 1u);
  }
  try {
    check_witness(Witness{"Duck", {}}, quack, env);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_member);
    EXPECT_NE(e.message().find("quack"), std::string::npos);
  }
}

TEST_F(Subtype, WitnessRejectsWrongImplementation) {
  auto quack = env.lookup("QuackET")->type();
  Witness w{"Duck", {{"quack", {"Duck.quack", make_function(make_atom("Duck"), make_atom("IntET"))}}}};
  EXPECT_FALSE(check_witness(w, quack, env).verdict);
  Witness wrong_self{"Duck", {{"quack", {"Robot.quack", make_function(make_atom("RobotET"), make_atom("StrET"))}}}};
  EXPECT_FALSE(check_witness(wrong_self, quack, env).verdict);
}

TEST_F(Subtype, WitnessChecksTheBound) {
  auto mallard = env.lookup("MallardET")->type();
  Witness robot{"Robot", {{"dive", {"Robot.dive", T("RobotET -> BoolET")}}}};
  try {
    check_witness(robot, mallard, env);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::bound_violated);
  }
  EXPECT_THROW(check_witness(robot, T("IntET"), env), Error);
}

TEST_F(Subtype, WhateverObjectSatisfiesHoldsOfEverything) {
  EXPECT_TRUE(sub("IntET -> IntET", "{...}"));
  EXPECT_TRUE(sub("StrET x IntET", "∃X.{...}"));
  auto d = subtype(T("{f: IntET, ...}"), T("∃X.{...}"), env);
  EXPECT_TRUE(find_rule(d, "object-members"));
  EXPECT_FALSE(sub("IntET -> IntET", "{a: IntET, ...}"));
  EXPECT_FALSE(sub("ObjectET", "{a: IntET, ...}"));
}
