#include <gtest/gtest.h>

#include "pyts/frontend.hpp"
#include "support/corpus.hpp"

using namespace pyts;
using pyts::testing::corpus;

namespace {

const ClassInfo& cls(const ModuleInfo& m, std::string_view name) {
  for (const auto& c : m.classes)
    if (c.name == name) return c;
  throw std::runtime_error("no class " + std::string(name));
}

std::vector<std::string> base_names(const ClassInfo& c) {
  std::vector<std::string> out;
  for (const auto& b : c.bases) out.push_back(b.name);
  return out;
}

}  // namespace

TEST(Frontend, EmptyModule) {
  auto m = parse_module("");
  EXPECT_TRUE(m.classes.empty());
  EXPECT_TRUE(m.functions.empty());
  EXPECT_TRUE(m.warnings.empty());
}

TEST(Frontend, ProtocolListing) {
  auto m = parse_module(corpus("protocols.py"), "protocols.py");
  ASSERT_EQ(m.classes.size(), 4u);
  const auto& p = cls(m, "MyProtocol");
  EXPECT_EQ(p.kind, ClassKind::protocol);
  EXPECT_TRUE(p.runtime_checkable);
  ASSERT_NE(p.find_member("foo"), nullptr);
  EXPECT_EQ(p.find_member("foo")->params.size(), 2u);
  for (const char* s : {"Sub1", "Sub2", "Sub3"}) {
    EXPECT_EQ(cls(m, s).kind, ClassKind::plain);
    EXPECT_TRUE(cls(m, s).bases.empty());
  }
  ASSERT_EQ(m.functions.size(), 1u);
  EXPECT_EQ(m.functions[0].name, "f1");
  EXPECT_EQ(m.imported, (std::vector<std::string>{"Protocol", "runtime_checkable"}));
}

TEST(Frontend, AbcListing) {
  auto m = parse_module(corpus("abc_hooks.py"));
  const auto& a = cls(m, "MyABC");
  EXPECT_EQ(a.kind, ClassKind::abc);
  EXPECT_EQ(a.metaclass, std::optional<std::string>("ABCMeta"));
  EXPECT_TRUE(a.find_member("foo")->abstract);
  const auto& h = cls(m, "MyABCHooked");
  ASSERT_NE(h.find_member("__subclasshook__"), nullptr);
  EXPECT_EQ(h.find_member("__subclasshook__")->kind, MemberKind::classmethod);
  EXPECT_EQ(base_names(cls(m, "Sub1")), std::vector<std::string>{"MyABC"});
  ASSERT_EQ(m.registrations.size(), 1u);
  EXPECT_EQ(m.registrations[0].base, "MyABC");
  EXPECT_EQ(m.registrations[0].sub, "Sub2");
}

TEST(Frontend, TypeCallIsAClassStatement) {
  auto dyn = parse_module(corpus("mylist_type_call.py"));
  auto stmt = parse_module(corpus("mylist.py"));
  const auto& a = cls(dyn, "MyList");
  const auto& b = cls(stmt, "MyList");
  EXPECT_TRUE(a.dynamic);
  EXPECT_FALSE(b.dynamic);
  EXPECT_EQ(base_names(a), base_names(b));
  EXPECT_EQ(base_names(a), std::vector<std::string>{"list"});
  ASSERT_EQ(a.members.size(), b.members.size());
  EXPECT_EQ(a.members[0].name, "pretty_string");
  EXPECT_EQ(a.members[0].kind, b.members[0].kind);
  EXPECT_EQ(dyn.variables.size(), 2u);
}

TEST(Frontend, DynamicTypeCallNeedsLiterals) {
  auto m = parse_module("bases = (list,)\nX = type('X', bases, {})\n");
  EXPECT_TRUE(m.classes.empty());
  ASSERT_FALSE(m.warnings.empty());
  EXPECT_EQ(m.warnings[0].code, "UnsupportedConstruct");
}

TEST(Frontend, InstanceAttributesFromInit) {
  auto m = parse_module(corpus("point.py"));
  const auto& p = cls(m, "Point");
  ASSERT_NE(p.find_member("x"), nullptr);
  EXPECT_TRUE(p.find_member("x")->instance_attribute);
  EXPECT_EQ(p.find_member("x")->kind, MemberKind::attribute);
  ASSERT_NE(p.find_member("y"), nullptr);
  ASSERT_NE(p.find_member("__init__"), nullptr);
}

TEST(Frontend, GenericBasesAndTypeVars) {
  auto m = parse_module(corpus("supports.py"));
  ASSERT_EQ(m.type_vars.size(), 1u);
  EXPECT_EQ(m.type_vars[0].name, "T");
  const auto& abs = cls(m, "SupportsAbs");
  EXPECT_EQ(abs.kind, ClassKind::protocol);
  EXPECT_FALSE(abs.runtime_checkable);
  ASSERT_EQ(abs.bases.size(), 1u);
  EXPECT_EQ(abs.bases[0].args.size(), 1u);
}

TEST(Frontend, QualifiedNamesAndStarImports) {
  auto m = parse_module("import typing\nfrom abc import *\nclass P(typing.Protocol):\n    pass\n");
  EXPECT_EQ(cls(m, "P").kind, ClassKind::protocol);
  EXPECT_EQ(m.imported, std::vector<std::string>{"*"});
}

TEST(Frontend, Functions) {
  auto m = parse_module(corpus("duck.py"));
  ASSERT_EQ(m.functions.size(), 3u);
  const auto& spread = m.functions[2];
  ASSERT_EQ(spread.params.size(), 2u);
  EXPECT_EQ(spread.params[0].kind, py::ParamKind::var_positional);
  EXPECT_EQ(spread.params[1].kind, py::ParamKind::var_keyword);
  EXPECT_EQ(m.variables.size(), 2u);
}

TEST(Frontend, UnsupportedStatementsWarn) {
  auto m = parse_module("for i in range(3):\n    pass\nclass A:\n    class B:\n        pass\n");
  EXPECT_EQ(m.warnings.size(), 2u);
  EXPECT_EQ(m.classes.size(), 1u);
}

TEST(Frontend, SyntaxErrorsAreLocated) {
  try {
    parse_module("class A:\n    def f(self:\n", "bad.py");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::syntax_error);
    ASSERT_TRUE(e.loc());
    EXPECT_EQ(e.loc()->file, "bad.py");
    EXPECT_GE(e.loc()->line, 2);
  }
  EXPECT_THROW(parse_module("class A(\n"), Error);
  EXPECT_THROW(parse_module("def f(:\n  pass\n"), Error);
  EXPECT_THROW(parse_module("x = 1 +\n"), Error);
}

TEST(Frontend, EveryCorpusFileParses) {
  for (const char* f : {"protocols.py", "abc_hooks.py", "magic_number.py", "mylist.py", "mylist_type_call.py",
                        "supports.py", "duck.py", "point.py", "plain_protocol.py"}) {
    EXPECT_NO_THROW(parse_module(corpus(f), f)) << f;
  }
}
