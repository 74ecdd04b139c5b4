#include <gtest/gtest.h>

#include "pyts/type_env.hpp"
#include "support/debruijn.hpp"
#include "support/gen.hpp"

using namespace pyts;
using pyts::testing::debruijn;
using pyts::testing::TypeGen;

namespace {

constexpr int cases = 2000;

bool subset(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST(SubstituteProperty, AgreesWithDeBruijnReference) {
  TypeGen g(101);
  for (int i = 0; i < cases; ++i) {
    auto e = g.open_type(4);
    auto r = g.open_type(2);
    const std::string& x = g.pick(g.vars());
    auto out = substitute(e, x, r);
    ASSERT_EQ(debruijn(out), pyts::testing::debruijn_subst(e, x, r))
        << "e = " << e << "\nx = " << x << "\nr = " << r << "\nout = " << out;
  }
}

TEST(SubstituteProperty, SubstitutionLemma) {
  TypeGen g(202);
  int checked = 0;
  for (int i = 0; i < cases * 2 && checked < cases; ++i) {
    auto e = g.open_type(4);
    auto a = g.open_type(2);
    auto b = g.open_type(2);
    const std::string& x = g.pick(g.vars());
    const std::string& y = g.pick(g.vars());
    if (x == y || free_vars(b).count(x)) continue;
    ++checked;
    auto lhs = substitute(substitute(e, x, a), y, b);
    auto rhs = substitute(substitute(e, y, b), x, substitute(a, y, b));
    ASSERT_TRUE(alpha_eq(lhs, rhs)) << "e = " << e << "\na = " << a << "\nb = " << b << "\n" << x << ", " << y;
  }
  EXPECT_GE(checked, 1000);
}

TEST(SubstituteProperty, FreeVariablesBound) {
  TypeGen g(303);
  for (int i = 0; i < cases; ++i) {
    auto e = g.open_type(4);
    auto r = g.open_type(2);
    const std::string& x = g.pick(g.vars());
    VarSet allowed = free_vars(e);
    allowed.erase(x);
    auto fr = free_vars(r);
    allowed.insert(fr.begin(), fr.end());
    ASSERT_TRUE(subset(free_vars(substitute(e, x, r)), allowed)) << e << " [" << x << " := " << r << "]";
  }
}

TEST(AlphaProperty, MatchesDeBruijnEquality) {
  TypeGen g(404);
  int equal = 0;
  for (int i = 0; i < cases; ++i) {
    auto a = g.open_type(3);
    auto b = i % 3 == 0 ? g.rename_binders(a) : g.open_type(3);
    bool same = debruijn(a) == debruijn(b);
    equal += same;
    ASSERT_EQ(alpha_eq(a, b), same) << a << "\n" << b;
  }
  EXPECT_GE(equal, cases / 3);
}

TEST(AlphaProperty, EquivalenceRelation) {
  TypeGen g(505);
  for (int i = 0; i < cases; ++i) {
    auto a = g.open_type(4);
    auto b = g.rename_binders(a);
    auto c = g.rename_binders(b);
    ASSERT_TRUE(alpha_eq(a, a)) << a;
    ASSERT_TRUE(alpha_eq(a, b)) << a << "\n" << b;
    ASSERT_TRUE(alpha_eq(b, a)) << a << "\n" << b;
    ASSERT_TRUE(alpha_eq(b, c) && alpha_eq(a, c)) << a << "\n" << c;
    auto d = g.open_type(4);
    ASSERT_EQ(alpha_eq(a, d), alpha_eq(d, a)) << a << "\n" << d;
    ASSERT_EQ(alpha_eq(a, d), alpha_eq(c, d)) << a << "\n" << d;
  }
}

TEST(NormalizeProperty, IdempotentAndRespectsAlpha) {
  TypeGen g(606);
  for (int i = 0; i < cases; ++i) {
    auto e = g.open_type(4);
    auto n = normalize(e);
    ASSERT_EQ(to_text(normalize(n)), to_text(n)) << e;
    auto e2 = g.rename_binders(e);
    ASSERT_TRUE(alpha_eq(normalize(e), normalize(e2))) << e << "\n" << e2;
    ASSERT_TRUE(free_vars(n) == free_vars(e)) << e;
  }
}

TEST(RenderProperty, ParseRoundTrip) {
  TypeGen g(707);
  for (int i = 0; i < cases; ++i) {
    auto e = g.open_type(4);
    VarSet free(g.vars().begin(), g.vars().end());
    auto back = parse_type(to_text(e), free);
    ASSERT_TRUE(alpha_eq(back, e)) << to_text(e) << "\n" << to_text(back);
    ASSERT_EQ(to_text(back), to_text(e));
  }
}
