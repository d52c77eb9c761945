#include <gtest/gtest.h>

#include "generators.hpp"
#include "minerl/interp.hpp"
#include "minerl/patenv.hpp"
#include "minerl/pretty.hpp"
#include "minerl/subty.hpp"
#include "type_helpers.hpp"

using namespace minerl;

namespace {

struct PatEnvTest : ::testing::Test {
  TypeStore s;
  test::TypeReader T{s};

  bool env_equiv(const TypeEnv& a, const std::map<std::string, std::string>& b) {
    if (a.size() != b.size()) return false;
    for (auto& [x, t] : b) {
      auto it = a.find(x);
      if (it == a.end() || !is_equiv(s, it->second, T(t))) return false;
    }
    return true;
  }
};

GuardPtr is_int(const std::string& x) { return test_var(GuardType::IsInt, x); }

TEST_F(PatEnvTest, InterEnv) {
  TypeEnv a{{"x", s.mk_int()}}, b{{"y", s.mk_float()}};
  EXPECT_TRUE(env_equiv(inter_env(s, a, b), {{"x", "Int"}, {"y", "Float"}}));
  EXPECT_TRUE(env_equiv(inter_env(s, a, {{"x", T("1")}}), {{"x", "1"}}));
  EXPECT_TRUE(env_equiv(inter_env(s, a, {}), {{"x", "Int"}}));
}

TEST_F(PatEnvTest, GuardEnv) {
  EXPECT_TRUE(env_equiv(guard_env(s, *is_int("z")), {{"z", "Int"}}));
  TypeEnv both = guard_env(s, *and_guard(is_int("z"), test_var(GuardType::IsFloat, "z")));
  EXPECT_TRUE(is_bottomed(s, both));
  EXPECT_TRUE(guard_env(s, *oracle_guard()).empty());
  EXPECT_TRUE(guard_env(s, *true_guard()).empty());
}

TEST_F(PatEnvTest, PatEnv) {
  TypeRef t = T("(1, Int)");
  EXPECT_TRUE(env_equiv(pat_env(s, t, *pair_pat(bind_pat("a"), bind_pat("b"))),
                        {{"a", "1"}, {"b", "Int"}}));
  EXPECT_TRUE(pat_env(s, t, *wild_pat()).empty());
  TypeRef u = T("(0 | 1, 1 | 2)");
  EXPECT_TRUE(env_equiv(pat_env(s, u, *pair_pat(bind_pat("x"), bind_pat("x"))), {{"x", "1"}}));
  EXPECT_THROW(pat_env(s, s.mk_int(), *pair_pat(bind_pat("a"), wild_pat())), NotAPairType);
}

TEST_F(PatEnvTest, GpatEnv) {
  GuardedPattern pg = gpat(pair_pat(bind_pat("a"), bind_pat("z")), is_int("z"));
  EXPECT_TRUE(env_equiv(gpat_env(s, T("(1, Int)"), pg), {{"a", "1"}, {"z", "Int"}}));
  EXPECT_TRUE(gpat_env(s, s.top(), gpat(wild_pat(), true_guard())).empty());
  EXPECT_TRUE(env_equiv(gpat_env(s, s.top(), gpat(bind_pat("x"), test_var(GuardType::IsPair, "x"))),
                        {{"x", "(Any, Any)"}}));
}

TEST_F(PatEnvTest, Safety) {
  EXPECT_TRUE(safe_down(*is_int("z"), {"z"}));
  EXPECT_FALSE(safe_down(*is_int("y"), {"z"}));
  EXPECT_FALSE(safe_down(*and_guard(is_int("z"), oracle_guard()), {"z"}));
  EXPECT_TRUE(safe_up(*is_int("y")));
  EXPECT_TRUE(safe_up(*oracle_guard()));
}

TEST_F(PatEnvTest, PatTy) {
  EXPECT_TRUE(is_empty(s, pat_ty(s, *val_pat(float_expr(1.5)), {}, Dir::Down)));
  EXPECT_TRUE(is_equiv(s, pat_ty(s, *val_pat(float_expr(1.5)), {}, Dir::Up), T("Float")));
  EXPECT_EQ(pat_ty(s, *val_pat(int_expr(4)), {}, Dir::Down), T("4"));
  EXPECT_TRUE(is_equiv(s, pat_ty(s, *pair_pat(val_pat(int_expr(1)), bind_pat("z")),
                                 {{"z", s.mk_int()}}, Dir::Up),
                       T("(1, Int)")));
  EXPECT_EQ(pat_ty(s, *wild_pat(), {}, Dir::Up), s.top());
  EXPECT_EQ(pat_ty(s, *wild_pat(), {}, Dir::Down), s.top());
}

// The three guard examples on the pattern (1, z).
TEST_F(PatEnvTest, GuardExamples) {
  PatternPtr p = pair_pat(val_pat(int_expr(1)), bind_pat("z"));
  GuardedPattern g1 = gpat(p, is_int("z"));
  GuardedPattern g2 = gpat(p, is_int("y"));
  GuardedPattern g3 = gpat(p, and_guard(is_int("z"), oracle_guard()));
  EXPECT_TRUE(is_equiv(s, gpat_ty(s, g1, Dir::Up), T("(1, Int)")));
  EXPECT_TRUE(is_equiv(s, gpat_ty(s, g1, Dir::Down), T("(1, Int)")));
  EXPECT_TRUE(is_equiv(s, gpat_ty(s, g2, Dir::Up), T("(1, Any)")));
  EXPECT_TRUE(is_equiv(s, gpat_ty(s, g2, Dir::Down), s.bottom()));
  EXPECT_TRUE(is_equiv(s, gpat_ty(s, g3, Dir::Up), T("(1, Int)")));
  EXPECT_TRUE(is_equiv(s, gpat_ty(s, g3, Dir::Down), s.bottom()));
}

std::vector<std::string> binders(int n) {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

TEST_F(PatEnvTest, AcceptingBelowPotential) {
  test::Gen g(31);
  for (int i = 0; i < 400; ++i) {
    int b = 0;
    PatternPtr p = g.pattern(3, &b, false);
    GuardedPattern pg = gpat(p, g.guard(2, binders(b), true));
    EXPECT_TRUE(is_subtype(s, gpat_ty(s, pg, Dir::Down), gpat_ty(s, pg, Dir::Up)))
        << pretty_gpat(pg);
  }
}

TEST_F(PatEnvTest, MatchingAgreesWithTypes) {
  test::Gen g(37);
  FunEnv delta;
  int checked_down = 0;
  for (int i = 0; i < 400; ++i) {
    int b = 0;
    PatternPtr p = g.pattern(3, &b, false);
    GuardedPattern pg = gpat(p, g.guard(2, binders(b), true));
    TypeRef up = gpat_ty(s, pg, Dir::Up);
    TypeRef down = gpat_ty(s, pg, Dir::Down);
    for (int k = 0; k < 12; ++k) {
      ValuePtr v = g.value(2);
      TypeRef cv = canonical_type(s, *v);
      for (auto strat : {OracleStrategy::always_true(), OracleStrategy::always_false()}) {
        bool matched = match_guarded(v, pg, delta, strat).has_value();
        if (matched) EXPECT_TRUE(is_subtype(s, cv, up)) << pretty_gpat(pg) << " " << pretty_expr(*v);
        if (is_subtype(s, cv, down)) {
          ++checked_down;
          EXPECT_TRUE(matched) << pretty_gpat(pg) << " " << pretty_expr(*v);
        }
      }
    }
  }
  EXPECT_GT(checked_down, 100);
}

TEST_F(PatEnvTest, EnvMonotone) {
  test::Gen g(41);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    int b = 0;
    PatternPtr p = g.pattern(3, &b, false);
    GuardedPattern pg = gpat(p, g.guard(2, binders(b), true));
    TypeRef t = g.type(s, 3, {}, false);
    TypeRef t2 = s.mk_union(t, g.type(s, 2, {}, false));
    if (!is_subtype(s, t2, T("(Any, Any)")) && p->kind == Pattern::Kind::Pair) continue;
    TypeEnv e1, e2;
    try {
      e1 = gpat_env(s, t, pg);
      e2 = gpat_env(s, t2, pg);
    } catch (const NotAPairType&) {
      continue;
    }
    ++checked;
    for (auto& [x, ty] : e1) {
      ASSERT_TRUE(e2.count(x));
      EXPECT_TRUE(is_subtype(s, ty, e2.at(x))) << pretty_gpat(pg) << " " << x;
    }
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
