#include <gtest/gtest.h>

#include "generators.hpp"
#include "minerl/parser.hpp"
#include "minerl/pretty.hpp"

using namespace minerl;

namespace {

TEST(Parser, ProgramShapes) {
  TypeStore s;
  Program p = parse_program("f = fun x -> x in f 1", s);
  ASSERT_EQ(p.defs.size(), 1u);
  EXPECT_EQ(p.defs[0].name, "f");
  EXPECT_EQ(p.defs[0].binder, "x");
  EXPECT_TRUE(expr_equal(*p.main, *app_expr(var_expr("f"), int_expr(1))));

  Program q = parse_program("in 1", s);
  EXPECT_TRUE(q.defs.empty());
  EXPECT_TRUE(expr_equal(*q.main, *int_expr(1)));
}

TEST(Parser, Errors) {
  TypeStore s;
  EXPECT_THROW(parse_expr("fun -> 1"), ParseError);
  try {
    parse_program("f = fun x -> (x,\nin f 1", s);
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.col(), 1);
  }
  EXPECT_THROW(parse_program("f = fun x -> x\nf = fun y -> y\nin 1", s), ParseError);
  std::map<std::string, TypeVarId> vars;
  EXPECT_THROW(parse_type("rec X. X | Int", s, vars), ParseError);
}

TEST(Parser, FloatsNeedADot) {
  ExprPtr i = parse_expr("1");
  ExprPtr f = parse_expr("1.0");
  EXPECT_TRUE(i->value.is_int());
  EXPECT_TRUE(f->value.is_float());
  EXPECT_FALSE(alpha_equal(*i, *f));
}

TEST(Parser, BigIntegers) {
  ExprPtr e = parse_expr("123456789012345678901234567890");
  ASSERT_TRUE(e->value.is_int());
  EXPECT_EQ(e->value.as_int().str(), "123456789012345678901234567890");
}

TEST(FreeVars, Expressions) {
  EXPECT_TRUE(free_vars_expr(*parse_expr("fun x -> x")).empty());
  EXPECT_EQ(free_vars_expr(*parse_expr("x y")), (std::set<std::string>{"x", "y"}));
  ExprPtr c = case_expr(var_expr("y"),
                        {clause(pair_pat(bind_pat("x"), capture_pat("z")),
                                test_var(GuardType::IsInt, "x"), var_expr("x"))});
  EXPECT_EQ(free_vars_expr(*c), (std::set<std::string>{"y", "z"}));
}

TEST(FreeVars, GuardedPatterns) {
  EXPECT_TRUE(free_vars_gpat(gpat(bind_pat("x"), test_var(GuardType::IsInt, "x"))).empty());
  EXPECT_EQ(free_vars_gpat(gpat(wild_pat(), test_var(GuardType::IsInt, "y"))),
            (std::set<std::string>{"y"}));
  EXPECT_EQ(free_vars_gpat(gpat(capture_pat("z"), true_guard())), (std::set<std::string>{"z"}));
}

TEST(Patterns, VarsAndLinearity) {
  EXPECT_EQ(vars_of(*pair_pat(bind_pat("x"), bind_pat("y"))), (std::set<std::string>{"x", "y"}));
  EXPECT_TRUE(vars_of(*capture_pat("z")).empty());
  EXPECT_TRUE(vars_of(*wild_pat()).empty());
  EXPECT_FALSE(is_linear(*pair_pat(bind_pat("x"), bind_pat("x"))));
  EXPECT_TRUE(is_linear(*pair_pat(bind_pat("x"), bind_pat("y"))));
  EXPECT_TRUE(is_linear(*pair_pat(bind_pat("x"), capture_pat("x"))));
}

TEST(AlphaEqual, Examples) {
  EXPECT_TRUE(alpha_equal(*parse_expr("fun x -> x"), *parse_expr("fun y -> y")));
  EXPECT_FALSE(alpha_equal(*parse_expr("fun x -> y"), *parse_expr("fun y -> y")));
  EXPECT_TRUE(alpha_equal(*parse_expr("(1, fun x -> x)"), *parse_expr("(1, fun z -> z)")));
  EXPECT_TRUE(alpha_equal(*parse_expr("case 1 of x when is_int x -> x end"),
                          *parse_expr("case 1 of w when is_int w -> w end")));
}

TEST(AlphaEqual, EquivalenceOnValues) {
  test::Gen g(7);
  std::vector<ValuePtr> vs;
  for (int i = 0; i < 40; ++i) vs.push_back(g.value(2));
  vs.push_back(parse_expr("fun a -> a"));
  vs.push_back(parse_expr("fun b -> b"));
  vs.push_back(parse_expr("fun b -> 1"));
  for (auto& a : vs) {
    EXPECT_TRUE(alpha_equal(*a, *a));
    for (auto& b : vs) {
      EXPECT_EQ(alpha_equal(*a, *b), alpha_equal(*b, *a));
      if (!alpha_equal(*a, *b)) continue;
      for (auto& c : vs)
        if (alpha_equal(*b, *c)) EXPECT_TRUE(alpha_equal(*a, *c));
    }
  }
}

TEST(RoundTrip, GeneratedExpressions) {
  test::Gen g(11);
  for (int i = 0; i < 300; ++i) {
    ExprPtr e = g.expr(4);
    std::string text = pretty_expr(*e);
    ExprPtr back;
    ASSERT_NO_THROW(back = parse_expr(text)) << text;
    EXPECT_TRUE(expr_equal(*e, *back)) << text << "\n" << pretty_expr(*back);
  }
}

TEST(RoundTrip, ProgramsWithAnnotations) {
  TypeStore s;
  const char* src =
      "# no_exhaustiveness\n"
      "f : forall 'a. ('a -> 'a) & (Int -> (rec L. 0 | (Int, L))) = fun x -> x\n"
      "g = fun y -> case y of (^y, _) when is_int y, oracle -> 1 ; _ -> 2.5 end\n"
      "in g (f 1)\n";
  Program p = parse_program(src, s);
  Program q = parse_program(pretty_program(s, p), s);
  EXPECT_TRUE(program_equal(s, p, q)) << pretty_program(s, p);
  EXPECT_TRUE(p.defs[0].no_exhaustiveness);
  EXPECT_FALSE(p.defs[1].no_exhaustiveness);
}

TEST(Patterns, BindersDisjointFromFreeVars) {
  test::Gen g(5);
  for (int i = 0; i < 300; ++i) {
    int b = 0;
    PatternPtr p = g.pattern(3, &b, false);
    std::set<std::string> fv = free_vars_gpat(gpat(p, true_guard()));
    for (const auto& x : vars_of(*p)) EXPECT_EQ(fv.count(x), 0u);
  }
}

}  // namespace
