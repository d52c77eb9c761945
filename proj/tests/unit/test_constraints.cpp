#include <gtest/gtest.h>

#include "minerl/constraints.hpp"
#include "minerl/parser.hpp"
#include "minerl/subty.hpp"
#include "minerl/tally.hpp"
#include "type_helpers.hpp"

using namespace minerl;

namespace {

struct ConstraintsTest : ::testing::Test {
  TypeStore s;
  test::TypeReader T{s};
  TypeRef want() { return s.mk_var(s.fresh_var("want")); }
};

// Collects the conjuncts of an And (or the constraint itself).
std::vector<ConstraintPtr> conjuncts(const ConstraintPtr& c) {
  if (c->kind == Constraint::Kind::And) return c->parts;
  return {c};
}

const Constraint* find_kind(const ConstraintPtr& c, Constraint::Kind k) {
  for (auto& p : conjuncts(c))
    if (p->kind == k) return p.get();
  return nullptr;
}

TEST_F(ConstraintsTest, Constants) {
  TypeRef t = want();
  GenResult r = gen_expr(s, *int_expr(1), t);
  ASSERT_EQ(r.constraint->kind, Constraint::Kind::SubTy);
  EXPECT_EQ(r.constraint->lhs, s.mk_singleton(BigInt(1)));
  EXPECT_EQ(r.constraint->rhs, t);
  EXPECT_TRUE(r.fresh.empty());
}

TEST_F(ConstraintsTest, Variables) {
  TypeRef t = want();
  GenResult r = gen_expr(s, *var_expr("x"), t);
  ASSERT_EQ(r.constraint->kind, Constraint::Kind::VarSub);
  EXPECT_EQ(r.constraint->var, "x");
  EXPECT_EQ(r.constraint->rhs, t);
  EXPECT_TRUE(r.fresh.empty());
}

TEST_F(ConstraintsTest, Abstraction) {
  TypeRef t = want();
  GenResult r = gen_expr(s, *parse_expr("fun x -> x"), t);
  EXPECT_EQ(r.fresh.size(), 2u);
  const Constraint* sub = find_kind(r.constraint, Constraint::Kind::SubTy);
  const Constraint* def = find_kind(r.constraint, Constraint::Kind::Def);
  ASSERT_TRUE(sub && def);
  EXPECT_EQ(sub->rhs, t);
  TypeNode arrow = s.node(sub->lhs);
  ASSERT_EQ(arrow.kind, NodeKind::Arrow);
  ASSERT_EQ(def->env.size(), 1u);
  EXPECT_EQ(def->env.at("x"), arrow.lhs);
  EXPECT_EQ(s.free_ty_vars(sub->lhs).size(), 2u);
  for (auto v : s.free_ty_vars(sub->lhs)) EXPECT_EQ(r.fresh.count(v), 1u);
}

TEST_F(ConstraintsTest, PatternEnvironments) {
  TypeRef t = want();
  PatGenResult w = gen_pat_env(s, t, gpat(wild_pat(), true_guard()));
  EXPECT_TRUE(w.env.empty());
  EXPECT_TRUE(w.fresh.empty());

  PatGenResult v = gen_pat_env(s, t, gpat(bind_pat("x"), true_guard()));
  ASSERT_EQ(v.env.size(), 1u);
  EXPECT_EQ(v.env.at("x"), t);

  PatGenResult p = gen_pat_env(s, t, gpat(pair_pat(bind_pat("a"), bind_pat("b"))));
  EXPECT_EQ(p.fresh.size(), 2u);
  ASSERT_EQ(p.env.size(), 2u);
  const Constraint* sub = nullptr;
  for (auto& c : conjuncts(p.constraint))
    if (c->kind == Constraint::Kind::SubTy && c->lhs == t) sub = c.get();
  ASSERT_TRUE(sub);
  EXPECT_EQ(sub->rhs, s.mk_pair(p.env.at("a"), p.env.at("b")));
}

TEST_F(ConstraintsTest, Definitions) {
  Program prog = parse_program(
      "id = fun x -> x\n"
      "g : (Int -> Int) & (Float -> Float) = fun y -> y\n"
      "in 1",
      s);
  DefGenResult id = gen_def(s, prog.defs[0], 0);
  ASSERT_EQ(id.env.size(), 1u);
  EXPECT_TRUE(id.env.at("id").quantified.empty());
  EXPECT_EQ(s.node(id.env.at("id").body).kind, NodeKind::Var);

  DefGenResult g = gen_def(s, prog.defs[1], 1);
  int defs = 0;
  for (auto& c : conjuncts(g.constraint))
    if (c->kind == Constraint::Kind::Def) ++defs;
  EXPECT_EQ(defs, 2);
  EXPECT_EQ(annotation_arrows(s, prog.defs[1]).size(), 2u);

  Program bad = parse_program("h : forall 'a. 'a = fun z -> z in 1", s);
  EXPECT_THROW(gen_def(s, bad.defs[0], 0), MalformedAnnotation);
}

TEST_F(ConstraintsTest, Programs) {
  TypeRef t = want();
  ProgConstraint pc = gen_program(s, parse_program("in 1", s), t);
  EXPECT_TRUE(pc.env.empty());
  ASSERT_EQ(pc.main->kind, Constraint::Kind::SubTy);
  EXPECT_EQ(pc.main->lhs, s.mk_singleton(BigInt(1)));
  EXPECT_EQ(pc.main->rhs, t);

  ProgConstraint two = gen_program(s, parse_program("f = fun x -> x\ng = fun y -> f y\nin g 1", s), t);
  EXPECT_EQ(two.env.size(), 2u);
  EXPECT_TRUE(two.env.count("f") && two.env.count("g"));
}

TEST_F(ConstraintsTest, RewriteVariables) {
  TypeRef t = want();
  RewriteResult mono = rewrite(s, {}, {{"x", s.mk_int()}}, *c_var("x", t, {}));
  ASSERT_EQ(mono.constraint->kind, SimpleConstraint::Kind::SubTy);
  EXPECT_EQ(mono.constraint->lhs, s.mk_int());
  EXPECT_EQ(mono.constraint->rhs, t);

  TypeVarId a = T.var("a");
  SchemeEnv sigma{{"f", make_scheme(s, {a}, T("'a -> 'a"))}};
  RewriteResult poly = rewrite(s, sigma, {}, *c_var("f", t, {}));
  ASSERT_EQ(poly.constraint->kind, SimpleConstraint::Kind::SubTy);
  ASSERT_EQ(poly.fresh.size(), 1u);
  TypeVarId a2 = *poly.fresh.begin();
  EXPECT_NE(a2, a);
  EXPECT_EQ(poly.constraint->lhs, s.mk_arrow(s.mk_var(a2), s.mk_var(a2)));

  EXPECT_THROW(rewrite(s, {}, {}, *c_var("nope", t, {3, 4})), ScopeError);
  try {
    rewrite(s, {}, {}, *c_var("nope", t, {3, 4}));
  } catch (const ScopeError& e) {
    EXPECT_EQ(e.kind, ScopeError::Kind::Unbound);
    EXPECT_EQ(e.span.line, 3);
    EXPECT_EQ(e.span.col, 4);
  }
}

int count_or(const SimpleConstraint& c) {
  int n = c.kind == SimpleConstraint::Kind::Or ? 1 : 0;
  for (auto& p : c.parts) n += count_or(*p);
  return n;
}

TEST_F(ConstraintsTest, RewriteCase) {
  TypeRef t = want();
  GenResult g = gen_expr(s, *parse_expr("case 1 of 0 -> 0 ; x -> x end"), t);
  std::vector<UnlessRecord> unless;
  RewriteResult r = rewrite(s, {}, {}, *g.constraint, &unless);
  EXPECT_EQ(count_or(*r.constraint), 2);  // one disjunction per branch
  EXPECT_EQ(unless.size(), 2u);
  SolutionSet sols = tally(s, *r.constraint);
  ASSERT_FALSE(sols.empty());
  for (auto& th : sols) EXPECT_TRUE(solves(s, th, *r.constraint));
}

TEST_F(ConstraintsTest, EquivConstraint) {
  TypeVarId a = T.var("a");
  SimplePtr e = equiv_constraint(s, {{a, s.mk_int()}});
  ASSERT_EQ(e->kind, SimpleConstraint::Kind::And);
  ASSERT_EQ(e->parts.size(), 2u);
  EXPECT_EQ(e->parts[0]->lhs, s.mk_var(a));
  EXPECT_EQ(e->parts[0]->rhs, s.mk_int());
  EXPECT_EQ(e->parts[1]->lhs, s.mk_int());
  EXPECT_EQ(e->parts[1]->rhs, s.mk_var(a));

  SimplePtr none = equiv_constraint(s, {});
  EXPECT_TRUE(solves(s, {}, *none));
  EXPECT_FALSE(tally(s, *none).empty());

  SimplePtr idc = equiv_constraint(s, {{a, s.mk_var(a)}});
  EXPECT_TRUE(solves(s, {{a, T("Float")}}, *idc));
}

TEST_F(ConstraintsTest, FreshSetsDisjoint) {
  Program p = parse_program(
      "f = fun x -> case x of (a, b) -> (b, a) ; _ -> x end\n"
      "in f (1, 2)",
      s);
  TypeVarId user = T.var("u");
  TypeRef t = want();
  ProgConstraint pc = gen_program(s, p, t);
  RewriteResult defs = rewrite(s, {}, {}, *pc.defs);
  for (auto v : defs.fresh) EXPECT_EQ(pc.fresh.count(v), 0u);
  EXPECT_EQ(pc.fresh.count(user), 0u);
  EXPECT_EQ(defs.fresh.count(user), 0u);
}

TEST_F(ConstraintsTest, Sexpr) {
  TypeRef t = want();
  GenResult g = gen_expr(s, *parse_expr("fun x -> x"), t);
  std::string a = to_sexpr(s, *g.constraint);
  EXPECT_EQ(a.front(), '(');
  EXPECT_NE(a.find("def"), std::string::npos);
}

}  // namespace
