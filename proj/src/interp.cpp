#include "minerl/interp.hpp"

#include <atomic>

namespace minerl {

FunEnv fun_env(const Program& p) {
  FunEnv d;
  for (const auto& def : p.defs) d[def.name] = abs_expr(def.binder, def.body, def.span);
  return d;
}

bool OracleStrategy::next() {
  switch (kind_) {
    case Kind::AlwaysTrue: return true;
    case Kind::AlwaysFalse: return false;
    case Kind::Seeded: return (gen_() & 1u) != 0;
  }
  return true;
}

std::string OracleStrategy::describe() const {
  switch (kind_) {
    case Kind::AlwaysTrue: return "true";
    case Kind::AlwaysFalse: return "false";
    case Kind::Seeded: return "seed:" + std::to_string(seed_);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

std::string fresh_name(const std::string& base) {
  static std::atomic<unsigned> counter{0};
  return base + "%" + std::to_string(counter++);
}

std::set<std::string> range_fv(const ValueSubst& s) {
  std::set<std::string> out;
  for (const auto& [x, v] : s) {
    auto f = free_vars_expr(*v);
    out.insert(f.begin(), f.end());
  }
  return out;
}

ValueSubst without(const ValueSubst& s, const std::set<std::string>& names) {
  ValueSubst out;
  for (const auto& [x, v] : s)
    if (!names.count(x)) out.emplace(x, v);
  return out;
}

// Renames bound names of p according to `ren`; captures are uses and
// are substituted by `s`.
PatternPtr subst_pattern(const PatternPtr& p, const ValueSubst& s,
                         const std::map<std::string, std::string>& ren) {
  switch (p->kind) {
    case Pattern::Kind::Bind: {
      auto it = ren.find(p->name);
      return it == ren.end() ? p : bind_pat(it->second, p->span);
    }
    case Pattern::Kind::Capture: {
      auto it = s.find(p->name);
      return it == s.end() ? p : val_pat(it->second, p->span);
    }
    case Pattern::Kind::Pair: {
      auto a = subst_pattern(p->lhs, s, ren);
      auto b = subst_pattern(p->rhs, s, ren);
      if (a == p->lhs && b == p->rhs) return p;
      return pair_pat(a, b, p->span);
    }
    default: return p;
  }
}

ExprPtr subst_rec(const ExprPtr& e, const ValueSubst& s, const std::set<std::string>& rfv);

GuardPtr subst_guard_rec(const GuardPtr& g, const ValueSubst& s) {
  switch (g->kind) {
    case Guard::Kind::TestVar: {
      auto it = s.find(g->name);
      return it == s.end() ? g : test_val(g->type, it->second, g->span);
    }
    case Guard::Kind::And: {
      auto a = subst_guard_rec(g->lhs, s);
      auto b = subst_guard_rec(g->rhs, s);
      if (a == g->lhs && b == g->rhs) return g;
      return and_guard(a, b, g->span);
    }
    default: return g;
  }
}

ExprPtr subst_rec(const ExprPtr& e, const ValueSubst& s, const std::set<std::string>& rfv) {
  if (s.empty()) return e;
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = s.find(e->name);
      return it == s.end() ? e : it->second;
    }
    case Expr::Kind::Const: return e;
    case Expr::Kind::Abs: {
      ValueSubst inner = without(s, {e->name});
      if (inner.empty()) return e;
      if (rfv.count(e->name)) {
        std::string y = fresh_name(e->name);
        inner[e->name] = var_expr(y);
        return abs_expr(y, subst_rec(e->lhs, inner, rfv), e->span);
      }
      return abs_expr(e->name, subst_rec(e->lhs, inner, rfv), e->span);
    }
    case Expr::Kind::App:
      return app_expr(subst_rec(e->lhs, s, rfv), subst_rec(e->rhs, s, rfv), e->span);
    case Expr::Kind::Pair:
      return pair_expr(subst_rec(e->lhs, s, rfv), subst_rec(e->rhs, s, rfv), e->span);
    case Expr::Kind::Case: {
      std::vector<Clause> cls;
      for (const auto& c : e->clauses) {
        auto bound = vars_of(*c.gpat.pattern);
        // Captures and guard names are substituted with the outer map.
        ValueSubst inner = without(s, bound);
        std::map<std::string, std::string> ren;
        for (const auto& x : bound)
          if (rfv.count(x)) {
            ren[x] = fresh_name(x);
            inner[x] = var_expr(ren[x]);
          }
        Clause nc;
        nc.span = c.span;
        nc.gpat.pattern = subst_pattern(c.gpat.pattern, s, ren);
        nc.gpat.guard = subst_guard_rec(c.gpat.guard, inner);
        nc.body = subst_rec(c.body, inner, rfv);
        cls.push_back(std::move(nc));
      }
      return case_expr(subst_rec(e->lhs, s, rfv), std::move(cls), e->span);
    }
  }
  return e;
}

}  // namespace

ExprPtr subst_expr(const ExprPtr& e, const ValueSubst& s) { return subst_rec(e, s, range_fv(s)); }

GuardPtr subst_guard(const GuardPtr& g, const ValueSubst& s) { return subst_guard_rec(g, s); }

// ---------------------------------------------------------------------------
// Matching

std::optional<ValueSubst> match_pattern(const ValuePtr& v, const Pattern& p, const FunEnv& delta) {
  switch (p.kind) {
    case Pattern::Kind::Val:
      if (alpha_equal(*v, *p.value)) return ValueSubst{};
      return std::nullopt;
    case Pattern::Kind::Wildcard: return ValueSubst{};
    case Pattern::Kind::Bind: return ValueSubst{{p.name, v}};
    case Pattern::Kind::Capture: {
      auto it = delta.find(p.name);
      if (it == delta.end()) throw UnboundCapture("unbound captured variable ^" + p.name);
      if (alpha_equal(*v, *it->second)) return ValueSubst{};
      return std::nullopt;
    }
    case Pattern::Kind::Pair: {
      if (v->kind != Expr::Kind::Pair) return std::nullopt;
      auto s1 = match_pattern(v->lhs, *p.lhs, delta);
      auto s2 = match_pattern(v->rhs, *p.rhs, delta);
      if (!s1 || !s2) return std::nullopt;
      for (const auto& [x, w] : *s2) {
        auto it = s1->find(x);
        if (it == s1->end()) s1->emplace(x, w);
        else if (!alpha_equal(*it->second, *w)) return std::nullopt;
      }
      return s1;
    }
  }
  return std::nullopt;
}

bool eval_guard(const Guard& g, const FunEnv& delta, OracleStrategy& oracle) {
  switch (g.kind) {
    case Guard::Kind::TestVal: return value_matches(*g.value, g.type);
    case Guard::Kind::TestVar: {
      auto it = delta.find(g.name);
      return it != delta.end() && value_matches(*it->second, g.type);
    }
    case Guard::Kind::Oracle: return oracle.next();
    case Guard::Kind::True: return true;
    case Guard::Kind::And:
      return eval_guard(*g.lhs, delta, oracle) && eval_guard(*g.rhs, delta, oracle);
  }
  return false;
}

std::optional<ValueSubst> match_guarded(const ValuePtr& v, const GuardedPattern& pg,
                                        const FunEnv& delta, OracleStrategy& oracle) {
  auto s = match_pattern(v, *pg.pattern, delta);
  if (!s) return std::nullopt;
  if (!eval_guard(*subst_guard(pg.guard, *s), delta, oracle)) return std::nullopt;
  return s;
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

StepResult stuck(std::string why, const Expr& e) {
  return {StepResult::Kind::Stuck, nullptr, std::move(why), e.span};
}

StepResult stepped(ExprPtr e) { return {StepResult::Kind::Stepped, std::move(e), {}, {}}; }

}  // namespace

StepResult step(const FunEnv& delta, const ExprPtr& e, OracleStrategy& oracle) {
  if (is_value(*e)) return {StepResult::Kind::IsValue, e, {}, {}};
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = delta.find(e->name);
      if (it == delta.end()) return stuck("unbound variable " + e->name, *e);
      return stepped(it->second);
    }
    case Expr::Kind::App: {
      if (!is_value(*e->lhs)) {
        auto r = step(delta, e->lhs, oracle);
        if (r.kind != StepResult::Kind::Stepped) return r;
        return stepped(app_expr(r.expr, e->rhs, e->span));
      }
      if (!is_value(*e->rhs)) {
        auto r = step(delta, e->rhs, oracle);
        if (r.kind != StepResult::Kind::Stepped) return r;
        return stepped(app_expr(e->lhs, r.expr, e->span));
      }
      if (e->lhs->kind != Expr::Kind::Abs) return stuck("applied a non-function", *e);
      return stepped(subst_expr(e->lhs->lhs, {{e->lhs->name, e->rhs}}));
    }
    case Expr::Kind::Pair: {
      if (!is_value(*e->lhs)) {
        auto r = step(delta, e->lhs, oracle);
        if (r.kind != StepResult::Kind::Stepped) return r;
        return stepped(pair_expr(r.expr, e->rhs, e->span));
      }
      auto r = step(delta, e->rhs, oracle);
      if (r.kind != StepResult::Kind::Stepped) return r;
      return stepped(pair_expr(e->lhs, r.expr, e->span));
    }
    case Expr::Kind::Case: {
      if (!is_value(*e->lhs)) {
        auto r = step(delta, e->lhs, oracle);
        if (r.kind != StepResult::Kind::Stepped) return r;
        return stepped(case_expr(r.expr, e->clauses, e->span));
      }
      for (const auto& c : e->clauses) {
        std::optional<ValueSubst> s;
        try {
          s = match_guarded(e->lhs, c.gpat, delta, oracle);
        } catch (const UnboundCapture& ex) {
          return stuck(ex.what(), *e);
        }
        if (s) return stepped(subst_expr(c.body, *s));
      }
      return stuck("no branch matched", *e);
    }
    default: break;
  }
  return stuck("no reduction applies", *e);
}

RunResult run(const Program& p, std::size_t fuel, OracleStrategy oracle) {
  FunEnv delta = fun_env(p);
  ExprPtr cur = p.main;
  for (std::size_t n = 0;; ++n) {
    if (is_value(*cur)) return {RunResult::Kind::Final, cur, {}, {}, n};
    if (n == fuel) return {RunResult::Kind::OutOfFuel, cur, {}, {}, n};
    auto r = step(delta, cur, oracle);
    if (r.kind == StepResult::Kind::Stuck) return {RunResult::Kind::Stuck, cur, r.reason, r.span, n};
    cur = r.expr;
  }
}

}  // namespace minerl
