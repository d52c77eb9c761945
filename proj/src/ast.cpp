#include "minerl/ast.hpp"

#include <algorithm>
#include <map>

namespace minerl {

ExprPtr var_expr(std::string name, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  e->span = s;
  return e;
}

ExprPtr const_expr(Const c, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Const;
  e->value = std::move(c);
  e->span = s;
  return e;
}

ExprPtr int_expr(long long i, Span s) { return const_expr(Const::integer(i), s); }
ExprPtr float_expr(double d, Span s) { return const_expr(Const(d), s); }

ExprPtr abs_expr(std::string binder, ExprPtr body, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Abs;
  e->name = std::move(binder);
  e->lhs = std::move(body);
  e->span = s;
  return e;
}

ExprPtr app_expr(ExprPtr fn, ExprPtr arg, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::App;
  e->lhs = std::move(fn);
  e->rhs = std::move(arg);
  e->span = s;
  return e;
}

ExprPtr pair_expr(ExprPtr a, ExprPtr b, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Pair;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  e->span = s;
  return e;
}

ExprPtr case_expr(ExprPtr scrutiny, std::vector<Clause> clauses, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Case;
  e->lhs = std::move(scrutiny);
  e->clauses = std::move(clauses);
  e->span = s;
  return e;
}

Clause clause(PatternPtr p, GuardPtr g, ExprPtr body) {
  Clause c;
  c.span = p->span;
  c.gpat = gpat(std::move(p), std::move(g));
  c.body = std::move(body);
  return c;
}

Clause clause(PatternPtr p, ExprPtr body) { return clause(std::move(p), nullptr, std::move(body)); }

PatternPtr val_pat(ValuePtr v, Span s) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Val;
  p->value = std::move(v);
  p->span = s;
  return p;
}

PatternPtr wild_pat(Span s) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Wildcard;
  p->span = s;
  return p;
}

PatternPtr bind_pat(std::string name, Span s) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Bind;
  p->name = std::move(name);
  p->span = s;
  return p;
}

PatternPtr capture_pat(std::string name, Span s) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Capture;
  p->name = std::move(name);
  p->span = s;
  return p;
}

PatternPtr pair_pat(PatternPtr a, PatternPtr b, Span s) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Pair;
  p->lhs = std::move(a);
  p->rhs = std::move(b);
  p->span = s;
  return p;
}

GuardPtr test_var(GuardType t, std::string name, Span s) {
  auto g = std::make_shared<Guard>();
  g->kind = Guard::Kind::TestVar;
  g->type = t;
  g->name = std::move(name);
  g->span = s;
  return g;
}

GuardPtr test_val(GuardType t, ValuePtr v, Span s) {
  auto g = std::make_shared<Guard>();
  g->kind = Guard::Kind::TestVal;
  g->type = t;
  g->value = std::move(v);
  g->span = s;
  return g;
}

GuardPtr oracle_guard(Span s) {
  auto g = std::make_shared<Guard>();
  g->kind = Guard::Kind::Oracle;
  g->span = s;
  return g;
}

GuardPtr true_guard(Span s) {
  auto g = std::make_shared<Guard>();
  g->kind = Guard::Kind::True;
  g->span = s;
  return g;
}

GuardPtr and_guard(GuardPtr a, GuardPtr b, Span s) {
  auto g = std::make_shared<Guard>();
  g->kind = Guard::Kind::And;
  g->lhs = std::move(a);
  g->rhs = std::move(b);
  g->span = s;
  return g;
}

GuardedPattern gpat(PatternPtr p, GuardPtr g) {
  if (!g) g = true_guard(p->span);
  return GuardedPattern{std::move(p), std::move(g)};
}

bool is_value(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
    case Expr::Kind::Abs: return true;
    case Expr::Kind::Pair: return is_value(*e.lhs) && is_value(*e.rhs);
    default: return false;
  }
}

bool value_matches(const Expr& v, GuardType t) {
  switch (t) {
    case GuardType::IsInt: return v.kind == Expr::Kind::Const && v.value.is_int();
    case GuardType::IsFloat: return v.kind == Expr::Kind::Const && v.value.is_float();
    case GuardType::IsPair: return v.kind == Expr::Kind::Pair;
    case GuardType::IsFun: return v.kind == Expr::Kind::Abs;
  }
  return false;
}

// ---------------------------------------------------------------------------

std::set<std::string> vars_of(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Bind: return {p.name};
    case Pattern::Kind::Pair: {
      auto l = vars_of(*p.lhs);
      auto r = vars_of(*p.rhs);
      l.insert(r.begin(), r.end());
      return l;
    }
    default: return {};
  }
}

namespace {

void collect_binds(const Pattern& p, std::vector<std::string>& out) {
  if (p.kind == Pattern::Kind::Bind) out.push_back(p.name);
  if (p.kind == Pattern::Kind::Pair) {
    collect_binds(*p.lhs, out);
    collect_binds(*p.rhs, out);
  }
}

}  // namespace

bool is_linear(const Pattern& p) {
  std::vector<std::string> names;
  collect_binds(p, names);
  std::set<std::string> uniq(names.begin(), names.end());
  return uniq.size() == names.size();
}

std::set<std::string> free_vars_pattern(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Val: return free_vars_expr(*p.value);
    case Pattern::Kind::Capture: return {p.name};
    case Pattern::Kind::Pair: {
      auto l = free_vars_pattern(*p.lhs);
      auto r = free_vars_pattern(*p.rhs);
      l.insert(r.begin(), r.end());
      return l;
    }
    default: return {};
  }
}

std::set<std::string> free_vars_guard(const Guard& g) {
  switch (g.kind) {
    case Guard::Kind::TestVar: return {g.name};
    case Guard::Kind::TestVal: return free_vars_expr(*g.value);
    case Guard::Kind::And: {
      auto l = free_vars_guard(*g.lhs);
      auto r = free_vars_guard(*g.rhs);
      l.insert(r.begin(), r.end());
      return l;
    }
    default: return {};
  }
}

std::set<std::string> free_vars_gpat(const GuardedPattern& pg) {
  auto fv = free_vars_pattern(*pg.pattern);
  auto bound = vars_of(*pg.pattern);
  for (const auto& x : free_vars_guard(*pg.guard))
    if (!bound.count(x)) fv.insert(x);
  return fv;
}

std::set<std::string> free_vars_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var: return {e.name};
    case Expr::Kind::Const: return {};
    case Expr::Kind::Abs: {
      auto fv = free_vars_expr(*e.lhs);
      fv.erase(e.name);
      return fv;
    }
    case Expr::Kind::App:
    case Expr::Kind::Pair: {
      auto l = free_vars_expr(*e.lhs);
      auto r = free_vars_expr(*e.rhs);
      l.insert(r.begin(), r.end());
      return l;
    }
    case Expr::Kind::Case: {
      auto fv = free_vars_expr(*e.lhs);
      for (const auto& c : e.clauses) {
        auto pg = free_vars_gpat(c.gpat);
        fv.insert(pg.begin(), pg.end());
        auto bound = vars_of(*c.gpat.pattern);
        for (const auto& x : free_vars_expr(*c.body))
          if (!bound.count(x)) fv.insert(x);
      }
      return fv;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Equality

namespace {

// Binders on both sides are numbered by the same counter, so two bound
// occurrences correspond when they resolve to the same number.
class Comparer {
 public:
  explicit Comparer(bool exact) : exact_(exact) {}

  bool expr(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Expr::Kind::Var: return var(a.name, b.name);
      case Expr::Kind::Const: return a.value == b.value;
      case Expr::Kind::Abs: {
        if (exact_ && a.name != b.name) return false;
        push({a.name}, {b.name});
        bool r = expr(*a.lhs, *b.lhs);
        pop(1);
        return r;
      }
      case Expr::Kind::App:
      case Expr::Kind::Pair: return expr(*a.lhs, *b.lhs) && expr(*a.rhs, *b.rhs);
      case Expr::Kind::Case: {
        if (!expr(*a.lhs, *b.lhs) || a.clauses.size() != b.clauses.size()) return false;
        for (std::size_t i = 0; i < a.clauses.size(); ++i)
          if (!clause(a.clauses[i], b.clauses[i])) return false;
        return true;
      }
    }
    return false;
  }

  bool pattern(const Pattern& a, const Pattern& b, std::map<std::string, std::string>& ren,
               std::map<std::string, std::string>& back) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Pattern::Kind::Val: return expr(*a.value, *b.value);
      case Pattern::Kind::Wildcard: return true;
      case Pattern::Kind::Capture: return var(a.name, b.name);
      case Pattern::Kind::Bind: {
        if (exact_ && a.name != b.name) return false;
        auto f = ren.find(a.name);
        auto g = back.find(b.name);
        if (f == ren.end() && g == back.end()) {
          ren.emplace(a.name, b.name);
          back.emplace(b.name, a.name);
          return true;
        }
        return f != ren.end() && g != back.end() && f->second == b.name;
      }
      case Pattern::Kind::Pair:
        return pattern(*a.lhs, *b.lhs, ren, back) && pattern(*a.rhs, *b.rhs, ren, back);
    }
    return false;
  }

  bool guard(const Guard& a, const Guard& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Guard::Kind::TestVar: return a.type == b.type && var(a.name, b.name);
      case Guard::Kind::TestVal: return a.type == b.type && expr(*a.value, *b.value);
      case Guard::Kind::And: return guard(*a.lhs, *b.lhs) && guard(*a.rhs, *b.rhs);
      default: return true;
    }
  }

 private:
  bool clause(const Clause& a, const Clause& b) {
    std::map<std::string, std::string> ren, back;
    if (!pattern(*a.gpat.pattern, *b.gpat.pattern, ren, back)) return false;
    std::vector<std::string> la, lb;
    for (const auto& [x, y] : ren) {
      la.push_back(x);
      lb.push_back(y);
    }
    push(la, lb);
    bool r = guard(*a.gpat.guard, *b.gpat.guard) && expr(*a.body, *b.body);
    pop(la.size());
    return r;
  }

  void push(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      env_a_.emplace_back(a[i], counter_);
      env_b_.emplace_back(b[i], counter_);
      ++counter_;
    }
  }

  void pop(std::size_t n) {
    env_a_.resize(env_a_.size() - n);
    env_b_.resize(env_b_.size() - n);
  }

  static std::optional<int> lookup(const std::vector<std::pair<std::string, int>>& env,
                                   const std::string& x) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == x) return it->second;
    return std::nullopt;
  }

  bool var(const std::string& a, const std::string& b) {
    auto ia = lookup(env_a_, a);
    auto ib = lookup(env_b_, b);
    if (ia || ib) return ia == ib;
    return a == b;
  }

  bool exact_;
  int counter_ = 0;
  std::vector<std::pair<std::string, int>> env_a_, env_b_;
};

}  // namespace

bool alpha_equal(const Expr& a, const Expr& b) { return Comparer(false).expr(a, b); }

bool expr_equal(const Expr& a, const Expr& b) { return Comparer(true).expr(a, b); }

bool pattern_equal(const Pattern& a, const Pattern& b) {
  std::map<std::string, std::string> ren, back;
  return Comparer(true).pattern(a, b, ren, back);
}

bool guard_equal(const Guard& a, const Guard& b) { return Comparer(true).guard(a, b); }

bool scheme_equal(TypeStore& store, const TypeScheme& a, const TypeScheme& b) {
  if (a.quantified.size() != b.quantified.size()) return false;
  TypeSubstitution ren;
  for (std::size_t i = 0; i < a.quantified.size(); ++i)
    ren.emplace(b.quantified[i], store.mk_var(a.quantified[i]));
  return apply_subst(store, b.body, ren) == a.body;
}

bool program_equal(TypeStore& store, const Program& a, const Program& b) {
  if (a.defs.size() != b.defs.size()) return false;
  for (std::size_t i = 0; i < a.defs.size(); ++i) {
    const Def& x = a.defs[i];
    const Def& y = b.defs[i];
    if (x.name != y.name || x.binder != y.binder ||
        x.no_exhaustiveness != y.no_exhaustiveness ||
        x.annotation.has_value() != y.annotation.has_value())
      return false;
    if (x.annotation && !scheme_equal(store, *x.annotation, *y.annotation)) return false;
    if (!expr_equal(*x.body, *y.body)) return false;
  }
  return expr_equal(*a.main, *b.main);
}

}  // namespace minerl
