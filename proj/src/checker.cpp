#include "minerl/checker.hpp"

#include <map>
#include <sstream>

#include "minerl/patenv.hpp"
#include "minerl/pretty.hpp"
#include "minerl/subty.hpp"

namespace minerl {

const char* diagnostic_kind_name(Diagnostic::Kind k) {
  switch (k) {
    case Diagnostic::Kind::TypeError: return "TypeError";
    case Diagnostic::Kind::NonExhaustive: return "NonExhaustive";
    case Diagnostic::Kind::UnreachableBranch: return "UnreachableBranch";
    case Diagnostic::Kind::UnboundVariable: return "UnboundVariable";
    case Diagnostic::Kind::MalformedAnnotation: return "MalformedAnnotation";
    case Diagnostic::Kind::Timeout: return "Timeout";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Renaming

namespace {

using Scope = std::map<std::string, std::string>;

class Renamer {
 public:
  std::string fresh(const std::string& base) { return base + "#" + std::to_string(next_++); }

  ExprPtr expr(const ExprPtr& e, const Scope& sc) {
    switch (e->kind) {
      case Expr::Kind::Var: return var_expr(lookup(sc, e->name), e->span);
      case Expr::Kind::Const: return e;
      case Expr::Kind::Abs: {
        Scope inner = sc;
        std::string y = inner[e->name] = fresh(e->name);
        return abs_expr(y, expr(e->lhs, inner), e->span);
      }
      case Expr::Kind::App: return app_expr(expr(e->lhs, sc), expr(e->rhs, sc), e->span);
      case Expr::Kind::Pair: return pair_expr(expr(e->lhs, sc), expr(e->rhs, sc), e->span);
      case Expr::Kind::Case: {
        std::vector<Clause> cls;
        for (const auto& c : e->clauses) {
          Scope inner = sc;
          for (const auto& x : vars_of(*c.gpat.pattern)) inner[x] = fresh(x);
          Clause nc;
          nc.span = c.span;
          nc.gpat.pattern = pattern(c.gpat.pattern, sc, inner);
          nc.gpat.guard = guard(c.gpat.guard, inner);
          nc.body = expr(c.body, inner);
          cls.push_back(std::move(nc));
        }
        return case_expr(expr(e->lhs, sc), std::move(cls), e->span);
      }
    }
    return e;
  }

 private:
  static std::string lookup(const Scope& sc, const std::string& x) {
    auto it = sc.find(x);
    return it == sc.end() ? x : it->second;
  }

  // Bound names come from `inner`, captured names from the outer scope.
  PatternPtr pattern(const PatternPtr& p, const Scope& outer, const Scope& inner) {
    switch (p->kind) {
      case Pattern::Kind::Bind: return bind_pat(lookup(inner, p->name), p->span);
      case Pattern::Kind::Capture: return capture_pat(lookup(outer, p->name), p->span);
      case Pattern::Kind::Pair:
        return pair_pat(pattern(p->lhs, outer, inner), pattern(p->rhs, outer, inner), p->span);
      default: return p;
    }
  }

  GuardPtr guard(const GuardPtr& g, const Scope& sc) {
    switch (g->kind) {
      case Guard::Kind::TestVar: return test_var(g->type, lookup(sc, g->name), g->span);
      case Guard::Kind::And: return and_guard(guard(g->lhs, sc), guard(g->rhs, sc), g->span);
      default: return g;
    }
  }

  unsigned next_ = 0;
};

std::string display_name(const std::string& x) { return x.substr(0, x.find('#')); }

}  // namespace

Program rename_apart(const Program& p) {
  Renamer r;
  Program out;
  for (const auto& d : p.defs) {
    Def nd = d;
    Scope sc;
    nd.binder = sc[d.binder] = r.fresh(d.binder);
    nd.body = r.expr(d.body, sc);
    out.defs.push_back(std::move(nd));
  }
  out.main = r.expr(p.main, {});
  return out;
}

// ---------------------------------------------------------------------------

TypeRef check_exhaustiveness_details(TypeStore& store, TypeRef scrutiny,
                                     const std::vector<GuardedPattern>& gpats) {
  std::vector<TypeRef> downs;
  for (const auto& pg : gpats) downs.push_back(gpat_ty(store, pg, Dir::Down));
  return store.diff_of(scrutiny, store.union_all(downs));
}

std::vector<UnreachableFlag> detect_unreachable(TypeStore& store, const std::vector<UnlessRecord>& records,
                                                const TypeSubstitution& theta,
                                                const std::set<TypeVarId>& rigid) {
  // (def, case, branch) -> whether the unless-constraint held for every arrow seen.
  struct Acc {
    bool all = true;
    Span span;
  };
  std::map<std::tuple<int, const Expr*, int>, Acc> acc;
  for (const auto& r : records) {
    if (r.def_index < 0 || r.arrow_index < 0) continue;
    const SimpleConstraint& u = *r.unless;
    TypeRef scrutiny = clean_type(store, apply_subst(store, u.lhs, theta), rigid);
    bool holds = is_subtype(store, scrutiny, apply_subst(store, u.rhs, theta));
    auto& a = acc[{r.def_index, r.case_site, r.branch}];
    a.all = a.all && holds;
    a.span = r.span;
  }
  std::vector<UnreachableFlag> out;
  for (const auto& [k, a] : acc)
    if (a.all) out.push_back({std::get<0>(k), std::get<2>(k), a.span});
  std::sort(out.begin(), out.end(), [](const UnreachableFlag& x, const UnreachableFlag& y) {
    return std::tie(x.def_index, x.span.line, x.span.col, x.branch) <
           std::tie(y.def_index, y.span.line, y.span.col, y.branch);
  });
  return out;
}

namespace {

// The first solution whose cleaned image of `want` is least among the
// solutions found, with that type.
std::pair<std::size_t, TypeRef> least_solution(TypeStore& store, TypeRef want, const SolutionSet& sols,
                                               const std::set<TypeVarId>& keep) {
  std::size_t best = 0;
  TypeRef best_ty = clean_type(store, apply_subst(store, want, sols[0]), keep);
  for (std::size_t k = 1; k < sols.size(); ++k) {
    TypeRef t = clean_type(store, apply_subst(store, want, sols[k]), keep);
    if (is_subtype(store, t, best_ty) && !is_subtype(store, best_ty, t)) {
      best = k;
      best_ty = t;
    }
  }
  return {best, best_ty};
}

Diagnostic blame_diagnostic(TypeStore& store, const TallyReport& rep, const std::set<TypeVarId>& rigid) {
  Diagnostic d;
  d.kind = Diagnostic::Kind::TypeError;
  if (!rep.blame_constraint) {
    d.message = "constraints have no solution";
    return d;
  }
  const SimpleConstraint& c = *rep.blame_constraint;
  TypeSubstitution partial = rep.blame_partial.value_or(TypeSubstitution{});
  if (c.origin) d.span = c.origin->span;
  if (c.origin && c.origin->kind == Origin::Kind::Exhaustive) {
    d.kind = Diagnostic::Kind::NonExhaustive;
    TypeRef scrutiny = clean_type(store, apply_subst(store, c.origin->scrutiny, partial), rigid);
    TypeRef residual = simplify_type(store, store.diff_of(scrutiny, c.origin->accepted));
    d.residual = residual;
    d.message = "case is not exhaustive, unmatched values of type " + type_to_string(store, residual, true);
    if (store.free_ty_vars(residual).empty())
      if (auto w = ground_witness(store, residual, 3)) {
        d.witness = pretty_expr(**w);
        d.message += ", for example " + *d.witness;
      }
    return d;
  }
  TypeRef lhs = simplify_type(store, clean_type(store, apply_subst(store, c.lhs, partial), rigid));
  TypeRef rhs = simplify_type(store, apply_subst(store, c.rhs, partial));
  d.message = "expression of type " + type_to_string(store, lhs, true) + " used where " +
              type_to_string(store, rhs, true) + " is expected";
  return d;
}

Diagnostic diag(Diagnostic::Kind k, Span s, std::string msg) {
  Diagnostic d;
  d.kind = k;
  d.span = s;
  d.message = std::move(msg);
  return d;
}

std::set<TypeVarId> annotation_vars(const Program& p) {
  std::set<TypeVarId> out;
  for (const auto& d : p.defs)
    if (d.annotation) out.insert(d.annotation->quantified.begin(), d.annotation->quantified.end());
  return out;
}

std::string def_at(const Program& p, Span s) {
  const Def* best = nullptr;
  for (const auto& d : p.defs)
    if (std::tie(d.span.line, d.span.col) <= std::tie(s.line, s.col)) best = &d;
  return best ? best->name : std::string{};
}

}  // namespace

CheckResult check_program(TypeStore& store, const Program& input, const CheckOptions& opt) {
  CheckResult res;
  Program p = rename_apart(input);
  std::set<TypeVarId> rigid = annotation_vars(p);
  auto error = [&](Diagnostic d) {
    if (d.def.empty()) d.def = def_at(p, d.span);
    res.diagnostics.push_back(std::move(d));
    return res;
  };

  TypeRef want = opt.expected ? *opt.expected : store.mk_var(store.fresh_var("main"));
  ProgConstraint pc;
  try {
    pc = gen_program(store, p, want, opt.exhaustiveness);
  } catch (const MalformedAnnotation& e) {
    return error(diag(Diagnostic::Kind::MalformedAnnotation, e.span, e.what()));
  }
  if (opt.trace) {
    *opt.trace << "defs: " << to_sexpr(store, *pc.defs) << "\n";
    *opt.trace << "main: " << to_sexpr(store, *pc.main) << "\n";
  }

  std::vector<UnlessRecord> sink;
  SimplePtr c;
  try {
    c = rewrite(store, pc.env, {}, *pc.defs, &sink).constraint;
  } catch (const ScopeError& e) {
    return error(diag(Diagnostic::Kind::UnboundVariable, e.span, "unbound variable " + display_name(e.var)));
  }

  TallyOptions topt = opt.tally;
  topt.rigid = rigid;
  TallyReport rep;
  SolutionSet thetas;
  std::vector<Diagnostic> last;
  // Solutions are requested in growing batches: depth-first order makes each
  // batch a prefix of the next, and main usually succeeds with the first.
  std::size_t tried = 0;
  for (std::size_t cap = 1;; cap = std::min(cap * 4, opt.tally.max_solutions)) {
    topt.max_solutions = cap;
    rep = TallyReport{};
    try {
      thetas = tally(store, *c, topt, &rep);
    } catch (const TallyTimeout& e) {
      res.timeout = true;
      return error(diag(Diagnostic::Kind::Timeout, {}, e.what()));
    }
    if (opt.trace) *opt.trace << "definitions: " << thetas.size() << " solutions, " << rep.steps << " steps\n";
    res.def_solutions = thetas.size();
    if (thetas.empty()) return error(blame_diagnostic(store, rep, rigid));
    for (; tried < thetas.size(); ++tried) {
      const TypeSubstitution& theta = thetas[tried];
      ++res.attempts;
      SchemeEnv gen;
      for (const auto& [x, s] : pc.env)
        gen[x] = s.quantified.empty()
                     ? generalize(store, clean_type(store, apply_subst(store, s.body, theta), rigid))
                     : s;
      if (opt.trace) {
        *opt.trace << "definitions, solution " << res.attempts << ":\n";
        for (const auto& [x, s] : gen) *opt.trace << "  " << x << " : " << scheme_to_string(store, s) << "\n";
      }
      SimplePtr cm;
      try {
        cm = rewrite(store, gen, {}, *pc.main).constraint;
      } catch (const ScopeError& e) {
        return error(diag(Diagnostic::Kind::UnboundVariable, e.span, "unbound variable " + display_name(e.var)));
      }
      TallyOptions mopt = opt.tally;
      mopt.max_solutions = std::min<std::size_t>(opt.tally.max_solutions, 16);
      TallyReport mrep;
      SolutionSet main_sols;
      try {
        main_sols = tally(store, *cm, mopt, &mrep);
      } catch (const TallyTimeout& e) {
        res.timeout = true;
        return error(diag(Diagnostic::Kind::Timeout, {}, e.what()));
      }
      if (opt.trace) *opt.trace << "main: " << main_sols.size() << " solutions, " << mrep.steps << " steps\n";
      if (main_sols.empty()) {
        last = {blame_diagnostic(store, mrep, {})};
        continue;
      }
      auto [best, best_ty] = least_solution(store, want, main_sols, {});
      res.ok = true;
      res.main_solutions = main_sols.size();
      res.chosen_subst = theta;
      for (const auto& [v, t] : main_sols[best]) res.chosen_subst[v] = t;
      res.raw_main_type = apply_subst(store, want, main_sols[best]);
      res.main_type = simplify_type(store, best_ty);
      for (const auto& f : detect_unreachable(store, sink, theta, rigid)) {
        Diagnostic d;
        d.kind = Diagnostic::Kind::UnreachableBranch;
        d.span = f.span;
        d.branch = f.branch;
        d.def = p.defs[f.def_index].name;
        d.message = "branch " + std::to_string(f.branch + 1) + " of a case in " + d.def + " is unreachable";
        res.diagnostics.push_back(std::move(d));
      }
      return res;
    }
    if (!rep.truncated || cap >= opt.tally.max_solutions) break;
  }
  for (auto& d : last) {
    if (res.attempts > 1)
      d.message += " (no solution for main under any of " + std::to_string(res.attempts) +
                   " solutions for the definitions)";
    error(std::move(d));
  }
  return res;
}

std::optional<TypeRef> infer_expr(TypeStore& store, const SchemeEnv& sigma, const TypeEnv& gamma,
                                  const Expr& e, const std::set<TypeVarId>& rigid) {
  TypeRef want = store.mk_var(store.fresh_var("infer"));
  GenResult g = gen_expr(store, e, want);
  SimplePtr c = rewrite(store, sigma, gamma, *g.constraint).constraint;
  TallyOptions opt;
  opt.rigid = rigid;
  SolutionSet sols = tally(store, *c, opt);
  if (sols.empty()) return std::nullopt;
  return least_solution(store, want, sols, rigid).second;
}

}  // namespace minerl
