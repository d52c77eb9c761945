#include "minerl/constraints.hpp"

#include <sstream>

namespace minerl {

namespace {

std::string span_str(Span s) { return std::to_string(s.line) + ":" + std::to_string(s.col); }

void merge(FreshSet& into, const FreshSet& from) { into.insert(from.begin(), from.end()); }

TypeRef fresh_type(TypeStore& store, FreshSet& out, const std::string& what, Span s) {
  TypeVarId v = store.fresh_var(what + "@" + span_str(s));
  out.insert(v);
  return store.mk_var(v);
}

OriginPtr plain(Span s) {
  auto o = std::make_shared<Origin>();
  o->span = s;
  return o;
}

}  // namespace

ConstraintPtr c_subty(TypeRef a, TypeRef b, OriginPtr o) {
  auto c = std::make_shared<Constraint>();
  c->kind = Constraint::Kind::SubTy;
  c->lhs = a;
  c->rhs = b;
  c->origin = std::move(o);
  return c;
}

ConstraintPtr c_var(std::string x, TypeRef t, Span s) {
  auto c = std::make_shared<Constraint>();
  c->kind = Constraint::Kind::VarSub;
  c->var = std::move(x);
  c->rhs = t;
  c->origin = plain(s);
  return c;
}

ConstraintPtr c_def(TypeEnv env, ConstraintPtr body) {
  auto c = std::make_shared<Constraint>();
  c->kind = Constraint::Kind::Def;
  c->env = std::move(env);
  c->parts.push_back(std::move(body));
  return c;
}

ConstraintPtr c_and(std::vector<ConstraintPtr> parts) {
  auto c = std::make_shared<Constraint>();
  c->kind = Constraint::Kind::And;
  for (auto& p : parts) {
    if (p->kind == Constraint::Kind::And) c->parts.insert(c->parts.end(), p->parts.begin(), p->parts.end());
    else c->parts.push_back(std::move(p));
  }
  return c;
}

SimplePtr s_subty(TypeRef a, TypeRef b, OriginPtr o) {
  auto c = std::make_shared<SimpleConstraint>();
  c->kind = SimpleConstraint::Kind::SubTy;
  c->lhs = a;
  c->rhs = b;
  c->origin = std::move(o);
  return c;
}

namespace {

SimplePtr s_nary(SimpleConstraint::Kind k, std::vector<SimplePtr> parts) {
  if (parts.size() == 1) return parts[0];
  auto c = std::make_shared<SimpleConstraint>();
  c->kind = k;
  for (auto& p : parts) {
    if (p->kind == k) c->parts.insert(c->parts.end(), p->parts.begin(), p->parts.end());
    else c->parts.push_back(std::move(p));
  }
  return c;
}

}  // namespace

SimplePtr s_and(std::vector<SimplePtr> parts) { return s_nary(SimpleConstraint::Kind::And, std::move(parts)); }
SimplePtr s_or(std::vector<SimplePtr> parts) { return s_nary(SimpleConstraint::Kind::Or, std::move(parts)); }
SimplePtr s_true(TypeStore& store) { return s_subty(store.bottom(), store.top()); }

ScopeError::ScopeError(Kind k, std::string v, Span s)
    : std::runtime_error(k == Kind::Unbound ? "unbound variable " + v
                                            : "variable " + v + " is both a definition and a local"),
      kind(k),
      var(std::move(v)),
      span(s) {}

// ---------------------------------------------------------------------------
// Generation

namespace {

struct Gen {
  TypeStore& store;
  GenOptions opt;
  FreshSet fresh;

  ConstraintPtr truth() { return c_subty(store.bottom(), store.top()); }

  ConstraintPtr expr(const Expr& e, TypeRef t) {
    switch (e.kind) {
      case Expr::Kind::Var: return c_var(e.name, t, e.span);
      case Expr::Kind::Const: return c_subty(ty_of_const(store, e.value), t, plain(e.span));
      case Expr::Kind::Abs: {
        TypeRef a = fresh_at("abs-dom", e.span), b = fresh_at("abs-cod", e.span);
        ConstraintPtr body = expr(*e.lhs, b);
        // The expected type comes first so that it bounds the search below.
        return c_and({c_subty(store.mk_arrow(a, b), t, plain(e.span)), c_def({{e.name, a}}, body)});
      }
      case Expr::Kind::App: {
        TypeRef a = fresh_at("app-arg", e.span), b = fresh_at("app-res", e.span);
        ConstraintPtr c1 = expr(*e.lhs, store.mk_arrow(a, b));
        ConstraintPtr c2 = expr(*e.rhs, a);
        return c_and({c_subty(b, t, plain(e.span)), c2, c1});
      }
      case Expr::Kind::Pair: {
        TypeRef a1 = fresh_at("pair-fst", e.span), a2 = fresh_at("pair-snd", e.span);
        ConstraintPtr c1 = expr(*e.lhs, a1);
        ConstraintPtr c2 = expr(*e.rhs, a2);
        return c_and({c_subty(store.mk_pair(a1, a2), t, plain(e.span)), c1, c2});
      }
      case Expr::Kind::Case: return case_expr(e, t);
    }
    return truth();
  }

  TypeRef fresh_at(const char* what, Span s) { return fresh_type(store, this->fresh, what, s); }

  ConstraintPtr case_expr(const Expr& e, TypeRef t) {
    TypeRef a = fresh_at("case-scrutiny", e.span), b = fresh_at("case-result", e.span);
    ConstraintPtr scrut = expr(*e.lhs, a);
    std::vector<TypeRef> downs, ups;
    for (const auto& c : e.clauses) {
      downs.push_back(gpat_ty(store, c.gpat, Dir::Down));
      ups.push_back(gpat_ty(store, c.gpat, Dir::Up));
    }
    std::vector<ConstraintPtr> d{scrut};
    if (opt.exhaustiveness) {
      auto o = std::make_shared<Origin>();
      o->kind = Origin::Kind::Exhaustive;
      o->span = e.span;
      o->case_site = &e;
      o->scrutiny = a;
      o->accepted = store.union_all(downs);
      d.push_back(c_subty(a, o->accepted, o));
    }
    auto node = std::make_shared<Constraint>();
    node->kind = Constraint::Kind::Case;
    node->case_site = &e;
    TypeRef before = store.bottom();
    for (std::size_t i = 0; i < e.clauses.size(); ++i) {
      const Clause& cl = e.clauses[i];
      TypeRef ti = store.inter_of(store.diff_of(a, before), ups[i]);
      PatGenResult pe = pat_env_gen(ti, cl.gpat);
      d.push_back(pe.constraint);
      ConstraintPtr body = expr(*cl.body, b);
      TypeRef ui = store.union_of(before, store.neg_of(ups[i]));
      auto o = std::make_shared<Origin>();
      o->kind = Origin::Kind::Unless;
      o->span = cl.span;
      o->case_site = &e;
      o->branch = static_cast<int>(i);
      node->branches.push_back({pe.env, body, c_subty(a, ui, o)});
      before = store.union_of(before, downs[i]);
    }
    node->parts.push_back(c_and(std::move(d)));
    return c_and({c_subty(b, t, plain(e.span)), node});
  }

  PatGenResult pat_env_gen(TypeRef t, const GuardedPattern& pg) {
    auto [c, env] = pattern(t, *pg.pattern);
    std::vector<ConstraintPtr> parts{c};
    for (const auto& x : free_vars_gpat(pg)) parts.push_back(c_var(x, store.top(), pg.pattern->span));
    return {c_and(std::move(parts)), inter_env(store, env, guard_env(store, *pg.guard)), {}};
  }

  std::pair<ConstraintPtr, TypeEnv> pattern(TypeRef t, const Pattern& p) {
    switch (p.kind) {
      case Pattern::Kind::Bind: return {truth(), {{p.name, t}}};
      case Pattern::Kind::Pair: {
        TypeRef a1 = fresh_at("pat-fst", p.span), a2 = fresh_at("pat-snd", p.span);
        auto [c1, g1] = pattern(a1, *p.lhs);
        auto [c2, g2] = pattern(a2, *p.rhs);
        return {c_and({c1, c2, c_subty(t, store.mk_pair(a1, a2), plain(p.span))}),
                inter_env(store, g1, g2)};
      }
      default: return {truth(), {}};
    }
  }
};

void collect_arrows(TypeStore& store, TypeRef t, std::vector<std::pair<TypeRef, TypeRef>>& out,
                    bool& ok) {
  const TypeNode& n = store.node(t);
  if (n.kind == NodeKind::Arrow) {
    out.emplace_back(n.lhs, n.rhs);
    return;
  }
  // a & b is Neg(Union(Neg a, Neg b)).
  if (n.kind == NodeKind::Neg && store.node(n.lhs).kind == NodeKind::Union) {
    const TypeNode& u = store.node(n.lhs);
    if (store.node(u.lhs).kind == NodeKind::Neg && store.node(u.rhs).kind == NodeKind::Neg) {
      TypeRef l = store.node(u.lhs).lhs, r = store.node(u.rhs).lhs;
      collect_arrows(store, l, out, ok);
      collect_arrows(store, r, out, ok);
      return;
    }
  }
  ok = false;
}

}  // namespace

GenResult gen_expr(TypeStore& store, const Expr& e, TypeRef want, const GenOptions& opt) {
  Gen g{store, opt, {}};
  ConstraintPtr c = g.expr(e, want);
  return {c, g.fresh};
}

PatGenResult gen_pat_env(TypeStore& store, TypeRef t, const GuardedPattern& pg) {
  Gen g{store, {}, {}};
  PatGenResult r = g.pat_env_gen(t, pg);
  r.fresh = g.fresh;
  return r;
}

std::vector<std::pair<TypeRef, TypeRef>> annotation_arrows(TypeStore& store, const Def& d) {
  const TypeScheme& s = *d.annotation;
  if (!free_ty_vars(store, s).empty())
    throw MalformedAnnotation("annotation of " + d.name + " has free type variables", d.span);
  std::vector<std::pair<TypeRef, TypeRef>> arrows;
  bool ok = true;
  collect_arrows(store, s.body, arrows, ok);
  if (!ok)
    throw MalformedAnnotation("annotation of " + d.name + " is not an intersection of arrows",
                              d.span);
  return arrows;
}

DefGenResult gen_def(TypeStore& store, const Def& d, int def_index, const GenOptions& opt) {
  Gen g{store, opt, {}};
  if (d.annotation) {
    auto arrows = annotation_arrows(store, d);
    std::vector<ConstraintPtr> parts;
    for (std::size_t i = 0; i < arrows.size(); ++i) {
      auto def = std::make_shared<Constraint>();
      def->kind = Constraint::Kind::Def;
      def->env = {{d.binder, arrows[i].first}};
      def->parts.push_back(g.expr(*d.body, arrows[i].second));
      def->def_index = def_index;
      def->arrow_index = static_cast<int>(i);
      parts.push_back(def);
    }
    return {c_and(std::move(parts)), {{d.name, *d.annotation}}, g.fresh};
  }
  TypeRef a = g.fresh_at("def", d.span);
  ExprPtr lam = abs_expr(d.binder, d.body, d.span);
  auto def = std::make_shared<Constraint>();
  def->kind = Constraint::Kind::Def;
  def->parts.push_back(g.expr(*lam, a));
  def->def_index = def_index;
  return {def, {{d.name, TypeScheme{{}, a}}}, g.fresh};
}

ProgConstraint gen_program(TypeStore& store, const Program& p, TypeRef want, bool exhaustiveness) {
  ProgConstraint out;
  std::vector<ConstraintPtr> parts;
  for (std::size_t i = 0; i < p.defs.size(); ++i) {
    GenOptions opt;
    opt.exhaustiveness = exhaustiveness && !p.defs[i].no_exhaustiveness;
    DefGenResult r = gen_def(store, p.defs[i], static_cast<int>(i), opt);
    parts.push_back(r.constraint);
    out.env.insert(r.env.begin(), r.env.end());
    merge(out.fresh, r.fresh);
  }
  out.defs = parts.empty() ? c_subty(store.bottom(), store.top()) : c_and(std::move(parts));
  GenOptions opt;
  opt.exhaustiveness = exhaustiveness;
  GenResult m = gen_expr(store, *p.main, want, opt);
  out.main = m.constraint;
  merge(out.fresh, m.fresh);
  return out;
}

// ---------------------------------------------------------------------------
// Rewriting

namespace {

struct Rewriter {
  TypeStore& store;
  const SchemeEnv& sigma;
  std::vector<UnlessRecord>* sink;
  FreshSet fresh;
  int def_index = -1;
  int arrow_index = -1;

  SimplePtr go(const TypeEnv& gamma, const Constraint& c) {
    switch (c.kind) {
      case Constraint::Kind::SubTy: return s_subty(c.lhs, c.rhs, c.origin);
      case Constraint::Kind::And: {
        std::vector<SimplePtr> parts;
        for (const auto& p : c.parts) parts.push_back(go(gamma, *p));
        return s_and(std::move(parts));
      }
      case Constraint::Kind::VarSub: {
        Span sp = c.origin ? c.origin->span : Span{};
        bool in_gamma = gamma.count(c.var) != 0;
        auto it = sigma.find(c.var);
        bool in_sigma = it != sigma.end();
        if (in_gamma && in_sigma) throw ScopeError(ScopeError::Kind::Ambiguous, c.var, sp);
        if (in_gamma) return s_subty(gamma.at(c.var), c.rhs, c.origin);
        if (!in_sigma) throw ScopeError(ScopeError::Kind::Unbound, c.var, sp);
        std::vector<TypeVarId> vs;
        TypeRef t = instantiate(store, it->second, &vs);
        fresh.insert(vs.begin(), vs.end());
        return s_subty(t, c.rhs, c.origin);
      }
      case Constraint::Kind::Def: {
        TypeEnv ext = gamma;
        for (const auto& [x, t] : c.env) ext[x] = t;
        int saved_d = def_index, saved_a = arrow_index;
        if (c.def_index >= 0) {
          def_index = c.def_index;
          arrow_index = c.arrow_index;
        }
        SimplePtr r = go(ext, *c.parts[0]);
        def_index = saved_d;
        arrow_index = saved_a;
        return r;
      }
      case Constraint::Kind::Case: {
        std::vector<SimplePtr> parts{go(gamma, *c.parts[0])};
        for (std::size_t i = 0; i < c.branches.size(); ++i) {
          const auto& b = c.branches[i];
          SimplePtr hat = go(gamma, *b.unless);
          SimplePtr body = go(inter_env(store, gamma, b.env), *b.body);
          if (sink) {
            UnlessRecord r;
            r.def_index = def_index;
            r.arrow_index = arrow_index;
            r.case_site = c.case_site;
            r.branch = static_cast<int>(i);
            r.span = b.unless->origin ? b.unless->origin->span : Span{};
            r.unless = hat;
            sink->push_back(std::move(r));
          }
          parts.push_back(s_or({body, hat}));
        }
        return s_and(std::move(parts));
      }
    }
    return s_true(store);
  }
};

}  // namespace

RewriteResult rewrite(TypeStore& store, const SchemeEnv& sigma, const TypeEnv& gamma,
                      const Constraint& c, std::vector<UnlessRecord>* sink) {
  Rewriter r{store, sigma, sink, {}};
  SimplePtr s = r.go(gamma, c);
  return {s, r.fresh};
}

SimplePtr equiv_constraint(TypeStore& store, const TypeSubstitution& theta) {
  std::vector<SimplePtr> parts;
  for (const auto& [v, t] : theta) {
    TypeRef a = store.mk_var(v);
    parts.push_back(s_subty(a, t));
    parts.push_back(s_subty(t, a));
  }
  if (parts.empty()) return s_true(store);
  return s_and(std::move(parts));
}

// ---------------------------------------------------------------------------
// Dumps

namespace {

void env_sexpr(std::ostream& o, const TypeStore& s, const TypeEnv& env) {
  o << "(";
  bool first = true;
  for (const auto& [x, t] : env) {
    o << (first ? "" : " ") << "(" << x << " " << type_to_string(s, t) << ")";
    first = false;
  }
  o << ")";
}

void sexpr(std::ostream& o, const TypeStore& s, const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::SubTy:
      o << "(<= " << type_to_string(s, c.lhs) << " " << type_to_string(s, c.rhs) << ")";
      return;
    case Constraint::Kind::VarSub: o << "(<= " << c.var << " " << type_to_string(s, c.rhs) << ")"; return;
    case Constraint::Kind::Def:
      o << "(def ";
      env_sexpr(o, s, c.env);
      o << " ";
      sexpr(o, s, *c.parts[0]);
      o << ")";
      return;
    case Constraint::Kind::And:
      o << "(and";
      for (const auto& p : c.parts) {
        o << " ";
        sexpr(o, s, *p);
      }
      o << ")";
      return;
    case Constraint::Kind::Case:
      o << "(case ";
      sexpr(o, s, *c.parts[0]);
      for (const auto& b : c.branches) {
        o << " (in ";
        env_sexpr(o, s, b.env);
        o << " ";
        sexpr(o, s, *b.body);
        o << " unless ";
        sexpr(o, s, *b.unless);
        o << ")";
      }
      o << ")";
      return;
  }
}

void sexpr(std::ostream& o, const TypeStore& s, const SimpleConstraint& c) {
  switch (c.kind) {
    case SimpleConstraint::Kind::SubTy:
      o << "(<= " << type_to_string(s, c.lhs) << " " << type_to_string(s, c.rhs) << ")";
      return;
    case SimpleConstraint::Kind::And:
    case SimpleConstraint::Kind::Or:
      o << (c.kind == SimpleConstraint::Kind::And ? "(and" : "(or");
      for (const auto& p : c.parts) {
        o << " ";
        sexpr(o, s, *p);
      }
      o << ")";
      return;
  }
}

}  // namespace

std::string to_sexpr(const TypeStore& store, const Constraint& c) {
  std::ostringstream o;
  sexpr(o, store, c);
  return o.str();
}

std::string to_sexpr(const TypeStore& store, const SimpleConstraint& c) {
  std::ostringstream o;
  sexpr(o, store, c);
  return o.str();
}

}  // namespace minerl
