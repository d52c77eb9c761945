#include "minerl/pretty.hpp"

#include <sstream>

namespace minerl {

namespace {

enum Level { kExpr = 0, kApp = 1, kAtom = 2 };

void expr(std::ostream& o, const Expr& e, int level);

void value_literal(std::ostream& o, const Expr& v) {
  switch (v.kind) {
    case Expr::Kind::Const: o << v.value.to_string(); return;
    case Expr::Kind::Pair:
      o << "(";
      value_literal(o, *v.lhs);
      o << ", ";
      value_literal(o, *v.rhs);
      o << ")";
      return;
    default:
      o << "(";
      expr(o, v, kExpr);
      o << ")";
      return;
  }
}

void pattern(std::ostream& o, const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Val: value_literal(o, *p.value); return;
    case Pattern::Kind::Wildcard: o << "_"; return;
    case Pattern::Kind::Bind: o << p.name; return;
    case Pattern::Kind::Capture: o << "^" << p.name; return;
    case Pattern::Kind::Pair:
      o << "(";
      pattern(o, *p.lhs);
      o << ", ";
      pattern(o, *p.rhs);
      o << ")";
      return;
  }
}

void guard(std::ostream& o, const Guard& g) {
  switch (g.kind) {
    case Guard::Kind::TestVar: o << guard_type_keyword(g.type) << " " << g.name; return;
    case Guard::Kind::TestVal:
      o << guard_type_keyword(g.type) << " ";
      value_literal(o, *g.value);
      return;
    case Guard::Kind::Oracle: o << "oracle"; return;
    case Guard::Kind::True: o << "true"; return;
    case Guard::Kind::And:
      guard(o, *g.lhs);
      o << ", ";
      guard(o, *g.rhs);
      return;
  }
}

void gpat(std::ostream& o, const GuardedPattern& pg) {
  pattern(o, *pg.pattern);
  if (pg.guard && pg.guard->kind != Guard::Kind::True) {
    o << " when ";
    guard(o, *pg.guard);
  }
}

void expr(std::ostream& o, const Expr& e, int level) {
  switch (e.kind) {
    case Expr::Kind::Var: o << e.name; return;
    case Expr::Kind::Const: o << e.value.to_string(); return;
    case Expr::Kind::Pair:
      o << "(";
      expr(o, *e.lhs, kExpr);
      o << ", ";
      expr(o, *e.rhs, kExpr);
      o << ")";
      return;
    case Expr::Kind::App: {
      bool paren = level > kApp;
      if (paren) o << "(";
      expr(o, *e.lhs, kApp);
      o << " ";
      expr(o, *e.rhs, kAtom);
      if (paren) o << ")";
      return;
    }
    case Expr::Kind::Abs: {
      bool paren = level > kExpr;
      if (paren) o << "(";
      o << "fun " << e.name << " -> ";
      expr(o, *e.lhs, kExpr);
      if (paren) o << ")";
      return;
    }
    case Expr::Kind::Case: {
      bool paren = level > kExpr;
      if (paren) o << "(";
      o << "case ";
      expr(o, *e.lhs, kExpr);
      o << " of ";
      for (std::size_t i = 0; i < e.clauses.size(); ++i) {
        if (i) o << "; ";
        gpat(o, e.clauses[i].gpat);
        o << " -> ";
        expr(o, *e.clauses[i].body, kExpr);
      }
      o << " end";
      if (paren) o << ")";
      return;
    }
  }
}

}  // namespace

std::string pretty_expr(const Expr& e) {
  std::ostringstream o;
  expr(o, e, kExpr);
  return o.str();
}

std::string pretty_pattern(const Pattern& p) {
  std::ostringstream o;
  pattern(o, p);
  return o.str();
}

std::string pretty_guard(const Guard& g) {
  std::ostringstream o;
  guard(o, g);
  return o.str();
}

std::string pretty_gpat(const GuardedPattern& pg) {
  std::ostringstream o;
  gpat(o, pg);
  return o.str();
}

std::string pretty_program(const TypeStore& store, const Program& p) {
  std::ostringstream o;
  for (const auto& d : p.defs) {
    if (d.no_exhaustiveness) o << "# no_exhaustiveness\n";
    o << d.name;
    if (d.annotation) o << " : " << scheme_to_string(store, *d.annotation);
    o << " = fun " << d.binder << " -> ";
    expr(o, *d.body, kExpr);
    o << "\n";
  }
  o << "in ";
  expr(o, *p.main, kExpr);
  o << "\n";
  return o.str();
}

}  // namespace minerl
