#include "minerl/patenv.hpp"

#include "minerl/subty.hpp"

namespace minerl {

namespace {

const Guard& guard_of(const GuardedPattern& pg) {
  static const Guard kTrue{};
  return pg.guard ? *pg.guard : kTrue;
}

}  // namespace

TypeEnv inter_env(TypeStore& store, const TypeEnv& a, const TypeEnv& b) {
  TypeEnv out = a;
  for (const auto& [x, t] : b) {
    auto it = out.find(x);
    if (it == out.end()) out.emplace(x, t);
    else it->second = store.inter_of(it->second, t);
  }
  return out;
}

bool is_bottomed(TypeStore& store, const TypeEnv& env) {
  for (const auto& [x, t] : env)
    if (is_empty(store, t)) return true;
  return false;
}

TypeEnv guard_env(TypeStore& store, const Guard& g) {
  switch (g.kind) {
    case Guard::Kind::TestVar: return {{g.name, ty_of_guardty(store, g.type)}};
    case Guard::Kind::And:
      return inter_env(store, guard_env(store, *g.lhs), guard_env(store, *g.rhs));
    default: return {};
  }
}

TypeEnv pat_env(TypeStore& store, TypeRef t, const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Bind: return {{p.name, t}};
    case Pattern::Kind::Pair: {
      TypeRef t1 = proj(store, 1, t);
      TypeRef t2 = proj(store, 2, t);
      return inter_env(store, pat_env(store, t1, *p.lhs), pat_env(store, t2, *p.rhs));
    }
    default: return {};
  }
}

TypeEnv gpat_env(TypeStore& store, TypeRef t, const GuardedPattern& pg) {
  return inter_env(store, pat_env(store, t, *pg.pattern), guard_env(store, guard_of(pg)));
}

bool safe_up(const Guard& g) {
  switch (g.kind) {
    case Guard::Kind::TestVal: return value_matches(*g.value, g.type);
    case Guard::Kind::And: return safe_up(*g.lhs) && safe_up(*g.rhs);
    default: return true;
  }
}

bool safe_down(const Guard& g, const std::set<std::string>& bound) {
  switch (g.kind) {
    case Guard::Kind::TestVar: return bound.count(g.name) != 0;
    case Guard::Kind::TestVal: return value_matches(*g.value, g.type);
    case Guard::Kind::Oracle: return false;
    case Guard::Kind::True: return true;
    case Guard::Kind::And: return safe_down(*g.lhs, bound) && safe_down(*g.rhs, bound);
  }
  return false;
}

TypeRef pat_ty(TypeStore& store, const Pattern& p, const TypeEnv& env, Dir dir) {
  switch (p.kind) {
    case Pattern::Kind::Val: {
      bool is_const = p.value->kind == Expr::Kind::Const;
      if (dir == Dir::Up) return is_const ? ty_of_const(store, p.value->value) : store.top();
      if (is_const && p.value->value.is_int()) return ty_of_const(store, p.value->value);
      return store.bottom();
    }
    case Pattern::Kind::Capture: return dir == Dir::Up ? store.top() : store.bottom();
    case Pattern::Kind::Wildcard: return store.top();
    case Pattern::Kind::Bind: {
      auto it = env.find(p.name);
      return it == env.end() ? store.top() : it->second;
    }
    case Pattern::Kind::Pair:
      return store.mk_pair(pat_ty(store, *p.lhs, env, dir), pat_ty(store, *p.rhs, env, dir));
  }
  return store.top();
}

TypeRef gpat_ty(TypeStore& store, const GuardedPattern& pg, Dir dir) {
  const Guard& g = guard_of(pg);
  TypeEnv env = guard_env(store, g);
  if (is_bottomed(store, env)) return store.bottom();
  if (dir == Dir::Up) return safe_up(g) ? pat_ty(store, *pg.pattern, env, dir) : store.bottom();
  if (!safe_down(g, vars_of(*pg.pattern)) || !is_linear(*pg.pattern)) return store.bottom();
  return pat_ty(store, *pg.pattern, env, dir);
}

}  // namespace minerl
