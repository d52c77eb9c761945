#pragma once

#include <map>
#include <set>
#include <string>

#include "minerl/ast.hpp"
#include "minerl/types.hpp"

namespace minerl {

using TypeEnv = std::map<std::string, TypeRef>;

/// Pointwise intersection; a name bound on one side keeps its type.
TypeEnv inter_env(TypeStore& store, const TypeEnv& a, const TypeEnv& b);

/// Some binding has an empty type.
bool is_bottomed(TypeStore& store, const TypeEnv& env);

TypeEnv guard_env(TypeStore& store, const Guard& g);

/// Environment of the variables bound by p for a scrutiny of type t.
/// Pair patterns project t and throw NotAPairType when t is not below
/// (Any, Any).
TypeEnv pat_env(TypeStore& store, TypeRef t, const Pattern& p);
TypeEnv gpat_env(TypeStore& store, TypeRef t, const GuardedPattern& pg);

bool safe_up(const Guard& g);
bool safe_down(const Guard& g, const std::set<std::string>& bound);

enum class Dir { Up, Down };

/// Potential (Up) and accepting (Down) types.
TypeRef pat_ty(TypeStore& store, const Pattern& p, const TypeEnv& env, Dir dir);
TypeRef gpat_ty(TypeStore& store, const GuardedPattern& pg, Dir dir);

}  // namespace minerl
