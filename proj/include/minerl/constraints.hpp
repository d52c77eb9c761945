#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "minerl/ast.hpp"
#include "minerl/patenv.hpp"
#include "minerl/types.hpp"

namespace minerl {

using SchemeEnv = std::map<std::string, TypeScheme>;
using FreshSet = std::set<TypeVarId>;

/// Where a subtyping constraint comes from; used to blame failures.
struct Origin {
  enum class Kind { Plain, Exhaustive, Unless, Scope };
  Kind kind = Kind::Plain;
  Span span;
  const Expr* case_site = nullptr;  // Exhaustive, Unless
  int branch = -1;                  // Unless
  TypeRef scrutiny;                 // Exhaustive: the scrutiny variable
  TypeRef accepted;                 // Exhaustive: union of accepting types
};
using OriginPtr = std::shared_ptr<const Origin>;

struct Constraint;
using ConstraintPtr = std::shared_ptr<const Constraint>;

struct CaseBranchConstraint {
  TypeEnv env;
  ConstraintPtr body;
  ConstraintPtr unless;
};

struct Constraint {
  enum class Kind { SubTy, VarSub, Def, And, Case };
  Kind kind = Kind::And;
  TypeRef lhs, rhs;                  // SubTy: lhs <= rhs, VarSub: var <= rhs
  std::string var;                   // VarSub
  TypeEnv env;                       // Def
  std::vector<ConstraintPtr> parts;  // And; Def and Case: parts[0] is the body / scrutiny part
  std::vector<CaseBranchConstraint> branches;  // Case
  const Expr* case_site = nullptr;   // Case
  int def_index = -1;                // Def emitted for a definition
  int arrow_index = -1;              // Def emitted for one arrow of an annotation
  OriginPtr origin;
};

struct SimpleConstraint;
using SimplePtr = std::shared_ptr<const SimpleConstraint>;

struct SimpleConstraint {
  enum class Kind { SubTy, And, Or };
  Kind kind = Kind::And;
  TypeRef lhs, rhs;
  std::vector<SimplePtr> parts;
  OriginPtr origin;
};

// Constructors. And/Or flatten nested nodes of the same kind.
ConstraintPtr c_subty(TypeRef a, TypeRef b, OriginPtr o = nullptr);
ConstraintPtr c_var(std::string x, TypeRef t, Span s);
ConstraintPtr c_def(TypeEnv env, ConstraintPtr body);
ConstraintPtr c_and(std::vector<ConstraintPtr> parts);
SimplePtr s_subty(TypeRef a, TypeRef b, OriginPtr o = nullptr);
SimplePtr s_and(std::vector<SimplePtr> parts);
SimplePtr s_or(std::vector<SimplePtr> parts);
SimplePtr s_true(TypeStore& store);

class MalformedAnnotation : public std::runtime_error {
 public:
  MalformedAnnotation(std::string msg, Span s) : std::runtime_error(std::move(msg)), span(s) {}
  Span span;
};

class ScopeError : public std::runtime_error {
 public:
  enum class Kind { Unbound, Ambiguous };
  ScopeError(Kind k, std::string var, Span s);
  Kind kind;
  std::string var;
  Span span;
};

struct GenOptions {
  bool exhaustiveness = true;
};

struct GenResult {
  ConstraintPtr constraint;
  FreshSet fresh;
};

struct PatGenResult {
  ConstraintPtr constraint;
  TypeEnv env;
  FreshSet fresh;
};

GenResult gen_expr(TypeStore& store, const Expr& e, TypeRef want, const GenOptions& opt = {});
PatGenResult gen_pat_env(TypeStore& store, TypeRef t, const GuardedPattern& pg);

/// The arrows t'_i -> t_i of an intersection-of-arrows annotation body.
/// Throws MalformedAnnotation for other shapes.
std::vector<std::pair<TypeRef, TypeRef>> annotation_arrows(TypeStore& store, const Def& d);

struct DefGenResult {
  ConstraintPtr constraint;
  SchemeEnv env;
  FreshSet fresh;
};

DefGenResult gen_def(TypeStore& store, const Def& d, int def_index, const GenOptions& opt = {});

struct ProgConstraint {
  ConstraintPtr defs;
  SchemeEnv env;
  ConstraintPtr main;
  FreshSet fresh;
};

/// `exhaustiveness` is consulted per definition together with its pragma.
ProgConstraint gen_program(TypeStore& store, const Program& p, TypeRef want,
                           bool exhaustiveness = true);

/// An unless-constraint met while rewriting, with the definition and
/// annotation arrow it belongs to.
struct UnlessRecord {
  int def_index = -1;
  int arrow_index = -1;
  const Expr* case_site = nullptr;
  int branch = -1;
  Span span;
  SimplePtr unless;
};

struct RewriteResult {
  SimplePtr constraint;
  FreshSet fresh;
};

/// Rewrites C under Sigma and Gamma. Throws ScopeError.
RewriteResult rewrite(TypeStore& store, const SchemeEnv& sigma, const TypeEnv& gamma,
                      const Constraint& c, std::vector<UnlessRecord>* sink = nullptr);

/// alpha <= alpha.theta and back, for every alpha in dom(theta).
SimplePtr equiv_constraint(TypeStore& store, const TypeSubstitution& theta);

std::string to_sexpr(const TypeStore& store, const Constraint& c);
std::string to_sexpr(const TypeStore& store, const SimpleConstraint& c);

}  // namespace minerl
