#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minerl/const.hpp"
#include "minerl/types.hpp"

namespace minerl {

struct Span {
  int line = 0;
  int col = 0;
};

struct Expr;
struct Pattern;
struct Guard;
using ExprPtr = std::shared_ptr<const Expr>;
using PatternPtr = std::shared_ptr<const Pattern>;
using GuardPtr = std::shared_ptr<const Guard>;

/// A value is an expression built only from constants, lambdas and pairs
/// of values; see is_value.
using ValuePtr = ExprPtr;

struct GuardedPattern {
  PatternPtr pattern;
  GuardPtr guard;
};

struct Clause {
  GuardedPattern gpat;
  ExprPtr body;
  Span span;
};

struct Expr {
  enum class Kind { Var, Const, Abs, App, Pair, Case };
  Kind kind = Kind::Const;
  Span span;
  std::string name;  // Var: the variable, Abs: the binder
  Const value;       // Const
  ExprPtr lhs;       // Abs: body, App: function, Pair: first, Case: scrutiny
  ExprPtr rhs;       // App: argument, Pair: second
  std::vector<Clause> clauses;  // Case, never empty
};

struct Pattern {
  enum class Kind { Val, Wildcard, Bind, Capture, Pair };
  Kind kind = Kind::Wildcard;
  Span span;
  ValuePtr value;    // Val
  std::string name;  // Bind, Capture
  PatternPtr lhs, rhs;
};

struct Guard {
  enum class Kind { TestVar, TestVal, Oracle, True, And };
  Kind kind = Kind::True;
  Span span;
  GuardType type = GuardType::IsInt;
  std::string name;  // TestVar
  ValuePtr value;    // TestVal
  GuardPtr lhs, rhs;  // And
};

struct Def {
  std::string name;
  std::optional<TypeScheme> annotation;
  std::string binder;
  ExprPtr body;
  Span span;
  bool no_exhaustiveness = false;  // set by the `# no_exhaustiveness` pragma
};

struct Program {
  std::vector<Def> defs;
  ExprPtr main;
};

// Builders. Spans default to "unknown".
ExprPtr var_expr(std::string name, Span s = {});
ExprPtr const_expr(Const c, Span s = {});
ExprPtr int_expr(long long i, Span s = {});
ExprPtr float_expr(double d, Span s = {});
ExprPtr abs_expr(std::string binder, ExprPtr body, Span s = {});
ExprPtr app_expr(ExprPtr fn, ExprPtr arg, Span s = {});
ExprPtr pair_expr(ExprPtr a, ExprPtr b, Span s = {});
ExprPtr case_expr(ExprPtr scrutiny, std::vector<Clause> clauses, Span s = {});
Clause clause(PatternPtr p, GuardPtr g, ExprPtr body);
Clause clause(PatternPtr p, ExprPtr body);

PatternPtr val_pat(ValuePtr v, Span s = {});
PatternPtr wild_pat(Span s = {});
PatternPtr bind_pat(std::string name, Span s = {});
PatternPtr capture_pat(std::string name, Span s = {});
PatternPtr pair_pat(PatternPtr a, PatternPtr b, Span s = {});

GuardPtr test_var(GuardType t, std::string name, Span s = {});
GuardPtr test_val(GuardType t, ValuePtr v, Span s = {});
GuardPtr oracle_guard(Span s = {});
GuardPtr true_guard(Span s = {});
GuardPtr and_guard(GuardPtr a, GuardPtr b, Span s = {});

GuardedPattern gpat(PatternPtr p, GuardPtr g = nullptr);

bool is_value(const Expr& e);

/// v matches the guard type t (the is-int / is-float / is-pair / is-fun rules).
bool value_matches(const Expr& v, GuardType t);

// Free and bound variables.
std::set<std::string> free_vars_expr(const Expr& e);
std::set<std::string> free_vars_pattern(const Pattern& p);
std::set<std::string> free_vars_guard(const Guard& g);
std::set<std::string> free_vars_gpat(const GuardedPattern& pg);
std::set<std::string> vars_of(const Pattern& p);
bool is_linear(const Pattern& p);

/// Equality of values (and expressions) up to renaming of bound variables.
bool alpha_equal(const Expr& a, const Expr& b);

/// Structural equality ignoring spans; binder names must coincide.
bool expr_equal(const Expr& a, const Expr& b);
bool pattern_equal(const Pattern& a, const Pattern& b);
bool guard_equal(const Guard& a, const Guard& b);

/// Schemes are equal when they coincide after renaming the quantified
/// variables in order.
bool scheme_equal(TypeStore& store, const TypeScheme& a, const TypeScheme& b);
bool program_equal(TypeStore& store, const Program& a, const Program& b);

}  // namespace minerl
