#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "minerl/ast.hpp"

namespace minerl {

using ValueSubst = std::map<std::string, ValuePtr>;

/// Top-level definitions, each bound to its lambda.
using FunEnv = std::map<std::string, ValuePtr>;

FunEnv fun_env(const Program& p);

/// Decides oracle guards. Seeded strategies draw from a generator seeded
/// once, so outcomes depend only on the seed and the number of calls.
class OracleStrategy {
 public:
  enum class Kind { AlwaysTrue, AlwaysFalse, Seeded };

  static OracleStrategy always_true() { return OracleStrategy(Kind::AlwaysTrue, 0); }
  static OracleStrategy always_false() { return OracleStrategy(Kind::AlwaysFalse, 0); }
  static OracleStrategy seeded(std::uint64_t seed) { return OracleStrategy(Kind::Seeded, seed); }

  bool next();
  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::string describe() const;

 private:
  OracleStrategy(Kind k, std::uint64_t seed) : kind_(k), seed_(seed), gen_(seed) {}
  Kind kind_;
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

class UnboundCapture : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Capture-avoiding substitution of values for free variables.
ExprPtr subst_expr(const ExprPtr& e, const ValueSubst& s);
GuardPtr subst_guard(const GuardPtr& g, const ValueSubst& s);

std::optional<ValueSubst> match_pattern(const ValuePtr& v, const Pattern& p, const FunEnv& delta);

/// Evaluates an already substituted guard.
bool eval_guard(const Guard& g, const FunEnv& delta, OracleStrategy& oracle);

std::optional<ValueSubst> match_guarded(const ValuePtr& v, const GuardedPattern& pg,
                                        const FunEnv& delta, OracleStrategy& oracle);

struct StepResult {
  enum class Kind { Stepped, IsValue, Stuck };
  Kind kind;
  ExprPtr expr;        // Stepped: the reduct, IsValue: the value
  std::string reason;  // Stuck
  Span span;           // Stuck: the redex
};

StepResult step(const FunEnv& delta, const ExprPtr& e, OracleStrategy& oracle);

struct RunResult {
  enum class Kind { Final, OutOfFuel, Stuck };
  Kind kind;
  ExprPtr expr;  // Final: the value, OutOfFuel: the current expression
  std::string reason;
  Span span;
  std::size_t steps = 0;
};

RunResult run(const Program& p, std::size_t fuel, OracleStrategy oracle);

}  // namespace minerl
