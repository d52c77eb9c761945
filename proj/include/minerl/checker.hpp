#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "minerl/ast.hpp"
#include "minerl/constraints.hpp"
#include "minerl/tally.hpp"
#include "minerl/types.hpp"

namespace minerl {

struct Diagnostic {
  enum class Kind { TypeError, NonExhaustive, UnreachableBranch, UnboundVariable, MalformedAnnotation, Timeout };
  Kind kind = Kind::TypeError;
  Span span;
  std::string message;
  std::optional<TypeRef> residual;      // NonExhaustive
  std::optional<std::string> witness;   // NonExhaustive, when a value was found
  int branch = -1;                      // UnreachableBranch, 0-based
  std::string def;                      // enclosing definition, if any
};

const char* diagnostic_kind_name(Diagnostic::Kind k);

struct CheckOptions {
  std::optional<TypeRef> expected;  // type wanted for main; a fresh variable otherwise
  bool exhaustiveness = true;
  TallyOptions tally;
  std::ostream* trace = nullptr;    // receives the generated constraints
};

struct CheckResult {
  bool ok = false;
  bool timeout = false;
  TypeRef main_type;                  // cleaned, for display
  TypeRef raw_main_type;
  TypeSubstitution chosen_subst;      // definitions' solution joined with main's solution
  std::size_t def_solutions = 0;      // size of the definitions' solution set
  std::size_t attempts = 0;           // definitions' solutions tried
  std::size_t main_solutions = 0;     // main's solutions compared for the reported type
  std::vector<Diagnostic> diagnostics;  // errors, or warnings (UnreachableBranch) when ok
};

/// Renames lambda, definition and pattern binders apart so that every
/// binder is unique and distinct from definition names.
Program rename_apart(const Program& p);

CheckResult check_program(TypeStore& store, const Program& p, const CheckOptions& opt = {});

/// Scrutiny type minus the union of the accepting types; empty iff the
/// patterns are exhaustive for the scrutiny.
TypeRef check_exhaustiveness_details(TypeStore& store, TypeRef scrutiny,
                                     const std::vector<GuardedPattern>& gpats);

struct UnreachableFlag {
  int def_index;
  int branch;
  Span span;
};

/// Branches of annotated definitions whose unless-constraint holds for the
/// least instance of the scrutiny under theta: for every arrow of an
/// intersection annotation, or for the single arrow otherwise.
std::vector<UnreachableFlag> detect_unreachable(TypeStore& store, const std::vector<UnlessRecord>& records,
                                                const TypeSubstitution& theta,
                                                const std::set<TypeVarId>& rigid);

/// Type of e under Sigma and Gamma: the least cleaned type among the
/// first solutions of its constraint; nullopt when there is none.
std::optional<TypeRef> infer_expr(TypeStore& store, const SchemeEnv& sigma, const TypeEnv& gamma,
                                  const Expr& e, const std::set<TypeVarId>& rigid = {});

}  // namespace minerl
