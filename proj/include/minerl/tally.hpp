#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "minerl/constraints.hpp"
#include "minerl/types.hpp"

namespace minerl {

using SolutionSet = std::vector<TypeSubstitution>;

/// Raised when a tally call exceeds its step budget.
class TallyTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TallyOptions {
  std::size_t budget = 1'000'000;  // normalization and saturation steps
  std::size_t max_solutions = 64;
  std::set<TypeVarId> rigid;       // treated as constants, never substituted
  bool verify = true;              // check every solution with solves()
};

/// Bounds lo <= alpha <= hi collected for one variable.
struct Bounds {
  TypeRef lo, hi;
};
using BoundSet = std::map<TypeVarId, Bounds>;

struct TallyReport {
  std::size_t steps = 0;
  bool truncated = false;           // max_solutions reached
  std::size_t verified = 0;         // solutions checked by solves()
  std::size_t verify_failures = 0;  // solutions rejected by solves()
  // The constraint whose addition failed on the search path that got
  // furthest, and the solved bounds just before it.
  OriginPtr blame;
  const SimpleConstraint* blame_constraint = nullptr;
  std::optional<TypeSubstitution> blame_partial;
};

/// theta solves c.
bool solves(TypeStore& store, const TypeSubstitution& theta, const SimpleConstraint& c);

/// Solutions of a constraint without disjunctions.
SolutionSet tally_base(TypeStore& store, const SimpleConstraint& c, const TallyOptions& opt = {},
                       TallyReport* report = nullptr);

/// Solutions of an arbitrary simple constraint: the union of the solutions
/// of the conjunctions of its disjunctive normal form, enumerated lazily.
SolutionSet tally(TypeStore& store, const SimpleConstraint& c, const TallyOptions& opt = {},
                  TallyReport* report = nullptr);

/// Totals over every tally call in the process, for the soundness gate.
struct TallyGateCounters {
  std::size_t calls = 0;
  std::size_t verified = 0;
  std::size_t failures = 0;
};
TallyGateCounters tally_gate_counters();

}  // namespace minerl
