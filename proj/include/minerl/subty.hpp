#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "minerl/ast.hpp"
#include "minerl/types.hpp"

namespace minerl {

// Emptiness and subtyping. Results are memoized in the store, which makes
// these functions single-threaded per store.

/// True iff t denotes the empty set under every assignment of its variables.
bool is_empty(TypeStore& store, TypeRef t);
bool is_subtype(TypeStore& store, TypeRef t, TypeRef u);
bool is_equiv(TypeStore& store, TypeRef t, TypeRef u);

class NotAPairType : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Component i (1 or 2) of a type below (Any, Any). Throws NotAPairType
/// otherwise.
TypeRef proj(TypeStore& store, int i, TypeRef t);

/// Most precise type of a value: singletons for ints, Float for floats,
/// pairs componentwise and Empty -> Any for functions.
TypeRef canonical_type(TypeStore& store, const Expr& v);

/// Membership of a value in a variable-free type. First-order values are
/// decided by walking the type graph; values containing functions fall back
/// to canonical_type(v) <= t.
bool member(TypeStore& store, const Expr& v, TypeRef t);

/// Searches a value of t among the constants mentioned in t, the probes
/// 0, 1, a fresh integer, 0.5, fun x -> x, and pairs of these nested up to
/// `depth` levels (1 = no pairs).
std::optional<ValuePtr> ground_witness(TypeStore& store, TypeRef t, int depth);

/// Equivalent type with empty pairs collapsed and union or intersection
/// operands that are subsumed by a sibling dropped. Meant for display.
TypeRef simplify_type(TypeStore& store, TypeRef t);

/// One line per DNF line, in the type grammar.
std::string dump_dnf(TypeStore& store, TypeRef t);

}  // namespace minerl
