#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "minerl/const.hpp"

namespace minerl {

/// Handle to a node in a TypeStore. Only meaningful together with the store
/// that produced it.
struct TypeRef {
  std::uint32_t id = 0;
  friend auto operator<=>(const TypeRef&, const TypeRef&) = default;
};

/// Type variable. Indices are handed out in strictly increasing order by
/// TypeStore::fresh_var, so a smaller index means an older variable.
struct TypeVarId {
  std::uint32_t index = 0;
  friend auto operator<=>(const TypeVarId&, const TypeVarId&) = default;
};

enum class NodeKind : std::uint8_t {
  Union,
  Neg,
  Arrow,
  Pair,
  Var,
  Int,
  Float,
  Singleton,
  Placeholder,  // open slot of an unfinished mk_rec
};

struct TypeNode {
  NodeKind kind = NodeKind::Placeholder;
  TypeRef lhs;  // Union/Arrow(dom)/Pair/Neg operand
  TypeRef rhs;  // Union/Arrow(cod)/Pair
  std::uint32_t payload = 0;  // Var: variable index, Singleton: literal index
};

/// One conjunction of atoms: pos_1 & ... & !neg_1 & ...
/// Atoms are nodes of kind Var, Int, Float, Singleton, Pair or Arrow,
/// kept sorted by id.
struct DnfLine {
  std::vector<TypeRef> pos;
  std::vector<TypeRef> neg;
  friend bool operator==(const DnfLine&, const DnfLine&) = default;
};

using Dnf = std::vector<DnfLine>;

class ContractivenessViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite/cofinite set of integers plus a float flag; the algebra used to
/// decide lines made only of base atoms.
struct BaseSet {
  bool cofinite = true;  // ints = Z \ listed  when true, listed when false
  std::set<BigInt> ints;
  bool floats = true;

  static BaseSet all() { return {}; }
  bool empty() const { return !cofinite && ints.empty() && !floats; }
  void intersect(const BaseSet& other);
  void subtract(const BaseSet& other);
};

struct TypeScheme {
  std::vector<TypeVarId> quantified;  // sorted, each free in body
  TypeRef body;
};

using TypeSubstitution = std::map<TypeVarId, TypeRef>;

/// Session-scoped store of hash-consed, possibly cyclic type graphs.
///
/// The store is single-threaded: interning, the DNF cache and the emptiness
/// cache are mutated by queries. Use one store per thread.
class TypeStore {
 public:
  TypeStore();
  TypeStore(const TypeStore&) = delete;
  TypeStore& operator=(const TypeStore&) = delete;

  TypeRef top() const { return top_; }
  TypeRef bottom() const { return bottom_; }

  // Raw, interning constructors. They never rewrite their arguments, so
  // mk_inter(a, b) is literally Neg(Union(Neg a, Neg b)).
  TypeRef mk_union(TypeRef a, TypeRef b);
  TypeRef mk_neg(TypeRef a);
  TypeRef mk_inter(TypeRef a, TypeRef b);
  TypeRef mk_diff(TypeRef a, TypeRef b);
  TypeRef mk_pair(TypeRef a, TypeRef b);
  TypeRef mk_arrow(TypeRef dom, TypeRef cod);
  TypeRef mk_var(TypeVarId v);
  TypeRef mk_int();
  TypeRef mk_float();
  TypeRef mk_singleton(const BigInt& value);

  /// Builds the solution of X = build(X). `build` receives a placeholder
  /// standing for X and returns the right-hand side. Throws
  /// ContractivenessViolation when X is reachable from the right-hand side
  /// through unions and negations only.
  TypeRef mk_rec(const std::function<TypeRef(TypeRef)>& build);

  /// rec L. 0 | (elem, L)
  TypeRef list_of(TypeRef elem);

  // Peephole-simplifying constructors used by the algorithms. They are
  // semantically equal to the raw ones.
  TypeRef union_of(TypeRef a, TypeRef b);
  TypeRef inter_of(TypeRef a, TypeRef b);
  TypeRef neg_of(TypeRef a);
  TypeRef diff_of(TypeRef a, TypeRef b);
  TypeRef union_all(const std::vector<TypeRef>& ts);
  TypeRef inter_all(const std::vector<TypeRef>& ts);

  const TypeNode& node(TypeRef t) const { return nodes_[t.id]; }
  const BigInt& singleton_value(TypeRef t) const {
    return literals_[node(t).payload];
  }
  TypeVarId var_of(TypeRef t) const { return TypeVarId{node(t).payload}; }
  std::size_t node_count() const { return nodes_.size(); }

  TypeVarId fresh_var(std::string debug_name = {});
  const std::string& var_name(TypeVarId v) const { return var_names_[v.index]; }

  /// Cached disjunctive normal form. Lines that are trivially empty
  /// (clashing atoms, mixed constructor kinds, empty base sets) are dropped
  /// and subsumed lines are absorbed.
  const Dnf& dnf(TypeRef t);

  /// Identifier of the canonical DNF of t: equal for types whose simplified
  /// DNF coincide. Used as the memo key of emptiness and normalization.
  std::uint32_t dnf_key(TypeRef t);

  /// Rebuilds a type from a DNF (or a single line).
  TypeRef from_dnf(const Dnf& d);
  TypeRef from_line(const DnfLine& l);

  const std::set<TypeVarId>& free_ty_vars(TypeRef t);

  /// Rebuilds the graph reachable from `root`, replacing Var nodes for which
  /// `leaf` returns a type and closing cycles through fresh fixpoints.
  /// Subgraphs without free variables in `domain` are shared, not copied.
  TypeRef rebuild(TypeRef root, const std::set<TypeVarId>& domain,
                  const std::function<std::optional<TypeRef>(TypeVarId)>& leaf);

  /// True for nodes that close a cycle (the roots created by mk_rec).
  bool is_rec_root(TypeRef t) const { return rec_roots_.count(t.id) != 0; }

  // Emptiness memo, owned by the subty module.
  struct EmptinessState {
    std::unordered_map<std::uint32_t, bool> decided;
    std::unordered_map<std::uint32_t, std::size_t> in_progress;  // key -> depth
    std::size_t depth = 0;
    std::size_t lowest_assumption = SIZE_MAX;
  };
  EmptinessState& emptiness_state() { return emptiness_; }

 private:
  struct NodeHash {
    std::size_t operator()(const TypeNode& n) const;
  };
  struct NodeEq {
    bool operator()(const TypeNode& a, const TypeNode& b) const {
      return a.kind == b.kind && a.lhs == b.lhs && a.rhs == b.rhs &&
             a.payload == b.payload;
    }
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& k) const;
  };

  TypeRef intern(const TypeNode& n);
  TypeRef alloc_placeholder();
  // Turns placeholder `ph` into a copy of `content`, checks contractiveness
  // and returns a canonical root for the cycle.
  TypeRef close_cycle(TypeRef ph, TypeRef content);
  bool reaches_unguarded(TypeRef from, TypeRef target) const;
  std::vector<std::uint32_t> cycle_signature(TypeRef root) const;
  Dnf compute_dnf(TypeRef t);

  std::vector<TypeNode> nodes_;
  std::unordered_map<TypeNode, TypeRef, NodeHash, NodeEq> intern_;
  std::vector<BigInt> literals_;
  std::map<BigInt, std::uint32_t> literal_index_;
  std::vector<std::string> var_names_;
  std::map<std::vector<std::uint32_t>, TypeRef> cycles_;
  std::unordered_set<std::uint32_t> rec_roots_;

  std::unordered_map<std::uint32_t, Dnf> dnf_cache_;
  std::unordered_map<std::uint32_t, std::uint32_t> dnf_key_cache_;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> dnf_keys_;
  std::unordered_map<std::uint32_t, std::set<TypeVarId>> ftv_cache_;
  EmptinessState emptiness_;

  TypeRef top_;
  TypeRef bottom_;
  TypeRef int_;
  TypeRef float_;
};

// Canonical types of literals and guard types.
TypeRef ty_of_const(TypeStore& store, const Const& c);
TypeRef ty_of_guardty(TypeStore& store, GuardType g);

/// Replaces Var nodes for variables in dom(subst).
TypeRef apply_subst(TypeStore& store, TypeRef t, const TypeSubstitution& subst);

/// Free variables of forall A. t.
std::set<TypeVarId> free_ty_vars(TypeStore& store, const TypeScheme& s);

/// Builds a scheme and drops quantifiers not free in the body.
TypeScheme make_scheme(TypeStore& store, std::vector<TypeVarId> quantified,
                       TypeRef body);

/// forall {} t  becomes  forall fv(t). t ; quantified schemes are unchanged.
TypeScheme generalize(TypeStore& store, const TypeScheme& s);
TypeScheme generalize(TypeStore& store, TypeRef t);

/// Renames the quantified variables of s to fresh ones.
TypeRef instantiate(TypeStore& store, const TypeScheme& s,
                    std::vector<TypeVarId>* fresh_out = nullptr);

/// Composition applying `first`, then `second`.
TypeSubstitution compose(TypeStore& store, const TypeSubstitution& second,
                         const TypeSubstitution& first);

/// Replaces variables that occur only covariantly by Empty and variables
/// that occur only contravariantly by Any. The result is an instance of t
/// and is what diagnostics and reports print.
TypeRef clean_type(TypeStore& store, TypeRef t,
                   const std::set<TypeVarId>& keep = {});

/// Printer for the surface grammar. Cycles print as `rec X1. ...`.
/// With `rename` set, variables are renamed 'a, 'b, ... by first
/// appearance, which gives stable output for diagnostics.
std::string type_to_string(const TypeStore& store, TypeRef t,
                           bool rename = false);
std::string scheme_to_string(const TypeStore& store, const TypeScheme& s);
std::string var_to_string(const TypeStore& store, TypeVarId v);

}  // namespace minerl
