#pragma once

// Algebraic laws of subtyping and the ground-oracle agreement check, run on
// generated types. Each returns the list of violated laws with the types
// printed, so callers can report them.

#include <string>
#include <vector>

#include "generators.hpp"
#include "minerl/pretty.hpp"
#include "minerl/subty.hpp"

namespace minerl::test {

struct LawStats {
  std::size_t triples = 0;
  std::size_t checks = 0;
  std::size_t transitivity_hits = 0;  // random chains where the premise held
  std::size_t inversion_hits = 0;
  std::size_t projection_hits = 0;
  std::vector<std::string> failures;
};

namespace detail {

inline void law(LawStats& st, bool ok, const std::string& name, TypeStore& s,
                std::initializer_list<TypeRef> ts) {
  ++st.checks;
  if (ok) return;
  std::string msg = name + ":";
  for (TypeRef t : ts) msg += " [" + type_to_string(s, t) + "]";
  st.failures.push_back(std::move(msg));
}

inline TypeSubstitution ground_subst(Gen& g, TypeStore& s, const std::vector<TypeVarId>& vars) {
  TypeSubstitution th;
  for (auto v : vars) th[v] = g.type(s, 2, {}, true);
  return th;
}

}  // namespace detail

inline LawStats check_subtyping_laws(std::uint64_t seed, std::size_t n) {
  using detail::law;
  LawStats st;
  Gen g(seed);
  TypeStore s;
  std::vector<TypeVarId> vars = {s.fresh_var("a"), s.fresh_var("b"), s.fresh_var("c")};
  TypeRef any_pair = s.mk_pair(s.top(), s.top());
  for (std::size_t i = 0; i < n; ++i) {
    int recs = 1;
    TypeRef a = g.type(s, 4, vars, true, &recs);
    TypeRef b = g.type(s, 4, vars, true, &recs);
    TypeRef c = g.type(s, 4, vars, true, &recs);
    ++st.triples;

    law(st, is_subtype(s, a, a), "reflexivity", s, {a});
    law(st, is_subtype(s, s.bottom(), a) && is_subtype(s, a, s.top()), "bottom-top", s, {a});
    law(st, is_equiv(s, s.mk_neg(s.mk_neg(a)), a), "double-negation", s, {a});
    law(st, is_equiv(s, s.mk_neg(s.mk_union(a, b)), s.mk_inter(s.mk_neg(a), s.mk_neg(b))),
        "de-morgan-union", s, {a, b});
    law(st, is_equiv(s, s.mk_neg(s.mk_inter(a, b)), s.mk_union(s.mk_neg(a), s.mk_neg(b))),
        "de-morgan-inter", s, {a, b});
    law(st, is_equiv(s, s.mk_inter(a, s.mk_union(b, c)),
                     s.mk_union(s.mk_inter(a, b), s.mk_inter(a, c))),
        "distributivity", s, {a, b, c});
    law(st, is_equiv(s, s.mk_union(a, s.mk_inter(a, b)), a), "absorption", s, {a, b});
    law(st, is_equiv(s, s.mk_pair(s.mk_union(a, b), c),
                     s.mk_union(s.mk_pair(a, c), s.mk_pair(b, c))),
        "pair-distributivity", s, {a, b, c});

    // Transitivity: a chain that always holds, and the random one when its
    // premises do.
    TypeRef lo = s.mk_inter(a, b), hi = s.mk_union(a, c);
    law(st, is_subtype(s, lo, a) && is_subtype(s, a, hi) && is_subtype(s, lo, hi),
        "transitivity-chain", s, {a, b, c});
    if (is_subtype(s, a, b) && is_subtype(s, b, c)) {
      ++st.transitivity_hits;
      law(st, is_subtype(s, a, c), "transitivity", s, {a, b, c});
    }

    // Substitution stability.
    TypeSubstitution th = detail::ground_subst(g, s, vars);
    law(st, is_subtype(s, apply_subst(s, lo, th), apply_subst(s, hi, th)), "subst-stability-chain",
        s, {lo, hi});
    if (is_subtype(s, a, b))
      law(st, is_subtype(s, apply_subst(s, a, th), apply_subst(s, b, th)), "subst-stability", s,
          {a, b});

    // Arrow inversion for a variable-free nonempty domain on the right.
    TypeRef d2 = g.type(s, 2, {}, false);
    if (!is_empty(s, d2)) {
      TypeRef lhs = s.mk_arrow(a, b);
      TypeRef rhs = s.mk_arrow(d2, s.mk_union(b, c));
      TypeRef d3 = s.mk_inter(d2, g.type(s, 2, {}, false));
      TypeRef rhs2 = s.mk_arrow(is_empty(s, d3) ? d2 : d3, c);
      for (TypeRef r : {rhs, rhs2}) {
        if (!is_subtype(s, lhs, r)) continue;
        ++st.inversion_hits;
        TypeNode rn = s.node(r);  // copy: queries may grow the node table
        law(st, is_subtype(s, rn.lhs, a) && is_subtype(s, b, rn.rhs), "arrow-inversion", s,
            {lhs, r});
      }
    }

    // Projections of pair subtypes.
    TypeRef t = s.mk_inter(s.mk_union(a, s.mk_pair(b, c)), any_pair);
    TypeRef t2 = s.mk_union(t, s.mk_pair(c, a));
    try {
      TypeRef p1 = proj(s, 1, t), p2 = proj(s, 2, t);
      ++st.projection_hits;
      law(st, is_subtype(s, t, s.mk_pair(p1, p2)), "projection-i", s, {t});
      law(st, is_subtype(s, p1, proj(s, 1, t2)) && is_subtype(s, p2, proj(s, 2, t2)),
          "projection-monotone", s, {t, t2});
      if (is_subtype(s, t, s.mk_pair(b, c)))
        law(st, is_subtype(s, p1, b) && is_subtype(s, p2, c), "projection-ii", s, {t, b, c});
      law(st, is_subtype(s, proj(s, 1, s.mk_pair(b, c)), b), "projection-pair", s, {b, c});
    } catch (const NotAPairType&) {
      law(st, false, "projection-defined", s, {t});
    }
  }
  return st;
}

struct OracleStats {
  std::size_t types = 0;
  std::size_t empty = 0;
  std::size_t witnessed = 0;
  std::vector<std::string> failures;
};

// One-sided agreement: empty types have no witness, witnesses inhabit
// their type (so the type is nonempty).
inline OracleStats check_ground_oracle(std::uint64_t seed, std::size_t n) {
  OracleStats st;
  Gen g(seed);
  TypeStore s;
  for (std::size_t i = 0; i < n; ++i) {
    int recs = 1;
    TypeRef t = g.type(s, 4, {}, false, &recs);
    ++st.types;
    bool e = is_empty(s, t);
    auto w = ground_witness(s, t, 3);
    if (e) ++st.empty;
    if (w) ++st.witnessed;
    if (e && w)
      st.failures.push_back("empty type has witness " + pretty_expr(**w) + ": " + type_to_string(s, t));
    if (w && !member(s, **w, t))
      st.failures.push_back("witness " + pretty_expr(**w) + " not in " + type_to_string(s, t));
  }
  return st;
}

}  // namespace minerl::test
