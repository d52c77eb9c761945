#include "minerl/subty.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace minerl {

namespace {

bool is_base(NodeKind k) {
  return k == NodeKind::Int || k == NodeKind::Float || k == NodeKind::Singleton;
}

BaseSet base_atom(const TypeStore& s, TypeRef a) {
  BaseSet b;
  switch (s.node(a).kind) {
    case NodeKind::Int: b.floats = false; break;
    case NodeKind::Float: b.cofinite = false; break;
    case NodeKind::Singleton:
      b.cofinite = false;
      b.floats = false;
      b.ints.insert(s.singleton_value(a));
      break;
    default: break;
  }
  return b;
}

// (t1, t2) minus the union of negs[i..] is empty.
bool pair_empty(TypeStore& s, TypeRef t1, TypeRef t2, const std::vector<TypeRef>& negs,
                std::size_t i) {
  if (is_empty(s, t1) || is_empty(s, t2)) return true;
  if (i == negs.size()) return false;
  const TypeNode& n = s.node(negs[i]);
  TypeRef s1 = n.lhs, s2 = n.rhs;
  return pair_empty(s, s.diff_of(t1, s1), t2, negs, i + 1) &&
         pair_empty(s, t1, s.diff_of(t2, s2), negs, i + 1);
}

// Decides whether every subset split of the positive arrows covers the
// negative arrow whose domain is t1 and whose negated codomain is t2.
bool arrow_aux(TypeStore& s, TypeRef t1, TypeRef t2, const std::vector<TypeRef>& pos,
               std::size_t i, bool took_cod) {
  if (is_empty(s, t1)) return true;
  if (took_cod && is_empty(s, t2)) return true;
  if (i == pos.size()) return false;
  const TypeNode& n = s.node(pos[i]);
  TypeRef dom = n.lhs, cod = n.rhs;
  return arrow_aux(s, s.diff_of(t1, dom), t2, pos, i + 1, took_cod) &&
         arrow_aux(s, t1, s.inter_of(t2, cod), pos, i + 1, true);
}

bool arrows_empty(TypeStore& s, const std::vector<TypeRef>& pos, const std::vector<TypeRef>& negs) {
  for (auto n : negs) {
    const TypeNode& node = s.node(n);
    TypeRef dom = node.lhs, cod = node.rhs;
    if (arrow_aux(s, dom, s.neg_of(cod), pos, 0, false)) return true;
  }
  return false;
}

bool line_empty(TypeStore& s, const DnfLine& line) {
  std::vector<TypeRef> pb, pp, pa, nb, np, na;
  for (auto a : line.pos) {
    NodeKind k = s.node(a).kind;
    if (k == NodeKind::Pair) pp.push_back(a);
    else if (k == NodeKind::Arrow) pa.push_back(a);
    else if (is_base(k)) pb.push_back(a);
  }
  for (auto a : line.neg) {
    NodeKind k = s.node(a).kind;
    if (k == NodeKind::Pair) np.push_back(a);
    else if (k == NodeKind::Arrow) na.push_back(a);
    else if (is_base(k)) nb.push_back(a);
  }
  int kinds = !pb.empty() + !pp.empty() + !pa.empty();
  if (kinds > 1) return true;

  auto base_empty = [&] {
    BaseSet b;
    for (auto a : pb) b.intersect(base_atom(s, a));
    for (auto a : nb) b.subtract(base_atom(s, a));
    return b.empty();
  };
  auto pairs_empty = [&] {
    TypeRef t1 = s.top(), t2 = s.top();
    for (auto a : pp) {
      t1 = s.inter_of(t1, s.node(a).lhs);
      t2 = s.inter_of(t2, s.node(a).rhs);
    }
    return pair_empty(s, t1, t2, np, 0);
  };

  if (!pb.empty()) return base_empty();
  if (!pp.empty()) return pairs_empty();
  if (!pa.empty()) return arrows_empty(s, pa, na);
  // Only negative atoms: split Any into its base, pair and function parts.
  if (!base_empty()) return false;
  if (!pairs_empty()) return false;
  for (auto n : na)
    if (is_empty(s, s.node(n).lhs)) return true;
  return false;
}

}  // namespace

bool is_empty(TypeStore& store, TypeRef t) {
  if (t == store.bottom()) return true;
  if (t == store.top()) return false;
  auto key = store.dnf_key(t);
  auto& st = store.emptiness_state();
  auto d = st.decided.find(key);
  if (d != st.decided.end()) return d->second;
  auto ip = st.in_progress.find(key);
  if (ip != st.in_progress.end()) {
    st.lowest_assumption = std::min(st.lowest_assumption, ip->second);
    return true;
  }
  std::size_t my_depth = st.depth;
  st.in_progress.emplace(key, my_depth);
  ++st.depth;
  std::size_t saved = st.lowest_assumption;
  st.lowest_assumption = SIZE_MAX;

  Dnf lines = store.dnf(t);
  bool result = true;
  for (const auto& l : lines) {
    if (!line_empty(store, l)) {
      result = false;
      break;
    }
  }

  auto& st2 = store.emptiness_state();
  --st2.depth;
  st2.in_progress.erase(key);
  std::size_t lowest = st2.lowest_assumption;
  if (!result || lowest >= my_depth) st2.decided[key] = result;
  st2.lowest_assumption = std::min(saved, lowest < my_depth ? lowest : SIZE_MAX);
  return result;
}

bool is_subtype(TypeStore& store, TypeRef t, TypeRef u) {
  if (t == u || t == store.bottom() || u == store.top()) return true;
  return is_empty(store, store.diff_of(t, u));
}

bool is_equiv(TypeStore& store, TypeRef t, TypeRef u) {
  return is_subtype(store, t, u) && is_subtype(store, u, t);
}

// ---------------------------------------------------------------------------

namespace {

TypeRef proj_rec(TypeStore& s, int i, TypeRef t1, TypeRef t2, const std::vector<TypeRef>& negs,
                 std::size_t k) {
  if (is_empty(s, t1) || is_empty(s, t2)) return s.bottom();
  if (k == negs.size()) return i == 1 ? t1 : t2;
  const TypeNode& n = s.node(negs[k]);
  TypeRef s1 = n.lhs, s2 = n.rhs;
  TypeRef a = proj_rec(s, i, s.diff_of(t1, s1), t2, negs, k + 1);
  TypeRef b = proj_rec(s, i, t1, s.diff_of(t2, s2), negs, k + 1);
  return s.union_of(a, b);
}

}  // namespace

TypeRef proj(TypeStore& store, int i, TypeRef t) {
  TypeRef any_pair = store.mk_pair(store.top(), store.top());
  if (!is_subtype(store, t, any_pair))
    throw NotAPairType("type " + type_to_string(store, t, true) + " is not a pair type");
  Dnf lines = store.dnf(t);
  TypeRef acc = store.bottom();
  for (const auto& l : lines) {
    TypeRef t1 = store.top(), t2 = store.top();
    bool other_kind = false;
    for (auto a : l.pos) {
      const TypeNode& n = store.node(a);
      if (n.kind == NodeKind::Pair) {
        t1 = store.inter_of(t1, n.lhs);
        t2 = store.inter_of(t2, n.rhs);
      } else if (n.kind != NodeKind::Var) {
        other_kind = true;
      }
    }
    if (other_kind) continue;
    std::vector<TypeRef> negs;
    for (auto a : l.neg)
      if (store.node(a).kind == NodeKind::Pair) negs.push_back(a);
    acc = store.union_of(acc, proj_rec(store, i, t1, t2, negs, 0));
  }
  return acc;
}

TypeRef canonical_type(TypeStore& store, const Expr& v) {
  switch (v.kind) {
    case Expr::Kind::Const: return ty_of_const(store, v.value);
    case Expr::Kind::Pair:
      return store.mk_pair(canonical_type(store, *v.lhs), canonical_type(store, *v.rhs));
    case Expr::Kind::Abs: return store.mk_arrow(store.bottom(), store.top());
    default: throw std::invalid_argument("canonical_type of a non-value");
  }
}

namespace {

bool first_order(const Expr& v) {
  if (v.kind == Expr::Kind::Const) return true;
  if (v.kind == Expr::Kind::Pair) return first_order(*v.lhs) && first_order(*v.rhs);
  return false;
}

bool member_fo(TypeStore& s, const Expr& v, TypeRef t) {
  const TypeNode& n = s.node(t);
  switch (n.kind) {
    case NodeKind::Union: {
      TypeRef l = n.lhs, r = n.rhs;
      return member_fo(s, v, l) || member_fo(s, v, r);
    }
    case NodeKind::Neg: return !member_fo(s, v, n.lhs);
    case NodeKind::Int: return v.kind == Expr::Kind::Const && v.value.is_int();
    case NodeKind::Float: return v.kind == Expr::Kind::Const && v.value.is_float();
    case NodeKind::Singleton:
      return v.kind == Expr::Kind::Const && v.value.is_int() &&
             v.value.as_int() == s.singleton_value(t);
    case NodeKind::Pair: {
      if (v.kind != Expr::Kind::Pair) return false;
      TypeRef l = n.lhs, r = n.rhs;
      return member_fo(s, *v.lhs, l) && member_fo(s, *v.rhs, r);
    }
    default: return false;  // arrows hold no first-order value; variables hold nothing
  }
}

}  // namespace

bool member(TypeStore& store, const Expr& v, TypeRef t) {
  if (first_order(v)) return member_fo(store, v, t);
  return is_subtype(store, canonical_type(store, v), t);
}

std::optional<ValuePtr> ground_witness(TypeStore& store, TypeRef t, int depth) {
  // Collect mentioned singletons and all pair components.
  std::set<BigInt> ints;
  std::vector<TypeRef> comps;
  {
    std::unordered_set<std::uint32_t> seen;
    std::vector<TypeRef> todo{t};
    while (!todo.empty()) {
      TypeRef u = todo.back();
      todo.pop_back();
      if (!seen.insert(u.id).second) continue;
      const TypeNode& n = store.node(u);
      switch (n.kind) {
        case NodeKind::Singleton: ints.insert(store.singleton_value(u)); break;
        case NodeKind::Pair:
          comps.push_back(n.lhs);
          comps.push_back(n.rhs);
          todo.push_back(n.lhs);
          todo.push_back(n.rhs);
          break;
        case NodeKind::Union:
        case NodeKind::Arrow:
          todo.push_back(n.lhs);
          todo.push_back(n.rhs);
          break;
        case NodeKind::Neg: todo.push_back(n.lhs); break;
        default: break;
      }
    }
    std::sort(comps.begin(), comps.end());
    comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
  }
  std::vector<ValuePtr> atoms;
  for (const auto& i : ints) atoms.push_back(const_expr(Const(i)));
  BigInt fresh = 2;
  for (const auto& i : ints) {
    BigInt a = i < 0 ? BigInt(-i) : i;
    if (a + 1 > fresh) fresh = a + 1;
  }
  for (const BigInt& probe : {BigInt(0), BigInt(1), fresh})
    if (!ints.count(probe)) atoms.push_back(const_expr(Const(probe)));
  atoms.push_back(float_expr(0.5));
  atoms.push_back(abs_expr("x", var_expr("x")));

  // Values with the same memberships in every pair component behave alike
  // inside pairs, so one representative per signature suffices.
  auto signature = [&](const ValuePtr& v) {
    std::vector<bool> sig;
    sig.reserve(comps.size());
    for (auto c : comps) sig.push_back(member(store, *v, c));
    return sig;
  };
  std::vector<ValuePtr> reps;
  std::set<std::vector<bool>> sigs;
  auto offer = [&](const ValuePtr& v) -> bool {
    if (member(store, *v, t)) return true;
    if (sigs.insert(signature(v)).second) reps.push_back(v);
    return false;
  };
  for (const auto& a : atoms)
    if (offer(a)) return a;
  for (int d = 2; d <= depth; ++d) {
    std::vector<ValuePtr> prev = reps;
    for (const auto& a : prev)
      for (const auto& b : prev) {
        ValuePtr p = pair_expr(a, b);
        if (offer(p)) return p;
      }
  }
  return std::nullopt;
}

std::string dump_dnf(TypeStore& store, TypeRef t) {
  std::ostringstream o;
  for (const auto& l : store.dnf(t)) {
    bool first = true;
    for (auto a : l.pos) {
      o << (first ? "" : " & ") << type_to_string(store, a);
      first = false;
    }
    for (auto a : l.neg) {
      o << (first ? "!" : " & !") << "(" << type_to_string(store, a) << ")";
      first = false;
    }
    if (first) o << "Any";
    o << "\n";
  }
  return o.str();
}

}  // namespace minerl

namespace minerl {

namespace {

class Simplifier {
 public:
  explicit Simplifier(TypeStore& s) : s_(s) {}

  TypeRef run(TypeRef t) {
    find_cycles(t);
    return simp(t);
  }

 private:
  std::vector<TypeRef> children(TypeRef t) const {
    const TypeNode& n = s_.node(t);
    switch (n.kind) {
      case NodeKind::Union:
      case NodeKind::Pair:
      case NodeKind::Arrow: return {n.lhs, n.rhs};
      case NodeKind::Neg: return {n.lhs};
      default: return {};
    }
  }

  // Tarjan's algorithm; marks nodes that lie on a cycle.
  void find_cycles(TypeRef root) {
    std::unordered_map<std::uint32_t, std::uint32_t> index, low;
    std::vector<std::uint32_t> stack;
    std::unordered_set<std::uint32_t> on;
    std::uint32_t next = 0;
    auto visit = [&](auto&& self, TypeRef t) -> void {
      index[t.id] = low[t.id] = next++;
      stack.push_back(t.id);
      on.insert(t.id);
      bool self_loop = false;
      for (auto c : children(t)) {
        if (c == t) self_loop = true;
        if (!index.count(c.id)) {
          self(self, c);
          low[t.id] = std::min(low[t.id], low[c.id]);
        } else if (on.count(c.id)) {
          low[t.id] = std::min(low[t.id], index[c.id]);
        }
      }
      if (low[t.id] != index[t.id]) return;
      std::vector<std::uint32_t> scc;
      std::uint32_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on.erase(w);
        scc.push_back(w);
      } while (w != t.id);
      if (scc.size() > 1 || self_loop) cyclic_.insert(scc.begin(), scc.end());
    };
    visit(visit, root);
  }

  bool open(TypeRef t) {
    if (active_.empty()) return false;
    std::vector<TypeRef> todo{t};
    std::unordered_set<std::uint32_t> seen;
    while (!todo.empty()) {
      TypeRef u = todo.back();
      todo.pop_back();
      if (!seen.insert(u.id).second) continue;
      if (s_.node(u).kind == NodeKind::Placeholder) return true;
      for (auto c : children(u)) todo.push_back(c);
    }
    return false;
  }

  void operands(TypeRef t, std::vector<TypeRef>& out) {
    if (s_.node(t).kind == NodeKind::Union && !cyclic_.count(t.id) && t != s_.top()) {
      for (auto c : children(t)) operands(c, out);
    } else {
      out.push_back(t);
    }
  }

  // Keeps operand i unless another operand makes it redundant; `drop(a, b)`
  // says a is redundant next to b.
  template <class Drop>
  std::vector<TypeRef> prune(std::vector<TypeRef> xs, Drop drop) {
    std::vector<bool> closed;
    for (auto x : xs) closed.push_back(!open(x));
    std::vector<TypeRef> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < xs.size() && !redundant; ++j) {
        if (i == j || !closed[i] || !closed[j]) continue;
        if (xs[i] == xs[j]) redundant = j < i;
        else if (drop(xs[i], xs[j])) redundant = !drop(xs[j], xs[i]) || j < i;
      }
      if (!redundant) out.push_back(xs[i]);
    }
    return out;
  }

  static bool is_base(const TypeNode& n) {
    return n.kind == NodeKind::Int || n.kind == NodeKind::Float || n.kind == NodeKind::Singleton;
  }

  BaseSet atom_set(TypeRef a) {
    BaseSet x;
    switch (s_.node(a).kind) {
      case NodeKind::Int: x.floats = false; break;
      case NodeKind::Float: x.cofinite = false; break;
      default:
        x.cofinite = false;
        x.floats = false;
        x.ints.insert(s_.singleton_value(a));
    }
    return x;
  }

  // A variable-free subtype of Int | Float, written as singletons, Int
  // minus singletons, and Float.
  std::optional<TypeRef> base_form(TypeRef t) {
    if (!s_.free_ty_vars(t).empty()) return std::nullopt;
    TypeRef numbers = s_.union_of(s_.mk_int(), s_.mk_float());
    if (t == s_.bottom() || !is_subtype(s_, t, numbers)) return std::nullopt;
    BaseSet none;
    none.cofinite = false;
    none.floats = false;
    BaseSet acc = none;
    for (const auto& l : s_.dnf(t)) {
      BaseSet b;
      bool skip = false;
      for (auto a : l.pos) {
        if (is_base(s_.node(a))) b.intersect(atom_set(a));
        else if (s_.node(a).kind != NodeKind::Var) skip = true;
      }
      if (skip) continue;
      for (auto a : l.neg)
        if (is_base(s_.node(a))) b.subtract(atom_set(a));
      // acc | b = !(!acc & !b)
      BaseSet na = BaseSet::all(), nb = BaseSet::all();
      na.subtract(acc);
      nb.subtract(b);
      na.intersect(nb);
      acc = BaseSet::all();
      acc.subtract(na);
    }
    std::vector<TypeRef> parts;
    if (acc.cofinite) {
      TypeRef i = s_.mk_int();
      for (const auto& v : acc.ints) i = s_.diff_of(i, s_.mk_singleton(v));
      parts.push_back(i);
    } else {
      for (const auto& v : acc.ints) parts.push_back(s_.mk_singleton(v));
    }
    if (acc.floats) parts.push_back(s_.mk_float());
    return s_.union_all(parts);
  }

  void chain(TypeRef t, std::vector<TypeRef>& out) {
    if (s_.node(t).kind == NodeKind::Union && !s_.is_rec_root(t) && t != s_.top()) {
      for (auto c : children(t)) chain(c, out);
    } else {
      out.push_back(t);
    }
  }

  TypeRef join_closed(std::vector<TypeRef> xs) {
    std::vector<TypeRef> flat;
    for (auto x : xs) chain(x, flat);
    flat = prune(flat, [&](TypeRef a, TypeRef b) { return is_subtype(s_, a, b); });
    TypeRef r = s_.union_all(flat);
    if (auto b = base_form(r)) return *b;
    return r;
  }

  // Intersection of closed components, distributing over a union component
  // so that empty cases disappear.
  TypeRef meet_closed(std::vector<TypeRef> xs, int depth) {
    xs = prune(xs, [&](TypeRef a, TypeRef b) { return is_subtype(s_, b, a); });
    TypeRef r = s_.inter_all(xs);
    if (is_empty(s_, r)) return s_.bottom();
    if (xs.size() > 1 && depth < 3) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<TypeRef> ops;
        chain(xs[i], ops);
        if (ops.size() < 2 || ops.size() > 8) continue;
        std::vector<TypeRef> alts;
        for (auto o : ops) {
          std::vector<TypeRef> ys = xs;
          ys[i] = o;
          TypeRef a = meet_closed(ys, depth + 1);
          if (a != s_.bottom()) alts.push_back(a);
        }
        return join_closed(alts);
      }
    }
    if (auto b = base_form(r)) return *b;
    return r;
  }

  TypeRef build(TypeRef t) {
    const TypeNode n = s_.node(t);
    switch (n.kind) {
      case NodeKind::Union: {
        if (t == s_.top()) return t;
        std::vector<TypeRef> ops, xs;
        for (auto c : children(t)) operands(c, ops);
        for (auto o : ops) xs.push_back(simp(o));
        bool closed = true;
        for (auto x : xs) closed = closed && !open(x);
        if (closed) return join_closed(xs);
        xs = prune(xs, [&](TypeRef a, TypeRef b) { return is_subtype(s_, a, b); });
        return s_.union_all(xs);
      }
      case NodeKind::Neg: {
        if (t == s_.bottom()) return t;
        if (s_.node(n.lhs).kind == NodeKind::Union && !cyclic_.count(n.lhs.id)) {
          std::vector<TypeRef> ops, xs;
          for (auto c : children(n.lhs)) operands(c, ops);
          for (auto o : ops)
            xs.push_back(s_.node(o).kind == NodeKind::Neg ? simp(s_.node(o).lhs) : s_.neg_of(simp(o)));
          bool closed = true;
          for (auto x : xs) closed = closed && !open(x);
          if (closed) return meet_closed(xs, 0);
          xs = prune(xs, [&](TypeRef a, TypeRef b) { return is_subtype(s_, b, a); });
          return s_.inter_all(xs);
        }
        return s_.neg_of(simp(n.lhs));
      }
      case NodeKind::Pair: {
        TypeRef a = simp(n.lhs), b = simp(n.rhs);
        if ((!open(a) && is_empty(s_, a)) || (!open(b) && is_empty(s_, b))) return s_.bottom();
        return s_.mk_pair(a, b);
      }
      case NodeKind::Arrow: return s_.mk_arrow(simp(n.lhs), simp(n.rhs));
      default: return t;
    }
  }

  TypeRef simp(TypeRef t) {
    if (auto m = memo_.find(t.id); m != memo_.end()) return m->second;
    if (auto a = active_.find(t.id); a != active_.end()) return a->second;
    TypeRef r;
    if (cyclic_.count(t.id)) {
      r = s_.mk_rec([&](TypeRef x) {
        active_[t.id] = x;
        TypeRef body = build(t);
        active_.erase(t.id);
        return body;
      });
    } else {
      r = build(t);
    }
    if (!open(r)) memo_[t.id] = r;
    return r;
  }

  TypeStore& s_;
  std::unordered_set<std::uint32_t> cyclic_;
  std::unordered_map<std::uint32_t, TypeRef> memo_;
  std::unordered_map<std::uint32_t, TypeRef> active_;
};

}  // namespace

TypeRef simplify_type(TypeStore& store, TypeRef t) {
  try {
    TypeRef r = Simplifier(store).run(t);
    return is_equiv(store, r, t) ? r : t;
  } catch (const ContractivenessViolation&) {
    return t;
  }
}

}  // namespace minerl
