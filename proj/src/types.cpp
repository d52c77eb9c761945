#include "minerl/types.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace minerl {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

enum class AtomClass { Base, Pair, Arrow, Var };

AtomClass atom_class(NodeKind k) {
  switch (k) {
    case NodeKind::Pair: return AtomClass::Pair;
    case NodeKind::Arrow: return AtomClass::Arrow;
    case NodeKind::Var: return AtomClass::Var;
    default: return AtomClass::Base;
  }
}

void sort_unique(std::vector<TypeRef>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool includes(const std::vector<TypeRef>& big, const std::vector<TypeRef>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

void BaseSet::intersect(const BaseSet& o) {
  if (cofinite && o.cofinite) {
    ints.insert(o.ints.begin(), o.ints.end());
  } else if (cofinite) {
    std::set<BigInt> r;
    for (const auto& i : o.ints)
      if (!ints.count(i)) r.insert(i);
    ints = std::move(r);
    cofinite = false;
  } else if (o.cofinite) {
    for (const auto& i : o.ints) ints.erase(i);
  } else {
    std::set<BigInt> r;
    for (const auto& i : ints)
      if (o.ints.count(i)) r.insert(i);
    ints = std::move(r);
  }
  floats = floats && o.floats;
}

void BaseSet::subtract(const BaseSet& o) {
  BaseSet c = o;
  c.cofinite = !o.cofinite;
  c.floats = !o.floats;
  intersect(c);
}

std::size_t TypeStore::NodeHash::operator()(const TypeNode& n) const {
  std::size_t h = static_cast<std::size_t>(n.kind);
  h = mix(h, n.lhs.id);
  h = mix(h, n.rhs.id);
  h = mix(h, n.payload);
  return h;
}

std::size_t TypeStore::KeyHash::operator()(const std::vector<std::uint32_t>& k) const {
  std::size_t h = k.size();
  for (auto x : k) h = mix(h, x);
  return h;
}

TypeStore::TypeStore() {
  nodes_.reserve(1024);
  int_ = intern(TypeNode{NodeKind::Int, {}, {}, 0});
  float_ = intern(TypeNode{NodeKind::Float, {}, {}, 0});
  top_ = mk_rec([&](TypeRef x) {
    TypeRef pairs = mk_pair(x, x);
    TypeRef funs = mk_arrow(mk_neg(x), x);
    return mk_union(mk_union(mk_union(int_, float_), pairs), funs);
  });
  bottom_ = mk_neg(top_);
}

TypeRef TypeStore::intern(const TypeNode& n) {
  auto it = intern_.find(n);
  if (it != intern_.end()) return it->second;
  TypeRef r{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(n);
  intern_.emplace(n, r);
  return r;
}

TypeRef TypeStore::alloc_placeholder() {
  TypeRef r{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(TypeNode{NodeKind::Placeholder, {}, {}, 0});
  return r;
}

TypeRef TypeStore::mk_union(TypeRef a, TypeRef b) {
  return intern(TypeNode{NodeKind::Union, a, b, 0});
}
TypeRef TypeStore::mk_neg(TypeRef a) {
  return intern(TypeNode{NodeKind::Neg, a, {}, 0});
}
TypeRef TypeStore::mk_inter(TypeRef a, TypeRef b) {
  return mk_neg(mk_union(mk_neg(a), mk_neg(b)));
}
TypeRef TypeStore::mk_diff(TypeRef a, TypeRef b) { return mk_inter(a, mk_neg(b)); }
TypeRef TypeStore::mk_pair(TypeRef a, TypeRef b) {
  return intern(TypeNode{NodeKind::Pair, a, b, 0});
}
TypeRef TypeStore::mk_arrow(TypeRef dom, TypeRef cod) {
  return intern(TypeNode{NodeKind::Arrow, dom, cod, 0});
}
TypeRef TypeStore::mk_var(TypeVarId v) {
  return intern(TypeNode{NodeKind::Var, {}, {}, v.index});
}
TypeRef TypeStore::mk_int() { return int_; }
TypeRef TypeStore::mk_float() { return float_; }

TypeRef TypeStore::mk_singleton(const BigInt& value) {
  auto it = literal_index_.find(value);
  std::uint32_t idx;
  if (it == literal_index_.end()) {
    idx = static_cast<std::uint32_t>(literals_.size());
    literals_.push_back(value);
    literal_index_.emplace(value, idx);
  } else {
    idx = it->second;
  }
  return intern(TypeNode{NodeKind::Singleton, {}, {}, idx});
}

TypeVarId TypeStore::fresh_var(std::string debug_name) {
  TypeVarId v{static_cast<std::uint32_t>(var_names_.size())};
  var_names_.push_back(std::move(debug_name));
  return v;
}

bool TypeStore::reaches_unguarded(TypeRef from, TypeRef target) const {
  std::vector<TypeRef> todo{from};
  std::unordered_set<std::uint32_t> seen;
  while (!todo.empty()) {
    TypeRef t = todo.back();
    todo.pop_back();
    if (t == target) return true;
    if (!seen.insert(t.id).second) continue;
    const TypeNode& n = nodes_[t.id];
    if (n.kind == NodeKind::Union) {
      todo.push_back(n.lhs);
      todo.push_back(n.rhs);
    } else if (n.kind == NodeKind::Neg) {
      todo.push_back(n.lhs);
    }
  }
  return false;
}

std::vector<std::uint32_t> TypeStore::cycle_signature(TypeRef root) const {
  // Nodes that can reach `root`: only nodes allocated after it can.
  std::vector<std::uint32_t> forward;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> rev;
  std::unordered_set<std::uint32_t> seen{root.id};
  std::vector<std::uint32_t> todo{root.id};
  auto children = [&](std::uint32_t id, auto&& f) {
    const TypeNode& n = nodes_[id];
    switch (n.kind) {
      case NodeKind::Union:
      case NodeKind::Pair:
      case NodeKind::Arrow:
        f(n.lhs.id);
        f(n.rhs.id);
        break;
      case NodeKind::Neg: f(n.lhs.id); break;
      default: break;
    }
  };
  while (!todo.empty()) {
    auto id = todo.back();
    todo.pop_back();
    children(id, [&](std::uint32_t c) {
      if (c < root.id) return;
      rev[c].push_back(id);
      if (seen.insert(c).second) todo.push_back(c);
    });
  }
  std::unordered_set<std::uint32_t> cyclic{root.id};
  todo = {root.id};
  while (!todo.empty()) {
    auto id = todo.back();
    todo.pop_back();
    for (auto p : rev[id])
      if (cyclic.insert(p).second) todo.push_back(p);
  }
  std::vector<std::uint32_t> out;
  std::unordered_map<std::uint32_t, std::uint32_t> index;
  constexpr std::uint32_t kLeaf = 100, kBack = 101;
  auto enc = [&](auto&& self, std::uint32_t id) -> void {
    if (!cyclic.count(id)) {
      out.push_back(kLeaf);
      out.push_back(id);
      return;
    }
    auto it = index.find(id);
    if (it != index.end()) {
      out.push_back(kBack);
      out.push_back(it->second);
      return;
    }
    index.emplace(id, static_cast<std::uint32_t>(index.size()));
    const TypeNode& n = nodes_[id];
    out.push_back(static_cast<std::uint32_t>(n.kind));
    out.push_back(n.payload);
    children(id, [&](std::uint32_t c) { self(self, c); });
  };
  enc(enc, root.id);
  return out;
}

TypeRef TypeStore::close_cycle(TypeRef ph, TypeRef content) {
  if (content == ph || reaches_unguarded(content, ph))
    throw ContractivenessViolation(
        "recursive type is not contractive: its variable occurs outside "
        "any pair or arrow");
  if (content.id < ph.id) return content;
  // Does the content reach the placeholder at all?
  {
    std::vector<TypeRef> todo{content};
    std::unordered_set<std::uint32_t> seen;
    bool found = false;
    while (!todo.empty() && !found) {
      TypeRef t = todo.back();
      todo.pop_back();
      if (t == ph) {
        found = true;
        break;
      }
      if (t.id < ph.id || !seen.insert(t.id).second) continue;
      const TypeNode& n = nodes_[t.id];
      if (n.kind == NodeKind::Union || n.kind == NodeKind::Pair ||
          n.kind == NodeKind::Arrow) {
        todo.push_back(n.lhs);
        todo.push_back(n.rhs);
      } else if (n.kind == NodeKind::Neg) {
        todo.push_back(n.lhs);
      }
    }
    if (!found) return content;
  }
  nodes_[ph.id] = nodes_[content.id];
  rec_roots_.insert(ph.id);
  auto sig = cycle_signature(ph);
  auto it = cycles_.find(sig);
  if (it != cycles_.end()) return it->second;
  cycles_.emplace(std::move(sig), ph);
  return ph;
}

TypeRef TypeStore::mk_rec(const std::function<TypeRef(TypeRef)>& build) {
  TypeRef ph = alloc_placeholder();
  TypeRef content = build(ph);
  return close_cycle(ph, content);
}

TypeRef TypeStore::list_of(TypeRef elem) {
  TypeRef nil = mk_singleton(0);
  return mk_rec([&](TypeRef self) { return mk_union(nil, mk_pair(elem, self)); });
}

TypeRef TypeStore::union_of(TypeRef a, TypeRef b) {
  if (a == b) return a;
  if (a == bottom_) return b;
  if (b == bottom_) return a;
  if (a == top_ || b == top_) return top_;
  if (node(a).kind == NodeKind::Neg && node(a).lhs == b) return top_;
  if (node(b).kind == NodeKind::Neg && node(b).lhs == a) return top_;
  return mk_union(a, b);
}

TypeRef TypeStore::neg_of(TypeRef a) {
  if (a == top_) return bottom_;
  if (a == bottom_) return top_;
  if (node(a).kind == NodeKind::Neg) return node(a).lhs;
  return mk_neg(a);
}

TypeRef TypeStore::inter_of(TypeRef a, TypeRef b) {
  if (a == b) return a;
  if (a == top_) return b;
  if (b == top_) return a;
  if (a == bottom_ || b == bottom_) return bottom_;
  if (node(a).kind == NodeKind::Neg && node(a).lhs == b) return bottom_;
  if (node(b).kind == NodeKind::Neg && node(b).lhs == a) return bottom_;
  return mk_neg(mk_union(neg_of(a), neg_of(b)));
}

TypeRef TypeStore::diff_of(TypeRef a, TypeRef b) { return inter_of(a, neg_of(b)); }

TypeRef TypeStore::union_all(const std::vector<TypeRef>& ts) {
  TypeRef r = bottom_;
  for (auto t : ts) r = union_of(r, t);
  return r;
}

TypeRef TypeStore::inter_all(const std::vector<TypeRef>& ts) {
  TypeRef r = top_;
  for (auto t : ts) r = inter_of(r, t);
  return r;
}

// ---------------------------------------------------------------------------
// DNF

namespace {

BaseSet base_of_atom(const TypeStore& s, TypeRef a) {
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

// Simplifies a line in place; false when it is trivially empty.
bool simplify_line(const TypeStore& s, DnfLine& l) {
  sort_unique(l.pos);
  sort_unique(l.neg);
  for (auto p : l.pos)
    if (std::binary_search(l.neg.begin(), l.neg.end(), p)) return false;
  std::optional<AtomClass> cls;
  for (auto p : l.pos) {
    AtomClass c = atom_class(s.node(p).kind);
    if (c == AtomClass::Var) continue;
    if (cls && *cls != c) return false;
    cls = c;
  }
  if (!cls) return true;
  std::vector<TypeRef> neg;
  for (auto n : l.neg) {
    AtomClass c = atom_class(s.node(n).kind);
    if (c == AtomClass::Var || c == *cls) neg.push_back(n);
  }
  l.neg = std::move(neg);
  if (*cls == AtomClass::Base) {
    BaseSet b;
    for (auto p : l.pos)
      if (atom_class(s.node(p).kind) == AtomClass::Base) b.intersect(base_of_atom(s, p));
    for (auto n : l.neg)
      if (atom_class(s.node(n).kind) == AtomClass::Base) b.subtract(base_of_atom(s, n));
    if (b.empty()) return false;
  }
  return true;
}

void absorb(Dnf& d) {
  std::sort(d.begin(), d.end(), [](const DnfLine& a, const DnfLine& b) {
    auto sa = a.pos.size() + a.neg.size(), sb = b.pos.size() + b.neg.size();
    if (sa != sb) return sa < sb;
    if (a.pos != b.pos) return a.pos < b.pos;
    return a.neg < b.neg;
  });
  Dnf out;
  for (auto& l : d) {
    bool absorbed = false;
    for (const auto& k : out)
      if (includes(l.pos, k.pos) && includes(l.neg, k.neg)) {
        absorbed = true;
        break;
      }
    if (!absorbed) out.push_back(std::move(l));
  }
  d = std::move(out);
}

}  // namespace

Dnf TypeStore::compute_dnf(TypeRef t) {
  if (t == top_) return {DnfLine{}};
  if (t == bottom_) return {};
  const TypeNode& n = nodes_[t.id];
  switch (n.kind) {
    case NodeKind::Union: {
      TypeRef l = n.lhs, r = n.rhs;
      Dnf d = dnf(l);
      const Dnf& e = dnf(r);
      d.insert(d.end(), e.begin(), e.end());
      absorb(d);
      return d;
    }
    case NodeKind::Neg: {
      Dnf inner = dnf(n.lhs);
      Dnf acc{DnfLine{}};
      for (const auto& line : inner) {
        Dnf next;
        for (const auto& a : acc) {
          for (auto p : line.pos) {
            DnfLine l = a;
            l.neg.push_back(p);
            if (simplify_line(*this, l)) next.push_back(std::move(l));
          }
          for (auto q : line.neg) {
            DnfLine l = a;
            l.pos.push_back(q);
            if (simplify_line(*this, l)) next.push_back(std::move(l));
          }
        }
        absorb(next);
        acc = std::move(next);
        if (acc.empty()) break;
      }
      return acc;
    }
    case NodeKind::Placeholder:
      throw std::logic_error("dnf of an unfinished recursive type");
    default: {
      DnfLine l;
      l.pos.push_back(t);
      if (!simplify_line(*this, l)) return {};
      return {l};
    }
  }
}

const Dnf& TypeStore::dnf(TypeRef t) {
  auto it = dnf_cache_.find(t.id);
  if (it != dnf_cache_.end()) return it->second;
  Dnf d = compute_dnf(t);
  return dnf_cache_.emplace(t.id, std::move(d)).first->second;
}

std::uint32_t TypeStore::dnf_key(TypeRef t) {
  auto it = dnf_key_cache_.find(t.id);
  if (it != dnf_key_cache_.end()) return it->second;
  std::vector<std::vector<std::uint32_t>> lines;
  for (const auto& l : dnf(t)) {
    std::vector<std::uint32_t> enc;
    enc.push_back(static_cast<std::uint32_t>(l.pos.size()));
    for (auto p : l.pos) enc.push_back(p.id);
    for (auto q : l.neg) enc.push_back(q.id);
    lines.push_back(std::move(enc));
  }
  std::sort(lines.begin(), lines.end());
  std::vector<std::uint32_t> key;
  for (auto& l : lines) {
    key.push_back(static_cast<std::uint32_t>(l.size()));
    key.insert(key.end(), l.begin(), l.end());
  }
  auto [kit, inserted] =
      dnf_keys_.emplace(std::move(key), static_cast<std::uint32_t>(dnf_keys_.size()));
  dnf_key_cache_.emplace(t.id, kit->second);
  return kit->second;
}

TypeRef TypeStore::from_line(const DnfLine& l) {
  TypeRef r = top_;
  for (auto p : l.pos) r = inter_of(r, p);
  for (auto q : l.neg) r = inter_of(r, neg_of(q));
  return r;
}

TypeRef TypeStore::from_dnf(const Dnf& d) {
  TypeRef r = bottom_;
  for (const auto& l : d) r = union_of(r, from_line(l));
  return r;
}

const std::set<TypeVarId>& TypeStore::free_ty_vars(TypeRef t) {
  auto it = ftv_cache_.find(t.id);
  if (it != ftv_cache_.end()) return it->second;
  std::set<TypeVarId> acc;
  std::unordered_set<std::uint32_t> seen;
  std::vector<TypeRef> todo{t};
  while (!todo.empty()) {
    TypeRef u = todo.back();
    todo.pop_back();
    if (!seen.insert(u.id).second) continue;
    if (u != t) {
      auto c = ftv_cache_.find(u.id);
      if (c != ftv_cache_.end()) {
        acc.insert(c->second.begin(), c->second.end());
        continue;
      }
    }
    const TypeNode& n = nodes_[u.id];
    switch (n.kind) {
      case NodeKind::Var: acc.insert(TypeVarId{n.payload}); break;
      case NodeKind::Union:
      case NodeKind::Pair:
      case NodeKind::Arrow:
        todo.push_back(n.lhs);
        todo.push_back(n.rhs);
        break;
      case NodeKind::Neg: todo.push_back(n.lhs); break;
      default: break;
    }
  }
  return ftv_cache_.emplace(t.id, std::move(acc)).first->second;
}

TypeRef TypeStore::rebuild(
    TypeRef root, const std::set<TypeVarId>& domain,
    const std::function<std::optional<TypeRef>(TypeVarId)>& leaf) {
  std::unordered_map<std::uint32_t, TypeRef> done;
  std::unordered_map<std::uint32_t, TypeRef> placeholder;
  std::unordered_set<std::uint32_t> on_stack;
  auto touches = [&](TypeRef t) {
    const auto& fv = free_ty_vars(t);
    for (auto v : fv)
      if (domain.count(v)) return true;
    return false;
  };
  auto go = [&](auto&& self, TypeRef t) -> TypeRef {
    auto d = done.find(t.id);
    if (d != done.end()) return d->second;
    if (!touches(t)) return t;
    if (on_stack.count(t.id)) {
      auto p = placeholder.find(t.id);
      if (p != placeholder.end()) return p->second;
      TypeRef ph = alloc_placeholder();
      placeholder.emplace(t.id, ph);
      return ph;
    }
    TypeNode n = nodes_[t.id];
    TypeRef r;
    if (n.kind == NodeKind::Var) {
      auto m = leaf(TypeVarId{n.payload});
      r = m ? *m : t;
      done.emplace(t.id, r);
      return r;
    }
    on_stack.insert(t.id);
    switch (n.kind) {
      case NodeKind::Union: {
        TypeRef a = self(self, n.lhs);
        TypeRef b = self(self, n.rhs);
        r = union_of(a, b);
        break;
      }
      case NodeKind::Pair: {
        TypeRef a = self(self, n.lhs);
        TypeRef b = self(self, n.rhs);
        r = mk_pair(a, b);
        break;
      }
      case NodeKind::Arrow: {
        TypeRef a = self(self, n.lhs);
        TypeRef b = self(self, n.rhs);
        r = mk_arrow(a, b);
        break;
      }
      case NodeKind::Neg: r = neg_of(self(self, n.lhs)); break;
      default: r = t; break;
    }
    on_stack.erase(t.id);
    auto p = placeholder.find(t.id);
    if (p != placeholder.end()) r = close_cycle(p->second, r);
    done.emplace(t.id, r);
    return r;
  };
  return go(go, root);
}

// ---------------------------------------------------------------------------
// Free functions

TypeRef ty_of_const(TypeStore& store, const Const& c) {
  if (c.is_int()) return store.mk_singleton(c.as_int());
  return store.mk_float();
}

TypeRef ty_of_guardty(TypeStore& store, GuardType g) {
  switch (g) {
    case GuardType::IsInt: return store.mk_int();
    case GuardType::IsFloat: return store.mk_float();
    case GuardType::IsPair: return store.mk_pair(store.top(), store.top());
    case GuardType::IsFun: return store.mk_arrow(store.bottom(), store.top());
  }
  return store.bottom();
}

TypeRef apply_subst(TypeStore& store, TypeRef t, const TypeSubstitution& subst) {
  if (subst.empty()) return t;
  std::set<TypeVarId> dom;
  for (const auto& [v, _] : subst) dom.insert(v);
  return store.rebuild(t, dom, [&](TypeVarId v) -> std::optional<TypeRef> {
    auto it = subst.find(v);
    if (it == subst.end()) return std::nullopt;
    return it->second;
  });
}

std::set<TypeVarId> free_ty_vars(TypeStore& store, const TypeScheme& s) {
  std::set<TypeVarId> fv = store.free_ty_vars(s.body);
  for (auto v : s.quantified) fv.erase(v);
  return fv;
}

TypeScheme make_scheme(TypeStore& store, std::vector<TypeVarId> quantified,
                       TypeRef body) {
  const auto& fv = store.free_ty_vars(body);
  std::sort(quantified.begin(), quantified.end());
  quantified.erase(std::unique(quantified.begin(), quantified.end()), quantified.end());
  std::vector<TypeVarId> kept;
  for (auto v : quantified)
    if (fv.count(v)) kept.push_back(v);
  return TypeScheme{std::move(kept), body};
}

TypeScheme generalize(TypeStore& store, const TypeScheme& s) {
  if (!s.quantified.empty()) return s;
  return generalize(store, s.body);
}

TypeScheme generalize(TypeStore& store, TypeRef t) {
  const auto& fv = store.free_ty_vars(t);
  return TypeScheme{std::vector<TypeVarId>(fv.begin(), fv.end()), t};
}

TypeRef instantiate(TypeStore& store, const TypeScheme& s,
                    std::vector<TypeVarId>* fresh_out) {
  if (s.quantified.empty()) return s.body;
  TypeSubstitution sub;
  for (auto v : s.quantified) {
    TypeVarId f = store.fresh_var();
    if (fresh_out) fresh_out->push_back(f);
    sub.emplace(v, store.mk_var(f));
  }
  return apply_subst(store, s.body, sub);
}

TypeSubstitution compose(TypeStore& store, const TypeSubstitution& second,
                         const TypeSubstitution& first) {
  TypeSubstitution r;
  for (const auto& [v, t] : first) r.emplace(v, apply_subst(store, t, second));
  for (const auto& [v, t] : second)
    if (!first.count(v)) r.emplace(v, t);
  return r;
}

TypeRef clean_type(TypeStore& store, TypeRef t, const std::set<TypeVarId>& keep) {
  std::map<TypeVarId, int> polarity;  // bit 1: positive, bit 2: negative
  std::set<std::pair<std::uint32_t, bool>> seen;
  std::vector<std::pair<TypeRef, bool>> todo{{t, true}};
  while (!todo.empty()) {
    auto [u, pos] = todo.back();
    todo.pop_back();
    if (!seen.insert({u.id, pos}).second) continue;
    const TypeNode& n = store.node(u);
    switch (n.kind) {
      case NodeKind::Var: polarity[TypeVarId{n.payload}] |= pos ? 1 : 2; break;
      case NodeKind::Union:
      case NodeKind::Pair:
        todo.emplace_back(n.lhs, pos);
        todo.emplace_back(n.rhs, pos);
        break;
      case NodeKind::Arrow:
        todo.emplace_back(n.lhs, !pos);
        todo.emplace_back(n.rhs, pos);
        break;
      case NodeKind::Neg: todo.emplace_back(n.lhs, !pos); break;
      default: break;
    }
  }
  TypeSubstitution sub;
  for (auto [v, p] : polarity) {
    if (keep.count(v)) continue;
    if (p == 1) sub.emplace(v, store.bottom());
    if (p == 2) sub.emplace(v, store.top());
  }
  return apply_subst(store, t, sub);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

enum Prec { kLow = 0, kUnion = 1, kInter = 2, kNeg = 3, kAtom = 4 };

class Printer {
 public:
  Printer(const TypeStore& s, bool rename) : s_(s), rename_(rename) {}

  std::string print(TypeRef t) {
    // First pass discovers which cycle roots are re-entered.
    dry_ = true;
    std::ostringstream sink;
    emit(sink, t, kLow);
    dry_ = false;
    stack_.clear();
    names_.clear();
    var_names_.clear();
    std::ostringstream out;
    emit(out, t, kLow);
    return out.str();
  }

  std::string var(TypeVarId v) {
    if (rename_) {
      auto it = var_names_.find(v.index);
      if (it != var_names_.end()) return it->second;
      std::size_t k = var_names_.size();
      std::string name = "'";
      if (k < 26) {
        name += static_cast<char>('a' + k);
      } else {
        name += "t" + std::to_string(k);
      }
      var_names_.emplace(v.index, name);
      return name;
    }
    return var_to_string(s_, v);
  }

 private:
  // Operands of a chain of unions, not crossing cycle roots.
  void union_operands(TypeRef t, std::vector<TypeRef>& out) const {
    const TypeNode& n = s_.node(t);
    if (n.kind == NodeKind::Union && !s_.is_rec_root(t) && t != s_.top()) {
      union_operands(n.lhs, out);
      union_operands(n.rhs, out);
    } else {
      out.push_back(t);
    }
  }

  // Neg(a1 | ... | an) with some negated ai reads as an intersection.
  bool inter_parts(TypeRef t, std::vector<TypeRef>& parts) const {
    const TypeNode& n = s_.node(t);
    if (n.kind != NodeKind::Neg || t == s_.bottom() || s_.is_rec_root(n.lhs)) return false;
    if (s_.node(n.lhs).kind != NodeKind::Union) return false;
    union_operands(n.lhs, parts);
    for (auto p : parts)
      if (s_.node(p).kind == NodeKind::Neg && p != s_.bottom()) return true;
    parts.clear();
    return false;
  }

  void emit(std::ostream& o, TypeRef t, int prec) {
    if (t == s_.top()) {
      o << "Any";
      return;
    }
    if (t == s_.bottom()) {
      o << "Empty";
      return;
    }
    if (s_.is_rec_root(t)) {
      auto it = std::find(stack_.begin(), stack_.end(), t.id);
      if (it != stack_.end()) {
        if (dry_) {
          referenced_.insert(t.id);
          o << "X";
        } else {
          o << names_.at(t.id);
        }
        return;
      }
      if (referenced_.count(t.id)) {
        std::string name;
        if (!dry_) {
          name = "X" + std::to_string(names_.size() + 1);
          names_[t.id] = name;
        }
        bool paren = prec > kLow;
        if (paren) o << "(";
        o << "rec " << name << ". ";
        stack_.push_back(t.id);
        emit_node(o, t, kLow);
        stack_.pop_back();
        if (paren) o << ")";
        if (!dry_) names_.erase(t.id);
        return;
      }
      stack_.push_back(t.id);
      emit_node(o, t, prec);
      stack_.pop_back();
      return;
    }
    emit_node(o, t, prec);
  }

  void emit_node(std::ostream& o, TypeRef t, int prec) {
    const TypeNode& n = s_.node(t);
    switch (n.kind) {
      case NodeKind::Int: o << "Int"; return;
      case NodeKind::Float: o << "Float"; return;
      case NodeKind::Singleton: o << s_.singleton_value(t).str(); return;
      case NodeKind::Var: o << var(TypeVarId{n.payload}); return;
      case NodeKind::Placeholder: o << "?"; return;
      case NodeKind::Pair:
        o << "(";
        emit(o, n.lhs, kLow);
        o << ", ";
        emit(o, n.rhs, kLow);
        o << ")";
        return;
      case NodeKind::Arrow: {
        bool paren = prec > kLow;
        if (paren) o << "(";
        emit(o, n.lhs, kAtom);
        o << " -> ";
        emit(o, n.rhs, kLow);
        if (paren) o << ")";
        return;
      }
      case NodeKind::Union: {
        bool paren = prec > kUnion;
        if (paren) o << "(";
        emit(o, n.lhs, kUnion);
        o << " | ";
        emit(o, n.rhs, kInter);
        if (paren) o << ")";
        return;
      }
      case NodeKind::Neg: {
        std::vector<TypeRef> parts;
        if (inter_parts(t, parts)) {
          bool paren = prec > kInter;
          if (paren) o << "(";
          for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) o << " & ";
            const TypeNode& p = s_.node(parts[i]);
            if (p.kind == NodeKind::Neg && parts[i] != s_.bottom()) {
              emit(o, p.lhs, kNeg);
            } else {
              o << "!";
              emit(o, parts[i], kAtom);
            }
          }
          if (paren) o << ")";
          return;
        }
        bool paren = prec > kNeg;
        if (paren) o << "(";
        o << "!";
        emit(o, n.lhs, kAtom);
        if (paren) o << ")";
        return;
      }
    }
  }

  const TypeStore& s_;
  bool rename_;
  bool dry_ = false;
  std::vector<std::uint32_t> stack_;
  std::unordered_set<std::uint32_t> referenced_;
  std::unordered_map<std::uint32_t, std::string> names_;
  std::unordered_map<std::uint32_t, std::string> var_names_;
};

}  // namespace

std::string var_to_string(const TypeStore& store, TypeVarId v) {
  const std::string& n = store.var_name(v);
  if (is_identifier(n)) return "'" + n;
  return "'t" + std::to_string(v.index);
}

std::string type_to_string(const TypeStore& store, TypeRef t, bool rename) {
  Printer p(store, rename);
  return p.print(t);
}

std::string scheme_to_string(const TypeStore& store, const TypeScheme& s) {
  if (s.quantified.empty()) return type_to_string(store, s.body);
  std::string r = "forall";
  for (auto v : s.quantified) r += " " + var_to_string(store, v);
  return r + ". " + type_to_string(store, s.body);
}

}  // namespace minerl
