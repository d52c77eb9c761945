#include "minerl/tally.hpp"

#include <atomic>
#include <memory>
#include <unordered_map>

#include "minerl/subty.hpp"

namespace minerl {

bool solves(TypeStore& store, const TypeSubstitution& theta, const SimpleConstraint& c) {
  switch (c.kind) {
    case SimpleConstraint::Kind::SubTy:
      return is_subtype(store, apply_subst(store, c.lhs, theta), apply_subst(store, c.rhs, theta));
    case SimpleConstraint::Kind::And:
      for (const auto& p : c.parts)
        if (!solves(store, theta, *p)) return false;
      return true;
    case SimpleConstraint::Kind::Or:
      for (const auto& p : c.parts)
        if (solves(store, theta, *p)) return true;
      return false;
  }
  return false;
}

namespace {

std::atomic<std::size_t> g_calls{0}, g_verified{0}, g_failures{0};

// A disjunction of bound sets; {} is unsatisfiable, {{}} is trivially true.
using NormSet = std::vector<BoundSet>;
using Memo = std::set<std::uint32_t>;

struct Cons {
  const SimpleConstraint* item;
  std::shared_ptr<const Cons> next;
};
using List = std::shared_ptr<const Cons>;

List push(const SimpleConstraint* c, List l) { return std::make_shared<const Cons>(Cons{c, std::move(l)}); }

class Solver {
 public:
  Solver(TypeStore& s, const TallyOptions& o, TallyReport& r, const SimpleConstraint& root)
      : s_(s), opt_(o), rep_(r), root_(root) {}

  SolutionSet run() {
    dfs(push(&root_, nullptr), {}, {}, 0);
    if (rep_.blame && blame_state_) rep_.blame_partial = solve(*blame_state_);
    return std::move(out_);
  }

 private:
  void tick() {
    if (++rep_.steps > opt_.budget) throw TallyTimeout("tally step budget exhausted");
  }

  bool flexible(TypeVarId v) const { return opt_.rigid.count(v) == 0; }

  bool ground(TypeRef t) {
    for (auto v : s_.free_ty_vars(t))
      if (flexible(v)) return false;
    return true;
  }

  TypeRef join(TypeRef a, TypeRef b) {
    if (is_subtype(s_, b, a)) return a;
    if (is_subtype(s_, a, b)) return b;
    return s_.union_of(a, b);
  }

  TypeRef meet_ty(TypeRef a, TypeRef b) {
    if (is_subtype(s_, a, b)) return a;
    if (is_subtype(s_, b, a)) return b;
    return s_.inter_of(a, b);
  }

  std::optional<BoundSet> meet(const BoundSet& a, const BoundSet& b) {
    BoundSet r = a;
    for (const auto& [v, bd] : b) {
      auto it = r.find(v);
      if (it == r.end()) {
        it = r.emplace(v, bd).first;
      } else {
        it->second.lo = join(it->second.lo, bd.lo);
        it->second.hi = meet_ty(it->second.hi, bd.hi);
      }
      const Bounds& x = it->second;
      if (ground(x.lo) && ground(x.hi) && !is_subtype(s_, x.lo, x.hi)) return std::nullopt;
    }
    return r;
  }

  // y implies x: every solution of y solves x.
  bool implies(const BoundSet& y, const BoundSet& x) {
    for (const auto& [v, bx] : x) {
      auto it = y.find(v);
      TypeRef lo = it == y.end() ? s_.bottom() : it->second.lo;
      TypeRef hi = it == y.end() ? s_.top() : it->second.hi;
      if (!is_subtype(s_, bx.lo, lo) || !is_subtype(s_, hi, bx.hi)) return false;
    }
    return true;
  }

  void add(NormSet& r, BoundSet b) {
    for (const auto& x : r)
      if (implies(b, x)) return;
    std::erase_if(r, [&](const BoundSet& x) { return implies(x, b); });
    r.push_back(std::move(b));
  }

  static bool trivial(const NormSet& n) {
    for (const auto& b : n)
      if (b.empty()) return true;
    return false;
  }

  NormSet unite(NormSet a, const NormSet& b) {
    if (trivial(a)) return a;
    for (const auto& x : b) add(a, x);
    return a;
  }

  NormSet meet_sets(const NormSet& a, const NormSet& b) {
    NormSet r;
    for (const auto& x : a)
      for (const auto& y : b)
        if (auto m = meet(x, y)) add(r, std::move(*m));
    return r;
  }

  // --- normalization: t is empty iff one of the bound sets holds.

  NormSet norm(TypeRef t) {
    tick();
    if (is_empty(s_, t)) return {BoundSet{}};
    std::uint32_t key = s_.dnf_key(t);
    if (auto c = cache_.find(key); c != cache_.end()) return c->second;
    if (auto ip = in_progress_.find(key); ip != in_progress_.end()) {
      lowest_ = std::min(lowest_, ip->second);
      return {BoundSet{}};
    }
    std::size_t mine = depth_++;
    in_progress_.emplace(key, mine);
    std::size_t saved = lowest_;
    lowest_ = SIZE_MAX;

    Dnf lines = s_.dnf(t);
    NormSet r{BoundSet{}};
    for (const auto& l : lines) {
      r = meet_sets(r, norm_line(l));
      if (r.empty()) break;
    }

    --depth_;
    in_progress_.erase(key);
    if (lowest_ >= mine) cache_[key] = r;
    lowest_ = std::min(saved, lowest_ < mine ? lowest_ : SIZE_MAX);
    return r;
  }

  NormSet norm_line(const DnfLine& l) {
    if (is_empty(s_, s_.from_line(l))) return {BoundSet{}};
    // The smallest flexible variable at top level takes the rest of the line
    // as a bound.
    std::optional<TypeRef> pick;
    bool pick_pos = false;
    auto consider = [&](TypeRef a, bool pos) {
      if (s_.node(a).kind != NodeKind::Var || !flexible(s_.var_of(a))) return;
      if (!pick || s_.var_of(a) < s_.var_of(*pick)) {
        pick = a;
        pick_pos = pos;
      }
    };
    for (auto a : l.pos) consider(a, true);
    for (auto a : l.neg) consider(a, false);
    if (pick) {
      DnfLine rest = l;
      auto& side = pick_pos ? rest.pos : rest.neg;
      side.erase(std::find(side.begin(), side.end(), *pick));
      TypeRef r = s_.from_line(rest);
      TypeVarId v = s_.var_of(*pick);
      if (pick_pos) return {BoundSet{{v, Bounds{s_.bottom(), s_.neg_of(r)}}}};
      return {BoundSet{{v, Bounds{r, s_.top()}}}};
    }

    std::vector<TypeRef> pb, pp, pa, nb, np, na;
    for (auto a : l.pos) {
      NodeKind k = s_.node(a).kind;
      if (k == NodeKind::Pair) pp.push_back(a);
      else if (k == NodeKind::Arrow) pa.push_back(a);
      else if (k != NodeKind::Var) pb.push_back(a);
    }
    for (auto a : l.neg) {
      NodeKind k = s_.node(a).kind;
      if (k == NodeKind::Pair) np.push_back(a);
      else if (k == NodeKind::Arrow) na.push_back(a);
      else if (k != NodeKind::Var) nb.push_back(a);
    }
    if (!pb.empty()) return {};
    if (!pp.empty() && !pa.empty()) return {BoundSet{}};
    if (!pp.empty()) {
      TypeRef t1 = s_.top(), t2 = s_.top();
      for (auto a : pp) {
        t1 = s_.inter_of(t1, s_.node(a).lhs);
        t2 = s_.inter_of(t2, s_.node(a).rhs);
      }
      return norm_pair(t1, t2, np, 0);
    }
    if (!pa.empty()) {
      NormSet r;
      for (auto n : na) {
        TypeRef dom = s_.node(n).lhs, cod = s_.node(n).rhs;
        r = unite(std::move(r), norm_arrow(dom, s_.neg_of(cod), pa, 0, false));
        if (trivial(r)) break;
      }
      return r;
    }
    // Only negated constructors: the base, pair and function parts of Any
    // must all be covered.
    BaseSet b;
    for (auto a : nb) {
      BaseSet x;
      switch (s_.node(a).kind) {
        case NodeKind::Int: x.floats = false; break;
        case NodeKind::Float: x.cofinite = false; break;
        default:
          x.cofinite = false;
          x.floats = false;
          x.ints.insert(s_.singleton_value(a));
      }
      b.subtract(x);
    }
    if (!b.empty()) return {};
    NormSet pr = norm_pair(s_.top(), s_.top(), np, 0);
    if (pr.empty()) return {};
    NormSet ar;
    for (auto n : na) {
      ar = unite(std::move(ar), norm(s_.node(n).lhs));
      if (trivial(ar)) break;
    }
    return meet_sets(pr, ar);
  }

  NormSet norm_pair(TypeRef t1, TypeRef t2, const std::vector<TypeRef>& negs, std::size_t i) {
    NormSet r = norm(t1);
    if (trivial(r)) return r;
    r = unite(std::move(r), norm(t2));
    if (trivial(r) || i == negs.size()) return r;
    TypeRef s1 = s_.node(negs[i]).lhs, s2 = s_.node(negs[i]).rhs;
    NormSet a = norm_pair(s_.diff_of(t1, s1), t2, negs, i + 1);
    if (a.empty()) return r;
    NormSet b = norm_pair(t1, s_.diff_of(t2, s2), negs, i + 1);
    return unite(std::move(r), meet_sets(a, b));
  }

  NormSet norm_arrow(TypeRef t1, TypeRef t2, const std::vector<TypeRef>& pos, std::size_t i,
                     bool took) {
    NormSet r = norm(t1);
    if (trivial(r)) return r;
    if (took) r = unite(std::move(r), norm(t2));
    if (trivial(r) || i == pos.size()) return r;
    TypeRef dom = s_.node(pos[i]).lhs, cod = s_.node(pos[i]).rhs;
    NormSet a = norm_arrow(s_.diff_of(t1, dom), t2, pos, i + 1, took);
    if (a.empty()) return r;
    NormSet b = norm_arrow(t1, s_.inter_of(t2, cod), pos, i + 1, true);
    return unite(std::move(r), meet_sets(a, b));
  }

  // --- saturation: lo <= hi must hold for every variable.

  // Only variables in `dirty` changed since the last saturated state.
  std::vector<std::pair<BoundSet, Memo>> saturate(BoundSet start, Memo memo, std::vector<TypeVarId> dirty) {
    struct Item {
      BoundSet bs;
      Memo seen;
      std::vector<TypeVarId> dirty;
    };
    std::vector<std::pair<BoundSet, Memo>> done;
    std::vector<Item> work;
    work.push_back({std::move(start), std::move(memo), std::move(dirty)});
    while (!work.empty()) {
      Item it = std::move(work.back());
      work.pop_back();
      bool settled = true;
      while (!it.dirty.empty()) {
        TypeVarId v = it.dirty.back();
        it.dirty.pop_back();
        const Bounds& b = it.bs.at(v);
        TypeRef d = s_.diff_of(b.lo, b.hi);
        if (!it.seen.insert(s_.dnf_key(d)).second) continue;
        tick();
        NormSet n = norm(d);
        // Trivial results leave the bounds unchanged.
        if (trivial(n)) continue;
        for (const auto& x : n)
          if (auto m = meet(it.bs, x)) {
            std::vector<TypeVarId> next = it.dirty;
            for (const auto& [w, _] : x) next.push_back(w);
            work.push_back({std::move(*m), it.seen, std::move(next)});
          }
        settled = false;
        break;
      }
      if (settled) done.emplace_back(std::move(it.bs), std::move(it.seen));
    }
    return done;
  }

  // --- solving: alpha = (lo | beta) & hi for a fresh beta, then
  // eliminate variables in order, closing self references by recursion.

  TypeSubstitution solve(const BoundSet& bs) {
    TypeSubstitution sigma;
    for (const auto& [v, b] : bs) {
      TypeRef beta = s_.mk_var(s_.fresh_var());
      TypeRef e = s_.inter_of(s_.union_of(b.lo, beta), b.hi);
      e = apply_subst(s_, e, sigma);
      if (s_.free_ty_vars(e).count(v)) {
        TypeRef body = e;
        e = s_.mk_rec([&](TypeRef x) {
          return s_.rebuild(body, {v}, [&](TypeVarId w) -> std::optional<TypeRef> {
            if (w == v) return x;
            return std::nullopt;
          });
        });
      }
      TypeSubstitution one{{v, e}};
      for (auto& [w, t] : sigma)
        if (s_.free_ty_vars(t).count(v)) t = apply_subst(s_, t, one);
      sigma[v] = e;
    }
    return sigma;
  }

  // --- search over the disjunctive normal form.

  void fail(const SimpleConstraint* c, const BoundSet& bs, std::size_t progress) {
    if (rep_.blame_constraint && progress <= best_progress_) return;
    best_progress_ = progress;
    rep_.blame = c->origin;
    rep_.blame_constraint = c;
    blame_state_ = bs;
  }

  void emit(const BoundSet& bs) {
    TypeSubstitution theta = solve(bs);
    if (opt_.verify) {
      ++rep_.verified;
      ++g_verified;
      if (!solves(s_, theta, root_)) {
        ++rep_.verify_failures;
        ++g_failures;
        return;
      }
    }
    out_.push_back(std::move(theta));
  }

  void dfs(List pending, BoundSet bs, Memo memo, std::size_t progress) {
    for (;;) {
      if (out_.size() >= opt_.max_solutions) {
        rep_.truncated = true;
        return;
      }
      if (!pending) {
        emit(bs);
        return;
      }
      const SimpleConstraint* c = pending->item;
      pending = pending->next;
      switch (c->kind) {
        case SimpleConstraint::Kind::And:
          for (auto it = c->parts.rbegin(); it != c->parts.rend(); ++it) pending = push(it->get(), pending);
          continue;
        case SimpleConstraint::Kind::Or:
          for (const auto& alt : c->parts) dfs(push(alt.get(), pending), bs, memo, progress);
          return;
        case SimpleConstraint::Kind::SubTy: {
          tick();
          NormSet n = norm(s_.diff_of(c->lhs, c->rhs));
          std::vector<std::pair<BoundSet, Memo>> next;
          for (const auto& x : n)
            if (auto m = meet(bs, x)) {
              std::vector<TypeVarId> dirty;
              for (const auto& [w, _] : x) dirty.push_back(w);
              for (auto& st : saturate(std::move(*m), memo, std::move(dirty))) next.push_back(std::move(st));
            }
          if (next.empty()) {
            fail(c, bs, progress);
            return;
          }
          ++progress;
          if (next.size() == 1) {
            bs = std::move(next[0].first);
            memo = std::move(next[0].second);
            continue;
          }
          for (auto& st : next) dfs(pending, std::move(st.first), std::move(st.second), progress);
          return;
        }
      }
    }
  }

  TypeStore& s_;
  const TallyOptions& opt_;
  TallyReport& rep_;
  const SimpleConstraint& root_;
  SolutionSet out_;
  std::unordered_map<std::uint32_t, NormSet> cache_;
  std::unordered_map<std::uint32_t, std::size_t> in_progress_;
  std::size_t depth_ = 0;
  std::size_t lowest_ = SIZE_MAX;
  std::size_t best_progress_ = 0;
  std::optional<BoundSet> blame_state_;
};

bool has_or(const SimpleConstraint& c) {
  if (c.kind == SimpleConstraint::Kind::Or) return true;
  for (const auto& p : c.parts)
    if (has_or(*p)) return true;
  return false;
}

}  // namespace

namespace {

void flatten_and(const SimplePtr& c, std::vector<SimplePtr>& out) {
  if (c->kind == SimpleConstraint::Kind::And) {
    for (const auto& p : c->parts) flatten_and(p, out);
  } else {
    out.push_back(c);
  }
}

void collect_vars(TypeStore& store, const SimpleConstraint& c, std::set<TypeVarId>& out) {
  if (c.kind == SimpleConstraint::Kind::SubTy) {
    for (auto v : store.free_ty_vars(c.lhs)) out.insert(v);
    for (auto v : store.free_ty_vars(c.rhs)) out.insert(v);
    return;
  }
  for (const auto& p : c.parts) collect_vars(store, *p, out);
}

// Top-level conjuncts grouped into classes that share no flexible variable.
std::vector<SimpleConstraint> components(TypeStore& store, const SimpleConstraint& c,
                                         const std::set<TypeVarId>& rigid) {
  std::vector<SimplePtr> parts;
  for (const auto& p : c.parts) flatten_and(p, parts);
  std::vector<std::size_t> parent(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::map<TypeVarId, std::size_t> owner;
  std::optional<std::size_t> ground;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::set<TypeVarId> vs;
    collect_vars(store, *parts[i], vs);
    bool any = false;
    for (auto v : vs) {
      if (rigid.count(v)) continue;
      any = true;
      auto [it, fresh] = owner.emplace(v, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
    if (!any) {
      if (ground) parent[find(i)] = find(*ground);
      else ground = i;
    }
  }
  std::map<std::size_t, std::size_t> index;  // root -> component, by first member
  std::vector<SimpleConstraint> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto [it, fresh] = index.emplace(find(i), out.size());
    if (fresh) out.emplace_back();
    out[it->second].parts.push_back(parts[i]);
  }
  return out;
}

SolutionSet tally_one(TypeStore& store, const SimpleConstraint& c, const TallyOptions& opt, TallyReport& rep) {
  Solver solver(store, opt, rep, c);
  return solver.run();
}

}  // namespace

SolutionSet tally(TypeStore& store, const SimpleConstraint& c, const TallyOptions& opt,
                  TallyReport* report) {
  TallyReport local;
  TallyReport& rep = report ? *report : local;
  ++g_calls;
  if (c.kind != SimpleConstraint::Kind::And) return tally_one(store, c, opt, rep);
  std::vector<SimpleConstraint> comps = components(store, c, opt.rigid);
  if (comps.size() <= 1) return tally_one(store, c, opt, rep);

  // Independent classes are solved apart; their solutions combine freely.
  std::vector<SolutionSet> sols;
  TallyOptions sub = opt;
  for (const auto& comp : comps) {
    TallyReport r;
    sub.budget = opt.budget - std::min(opt.budget, rep.steps);
    SolutionSet s;
    try {
      s = tally_one(store, comp, sub, r);
    } catch (const TallyTimeout&) {
      rep.steps = opt.budget + 1;
      throw;
    }
    rep.steps += r.steps;
    rep.truncated = rep.truncated || r.truncated;
    rep.verified += r.verified;
    rep.verify_failures += r.verify_failures;
    if (s.empty()) {
      rep.blame = r.blame;
      rep.blame_constraint = r.blame_constraint;
      rep.blame_partial = r.blame_partial;
      return {};
    }
    sols.push_back(std::move(s));
  }
  SolutionSet out;
  std::vector<std::size_t> pick(sols.size(), 0);
  for (;;) {
    if (out.size() >= opt.max_solutions) {
      rep.truncated = true;
      break;
    }
    TypeSubstitution theta;
    for (std::size_t k = 0; k < sols.size(); ++k)
      for (const auto& [v, t] : sols[k][pick[k]]) theta[v] = t;
    out.push_back(std::move(theta));
    std::size_t k = sols.size();
    while (k > 0 && ++pick[k - 1] == sols[k - 1].size()) pick[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

SolutionSet tally_base(TypeStore& store, const SimpleConstraint& c, const TallyOptions& opt,
                       TallyReport* report) {
  if (has_or(c)) throw std::invalid_argument("tally_base on a constraint with disjunctions");
  return tally(store, c, opt, report);
}

TallyGateCounters tally_gate_counters() { return {g_calls.load(), g_verified.load(), g_failures.load()}; }

}  // namespace minerl
