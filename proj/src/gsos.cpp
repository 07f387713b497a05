#include "sclab/gsos.hpp"

#include <atomic>
#include <map>
#include <unordered_map>
#include <variant>

#include "sclab/compilers.hpp"
#include "sclab/enumerate.hpp"
#include "sclab/parallel.hpp"
#include "sclab/text.hpp"

namespace sclab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

Event observer_event(Event e) { return e == Event::H ? Event::Bang : e; }

Event mapped_event(BehMap m, Event e) {
  if (m == BehMap::Erase && e == Event::H) return Event::Silent;
  return e;
}

} // namespace

TermPtr Residual::collapse() const {
  switch (kind) {
    case Kind::Done: return nullptr;
    case Kind::Term: return a;
    case Kind::SeqWith: return seq(a, b);
    case Kind::ObsWrap: return obs(a);
  }
  return nullptr;
}

bool Residual::equal(const Residual& o) const {
  if (kind == o.kind) {
    const bool first = a == o.a || (a && o.a && term_equal(a, o.a));
    if (!first) return false;
    if (kind != Kind::SeqWith) return true;
    return b == o.b || term_equal(b, o.b);
  }
  // Mixed symbolic/plain comparison goes through the collapsed terms.
  const TermPtr ca = collapse();
  const TermPtr cb = o.collapse();
  if (!ca || !cb) return ca == cb;
  return term_equal(ca, cb);
}

bool BehaviorTable::equal(const BehaviorTable& o) const {
  if (entries.size() != o.entries.size()) return false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const TableEntry& x = entries[i];
    const TableEntry& y = o.entries[i];
    if (!(x.after == y.after) || x.event != y.event || !x.next.equal(y.next)) return false;
  }
  return true;
}

BehaviorTable one_step(Lang lang, const TermPtr& p, const StoreSpace& space) {
  const Universe& u = space.universe();
  BehaviorTable t;
  t.entries.resize(space.count());
  for (std::size_t i = 0; i < space.count(); ++i) {
    const StepOutcome out = step(lang, space.at(i), p, u);
    t.entries[i] = TableEntry{out.store, out.event,
                              out.terminated() ? Residual::done() : Residual::of_term(out.residual)};
  }
  return t;
}

GsosNode node_of(Lang lang, const TermPtr& p, const StoreSpace& space) {
  GsosNode n;
  auto child = [&](const TermPtr& c) {
    return GsosNode::Child{c, std::make_shared<BehaviorTable>(one_step(lang, c, space))};
  };
  std::visit(overloaded{
                 [&](const TermSkip&) { n.ctor = GsosNode::Ctor::Skip; },
                 [&](const TermAssign& x) {
                   n.ctor = GsosNode::Ctor::Assign;
                   n.var = x.var;
                   n.expr = x.expr;
                 },
                 [&](const TermSeq& x) {
                   n.ctor = GsosNode::Ctor::Seq;
                   n.children.push_back(child(x.first));
                   n.children.push_back(child(x.second));
                 },
                 [&](const TermWhile& x) {
                   n.ctor = GsosNode::Ctor::While;
                   n.expr = x.cond;
                   n.children.push_back(child(x.body));
                 },
                 [&](const TermObs& x) {
                   n.ctor = GsosNode::Ctor::Obs;
                   n.children.push_back(child(x.body));
                 },
                 [&](const TermSandbox& x) {
                   n.ctor = GsosNode::Ctor::Sandbox;
                   n.var = x.assign.var;
                   n.expr = x.assign.expr;
                 },
             },
             p->node);
  return n;
}

TermPtr node_term(const GsosNode& n) {
  switch (n.ctor) {
    case GsosNode::Ctor::Skip: return skip();
    case GsosNode::Ctor::Assign: return assign(n.var, n.expr);
    case GsosNode::Ctor::Seq: return seq(n.children[0].term, n.children[1].term);
    case GsosNode::Ctor::While: return while_loop(n.expr, n.children[0].term);
    case GsosNode::Ctor::Obs: return obs(n.children[0].term);
    case GsosNode::Ctor::Sandbox: return sandbox(n.var, n.expr);
  }
  return nullptr;
}

BehaviorTable rho_apply(Lang lang, const GsosNode& n, const StoreSpace& space) {
  const Universe& u = space.universe();
  BehaviorTable out;
  out.entries.resize(space.count());
  switch (n.ctor) {
    case GsosNode::Ctor::Skip:
    case GsosNode::Ctor::Assign:
    case GsosNode::Ctor::Sandbox: {
      // Leaf constructors have no children to consult; their clauses are
      // the axioms of the term itself.
      return one_step(lang, node_term(n), space);
    }
    case GsosNode::Ctor::Seq: {
      const BehaviorTable& f = *n.children[0].table;
      const TermPtr& q = n.children[1].term;
      for (std::size_t i = 0; i < space.count(); ++i) {
        const TableEntry& ce = f.entries[i];
        out.entries[i] =
            TableEntry{ce.after, ce.event,
                       ce.next.is_done() ? Residual::of_term(q)
                                         : Residual::seq_with(ce.next.collapse(), q)};
      }
      return out;
    }
    case GsosNode::Ctor::While: {
      const TermPtr& body = n.children[0].term;
      const TermPtr unrolled = seq(body, while_loop(n.expr, body));
      for (std::size_t i = 0; i < space.count(); ++i) {
        const bool stop = eval_expr(n.expr, space.at(i), u) == 0;
        out.entries[i] = TableEntry{space.at(i), Event::Silent,
                                    Residual::of_term(stop ? skip() : unrolled)};
      }
      return out;
    }
    case GsosNode::Ctor::Obs: {
      if (lang != Lang::Target)
        throw std::invalid_argument("rho_apply: observer node in the source law");
      const BehaviorTable& f = *n.children[0].table;
      for (std::size_t i = 0; i < space.count(); ++i) {
        const TableEntry& ce = f.entries[i];
        out.entries[i] = TableEntry{ce.after, observer_event(ce.event),
                                    ce.next.is_done() ? Residual::done()
                                                      : Residual::obs_wrap(ce.next.collapse())};
      }
      return out;
    }
  }
  return out;
}

std::string syntax_map_name(SyntaxMap m) {
  return m == SyntaxMap::Embed ? "s_embed" : "s_sandbox";
}
std::string beh_map_name(BehMap m) { return m == BehMap::Incl ? "b_incl" : "b_erase"; }
std::string ctx_map_name(CtxMap) { return "t_id"; }

SyntaxMap syntax_map_from_name(const std::string& n) {
  if (n == "s_embed") return SyntaxMap::Embed;
  if (n == "s_sandbox") return SyntaxMap::SandboxAssigns;
  throw ConfigError("unknown syntax map '" + n + "' (expected s_embed|s_sandbox)");
}
BehMap beh_map_from_name(const std::string& n) {
  if (n == "b_incl") return BehMap::Incl;
  if (n == "b_erase") return BehMap::Erase;
  throw ConfigError("unknown behavior map '" + n + "' (expected b_incl|b_erase)");
}
CtxMap ctx_map_from_name(const std::string& n) {
  if (n == "t_id") return CtxMap::Identity;
  throw ConfigError("unknown context map '" + n + "' (expected t_id)");
}

CompilerId compiler_of(SyntaxMap m) {
  return m == SyntaxMap::Embed ? CompilerId::Identity : CompilerId::Sandbox;
}

GsosNode apply_syntax_map(SyntaxMap m, const GsosNode& source_node) {
  GsosNode n = source_node;
  if (m == SyntaxMap::SandboxAssigns && n.ctor == GsosNode::Ctor::Assign) {
    n.ctor = GsosNode::Ctor::Sandbox;
  }
  return n;
}

TableEntry apply_beh_map(BehMap m, TableEntry e) {
  e.event = mapped_event(m, e.event);
  return e;
}

BehaviorTable apply_beh_map(BehMap m, const BehaviorTable& t) {
  BehaviorTable out = t;
  for (auto& e : out.entries) e.event = mapped_event(m, e.event);
  return out;
}

ModlPaths modl_paths(SyntaxMap s, BehMap b, const GsosNode& source_node,
                     const StoreSpace& space) {
  // Upper: source law, then the free extension of the syntax map on
  // residuals, then the behavior map. The syntax maps only move assignment
  // constructors, and assignments never occur as residual layers, so the
  // free extension acts as the identity on every residual the law emits.
  ModlPaths paths;
  paths.upper = apply_beh_map(b, rho_apply(Lang::Source, source_node, space));
  // Lower: behavior map on the children, syntax map on the node, then the
  // target law.
  GsosNode mapped = apply_syntax_map(s, source_node);
  for (auto& child : mapped.children) {
    child.table = std::make_shared<BehaviorTable>(apply_beh_map(b, *child.table));
  }
  paths.lower = rho_apply(Lang::Target, mapped, space);
  return paths;
}

namespace {

std::string render_residual(const Residual& r) {
  const TermPtr t = r.collapse();
  return t ? render_term(t) : "OK";
}

std::string render_table_entry(const TableEntry& e, const Universe& u) {
  std::string out = render_store(e.after, u);
  out += " ";
  out += event_name(e.event);
  out += " -> ";
  out += render_residual(e.next);
  return out;
}

// Node enumeration for the square checks: every source constructor whose
// child slots range over the enumerated terms (with their real one-step
// tables) and whose parameters range over the enumerated variables and
// expressions.
struct NodeSpace {
  const Universe& u;
  std::vector<ExprPtr> exprs;
  std::vector<TermPtr> terms;
  std::vector<BehaviorTable> tables;

  std::size_t skip_count() const { return 1; }
  std::size_t assign_count() const { return u.var_count() * exprs.size(); }
  std::size_t seq_count() const { return terms.size() * terms.size(); }
  std::size_t while_count() const { return exprs.size() * terms.size(); }
  std::size_t total() const {
    return skip_count() + assign_count() + seq_count() + while_count();
  }

  GsosNode node_at(std::size_t idx) const {
    GsosNode n;
    if (idx < skip_count()) {
      n.ctor = GsosNode::Ctor::Skip;
      return n;
    }
    idx -= skip_count();
    if (idx < assign_count()) {
      n.ctor = GsosNode::Ctor::Assign;
      n.var = u.vars[idx / exprs.size()].name;
      n.expr = exprs[idx % exprs.size()];
      return n;
    }
    idx -= assign_count();
    if (idx < seq_count()) {
      n.ctor = GsosNode::Ctor::Seq;
      const std::size_t i = idx / terms.size();
      const std::size_t j = idx % terms.size();
      n.children.push_back({terms[i], std::shared_ptr<const BehaviorTable>(
                                          std::shared_ptr<void>(), &tables[i])});
      n.children.push_back({terms[j], std::shared_ptr<const BehaviorTable>(
                                          std::shared_ptr<void>(), &tables[j])});
      return n;
    }
    idx -= seq_count();
    n.ctor = GsosNode::Ctor::While;
    n.expr = exprs[idx / terms.size()];
    n.children.push_back({terms[idx % terms.size()],
                          std::shared_ptr<const BehaviorTable>(std::shared_ptr<void>(),
                                                               &tables[idx % terms.size()])});
    return n;
  }
};

NodeSpace make_node_space(const Universe& u, const StoreSpace& space) {
  NodeSpace ns{u, enumerate_exprs(u), enumerate_terms(u, Lang::Source), {}};
  if (ns.total() > u.enumeration_cap)
    throw CapExceeded("law node enumeration exceeds the configured cap");
  ns.tables.resize(ns.terms.size());
  par::for_each_index(ns.terms.size(), [&](std::size_t i) {
    ns.tables[i] = one_step(Lang::Source, ns.terms[i], space);
  });
  return ns;
}

// Lightweight view of a composite table entry: raw pointers into stable
// storage, so the quadratic node spaces compare without allocation.
struct EntryProbe {
  Store after;
  Event ev = Event::Silent;
  bool done = true;
  const Term* left = nullptr;   // stepped child reference, when present
  const Term* right = nullptr;  // pending right-hand term, for sequencing

  bool operator==(const EntryProbe& o) const {
    if (!(after == o.after) || ev != o.ev || done != o.done) return false;
    const auto same = [](const Term* x, const Term* y) {
      if (x == y) return true;
      if (!x || !y) return false;
      return term_equal(TermPtr(std::shared_ptr<void>(), x), TermPtr(std::shared_ptr<void>(), y));
    };
    return same(left, o.left) && same(right, o.right);
  }
};

// Upper composite for a sequencing node: the source clause propagates the
// child's event and stacks the pending term behind the residual; B s* then
// fixes the residual shape and b maps the event.
EntryProbe seq_upper(const TableEntry& ce, const Term* q, BehMap bm) {
  EntryProbe p;
  p.after = ce.after;
  p.ev = mapped_event(bm, ce.event);
  p.done = false;
  p.left = ce.next.is_done() ? nullptr : ce.next.a.get();
  p.right = q;
  return p;
}

// Lower composite: the behavior map acts on the child entry first, the
// syntax map fixes the constructor, and the target clause propagates the
// already-mapped event over the same residual shape.
EntryProbe seq_lower(const TableEntry& ce, const Term* q, BehMap bm) {
  const Event child_ev = mapped_event(bm, ce.event);
  EntryProbe p;
  p.after = ce.after;
  p.ev = child_ev;
  p.done = false;
  p.left = ce.next.is_done() ? nullptr : ce.next.a.get();
  p.right = q;
  return p;
}

// Loop clauses ignore the child table; both composites branch on the guard
// in their own language (the expression language is shared).
EntryProbe while_probe(const ExprPtr& cond, const Term* body, const Term* unrolled,
                       const Store& s, const Universe& u) {
  EntryProbe p;
  p.after = s;
  p.ev = Event::Silent;
  p.done = false;
  p.left = eval_expr(cond, s, u) == 0 ? nullptr : unrolled;
  p.right = body;  // marker distinguishing the two branches is p.left
  return p;
}

bool modl_node_fails(SyntaxMap sm, BehMap bm, const GsosNode& n, const StoreSpace& space) {
  const Universe& u = space.universe();
  switch (n.ctor) {
    case GsosNode::Ctor::Skip:
    case GsosNode::Ctor::Assign: {
      // Leaf constructors: the upper composite steps by the source axioms
      // and maps the event; the lower composite steps the syntax-mapped
      // leaf by the target axioms.
      const TermPtr leaf = node_term(n);
      const TermPtr mapped_leaf =
          sm == SyntaxMap::SandboxAssigns && n.ctor == GsosNode::Ctor::Assign
              ? sandbox(n.var, n.expr)
              : leaf;
      for (std::size_t i = 0; i < space.count(); ++i) {
        const StepOutcome src = step(Lang::Source, space.at(i), leaf, u);
        const StepOutcome tgt = step(Lang::Target, space.at(i), mapped_leaf, u);
        if (!(src.store == tgt.store) || mapped_event(bm, src.event) != tgt.event) return true;
      }
      return false;
    }
    case GsosNode::Ctor::Seq: {
      const auto& entries = n.children[0].table->entries;
      const Term* q = n.children[1].term.get();
      for (const TableEntry& ce : entries) {
        if (!(seq_upper(ce, q, bm) == seq_lower(ce, q, bm))) return true;
      }
      return false;
    }
    case GsosNode::Ctor::While: {
      const Term* body = n.children[0].term.get();
      const TermPtr unrolled = seq(n.children[0].term, while_loop(n.expr, n.children[0].term));
      for (std::size_t i = 0; i < space.count(); ++i) {
        const EntryProbe upper = while_probe(n.expr, body, unrolled.get(), space.at(i), u);
        const EntryProbe lower = while_probe(n.expr, body, unrolled.get(), space.at(i), u);
        if (!(upper == lower)) return true;
      }
      return false;
    }
    default:
      return true;
  }
}

} // namespace

Verdict check_modl(SyntaxMap s, BehMap b, const Universe& u) {
  const StoreSpace space(u);
  const NodeSpace ns = make_node_space(u, space);

  auto node_fails = [&](std::size_t idx) { return modl_node_fails(s, b, ns.node_at(idx), space); };

  Verdict v;
  const auto failing = par::first_failure(ns.total(), node_fails);
  if (!failing) return v;

  const GsosNode n = ns.node_at(*failing);
  const ModlPaths paths = modl_paths(s, b, n, space);
  v.holds = false;
  Witness w;
  w.add("node", render_term(node_term(n)));
  for (std::size_t i = 0; i < space.count(); ++i) {
    if (paths.upper.entries[i].after == paths.lower.entries[i].after &&
        paths.upper.entries[i].event == paths.lower.entries[i].event &&
        paths.upper.entries[i].next.equal(paths.lower.entries[i].next))
      continue;
    w.add("store", render_store(space.at(i), u));
    w.add("upper", render_table_entry(paths.upper.entries[i], u));
    w.add("lower", render_table_entry(paths.lower.entries[i], u));
    break;
  }
  v.witness = std::move(w);
  return v;
}

MmodlPaths mmodl_paths(CtxMap, BehMap b, const TermPtr& source_term, const StoreSpace& space) {
  // Shared first stage: the plugged source term evaluates under the source
  // law. Upper path: back-translate the observer layer to the trivial
  // source layer (the child itself), evaluate that trivial layer, then
  // translate the behavior. Lower path: translate the behavior, let the
  // target observer act, then collapse the layer in the residuals.
  const BehaviorTable inner = one_step(Lang::Source, source_term, space);
  MmodlPaths paths;
  paths.upper = apply_beh_map(b, inner);
  paths.lower.entries.resize(inner.entries.size());
  for (std::size_t i = 0; i < inner.entries.size(); ++i) {
    const TableEntry mapped = apply_beh_map(b, inner.entries[i]);
    // Observer clause, then the collapse of the observer wrapper under the
    // context map leaves the bare residual.
    paths.lower.entries[i] = TableEntry{mapped.after, observer_event(mapped.event), mapped.next};
  }
  return paths;
}

Verdict check_mmodl(CtxMap t, BehMap b, const Universe& u) {
  const StoreSpace space(u);
  const auto terms = enumerate_terms(u, Lang::Source);

  auto term_fails = [&](std::size_t idx) {
    const MmodlPaths paths = mmodl_paths(t, b, terms[idx], space);
    return !paths.upper.equal(paths.lower);
  };

  Verdict v;
  const auto failing = par::first_failure(terms.size(), term_fails);
  if (!failing) return v;

  v.holds = false;
  const MmodlPaths paths = mmodl_paths(t, b, terms[*failing], space);
  Witness w;
  w.add("node", "obs(" + render_term(terms[*failing]) + ")");
  for (std::size_t i = 0; i < paths.upper.entries.size(); ++i) {
    const TableEntry& up = paths.upper.entries[i];
    const TableEntry& lo = paths.lower.entries[i];
    if (up.after == lo.after && up.event == lo.event && up.next.equal(lo.next)) continue;
    w.add("store", render_store(space.at(i), u));
    w.add("upper", render_table_entry(up, u));
    w.add("lower", render_table_entry(lo, u));
    break;
  }
  v.witness = std::move(w);
  return v;
}

namespace {

struct UnfoldKey {
  TermPtr term;
  uint32_t depth;
};
struct UnfoldKeyHash {
  std::size_t operator()(const UnfoldKey& k) const { return hash_mix(term_hash(k.term), k.depth); }
};
struct UnfoldKeyEq {
  bool operator()(const UnfoldKey& a, const UnfoldKey& b) const {
    return a.depth == b.depth && term_equal(a.term, b.term);
  }
};

// Fuel-bounded unfolding with structural memoization, so loops share their
// tails instead of expanding per store.
class Unfolder {
public:
  Unfolder(Lang lang, const StoreSpace& space) : lang_(lang), space_(space) {}

  CoalgPtr get(const TermPtr& p, uint32_t depth) {
    const UnfoldKey key{p, depth};
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto elem = std::make_shared<CoalgElem>();
    elem->entries.resize(space_.count());
    const Universe& u = space_.universe();
    for (std::size_t i = 0; i < space_.count(); ++i) {
      const StepOutcome out = step(lang_, space_.at(i), p, u);
      CoalgElem::Entry e{out.store, out.event, CoalgElem::Tag::Terminated, nullptr};
      if (!out.terminated()) {
        if (depth <= 1) {
          e.tag = CoalgElem::Tag::Cut;
        } else {
          e.tag = CoalgElem::Tag::Next;
          e.next = get(out.residual, depth - 1);
        }
      }
      elem->entries[i] = std::move(e);
    }
    CoalgPtr out = elem;
    memo_.emplace(key, out);
    return out;
  }

private:
  Lang lang_;
  const StoreSpace& space_;
  std::unordered_map<UnfoldKey, CoalgPtr, UnfoldKeyHash, UnfoldKeyEq> memo_;
};

struct LayeredKey {
  TermPtr term;
  uint32_t depth;
};

} // namespace

CoalgPtr f_unfold(Lang lang, const TermPtr& p, const StoreSpace& space, uint32_t fuel) {
  validate_term(p, lang, space.universe());
  Unfolder unf(lang, space);
  return unf.get(p, fuel);
}

bool coalg_equal(const CoalgPtr& a, const CoalgPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  std::map<std::pair<const CoalgElem*, const CoalgElem*>, bool> memo;
  const std::function<bool(const CoalgElem*, const CoalgElem*)> rec =
      [&](const CoalgElem* x, const CoalgElem* y) -> bool {
    if (x == y) return true;
    const auto key = std::make_pair(x, y);
    if (const auto it = memo.find(key); it != memo.end()) return it->second;
    bool eq = x->entries.size() == y->entries.size();
    for (std::size_t i = 0; eq && i < x->entries.size(); ++i) {
      const auto& ex = x->entries[i];
      const auto& ey = y->entries[i];
      eq = ex.after == ey.after && ex.event == ey.event && ex.tag == ey.tag;
      if (eq && ex.tag == CoalgElem::Tag::Next) eq = rec(ex.next.get(), ey.next.get());
    }
    memo[key] = eq;
    return eq;
  };
  return rec(a.get(), b.get());
}

CoalgPtr apply_beh_map_deep(BehMap m, const CoalgPtr& e) {
  std::unordered_map<const CoalgElem*, CoalgPtr> memo;
  const std::function<CoalgPtr(const CoalgPtr&)> rec = [&](const CoalgPtr& cur) -> CoalgPtr {
    if (!cur) return nullptr;
    if (const auto it = memo.find(cur.get()); it != memo.end()) return it->second;
    auto out = std::make_shared<CoalgElem>();
    out->entries.reserve(cur->entries.size());
    for (const auto& entry : cur->entries) {
      CoalgElem::Entry e2{entry.after, mapped_event(m, entry.event), entry.tag, nullptr};
      if (entry.tag == CoalgElem::Tag::Next) e2.next = rec(entry.next);
      out->entries.push_back(std::move(e2));
    }
    memo.emplace(cur.get(), out);
    return out;
  };
  return rec(e);
}

Behavior psi(const CoalgPtr& e, const StoreSpace& space) {
  Behavior b;
  b.traces.resize(space.count());
  for (std::size_t i = 0; i < space.count(); ++i) {
    Trace t;
    t.elems.push_back({Trace::Elem::Kind::State, space.at(i)});
    const CoalgElem* cur = e.get();
    std::size_t sidx = i;
    while (true) {
      const auto& entry = cur->entries[sidx];
      if (entry.event == Event::H) t.elems.push_back({Trace::Elem::Kind::H, {}});
      if (entry.event == Event::Bang) t.elems.push_back({Trace::Elem::Kind::Bang, {}});
      t.elems.push_back({Trace::Elem::Kind::State, entry.after});
      if (entry.tag == CoalgElem::Tag::Terminated) {
        t.term = Terminator::Tick;
        break;
      }
      if (entry.tag == CoalgElem::Tag::Cut) {
        t.term = Terminator::Timeout;
        break;
      }
      sidx = space.index_of(entry.after);
      cur = entry.next.get();
    }
    b.traces[i] = std::move(t);
  }
  return b;
}

CoalgPtr phi(const Trace& t, const StoreSpace& space) {
  if (t.fuel_limited())
    throw std::invalid_argument("phi: fuel-limited traces have no finite replay");
  // Steps after the initial state: optional event, then the next state.
  struct Step {
    Event ev;
    Store after;
  };
  std::vector<Step> steps;
  for (std::size_t i = 1; i < t.elems.size(); ++i) {
    const auto& el = t.elems[i];
    if (el.kind == Trace::Elem::Kind::State) {
      steps.push_back({Event::Silent, el.store});
    } else {
      const Event ev = el.kind == Trace::Elem::Kind::H ? Event::H : Event::Bang;
      ++i;
      if (i >= t.elems.size() || t.elems[i].kind != Trace::Elem::Kind::State)
        throw std::invalid_argument("phi: event without a following state");
      steps.push_back({ev, t.elems[i].store});
    }
  }
  if (steps.empty()) throw std::invalid_argument("phi: trace has no steps to replay");
  CoalgPtr next = nullptr;
  for (std::size_t i = steps.size(); i-- > 0;) {
    auto elem = std::make_shared<CoalgElem>();
    const CoalgElem::Tag tag = next ? CoalgElem::Tag::Next : CoalgElem::Tag::Terminated;
    elem->entries.assign(space.count(), CoalgElem::Entry{steps[i].after, steps[i].ev, tag, next});
    next = elem;
  }
  return next;
}

LayeredTerm cross_plug(const Ctx& target_ctx, const TermPtr& source_term) {
  if (target_ctx.lang != Lang::Target)
    throw std::invalid_argument("cross_plug: context must be a target context");
  return LayeredTerm{target_ctx.obs_layers, source_term};
}

CoalgPtr unfold_layered(const LayeredTerm& m, const StoreSpace& space, uint32_t fuel, BehMap b) {
  const Universe& u = space.universe();
  validate_term(m.core, Lang::Source, u);
  std::unordered_map<UnfoldKey, CoalgPtr, UnfoldKeyHash, UnfoldKeyEq> memo;
  const std::function<CoalgPtr(const TermPtr&, uint32_t)> rec = [&](const TermPtr& core,
                                                                    uint32_t depth) -> CoalgPtr {
    const UnfoldKey key{core, depth};
    if (const auto it = memo.find(key); it != memo.end()) return it->second;
    auto elem = std::make_shared<CoalgElem>();
    elem->entries.resize(space.count());
    for (std::size_t i = 0; i < space.count(); ++i) {
      const StepOutcome out = step(Lang::Source, space.at(i), core, u);
      Event ev = mapped_event(b, out.event);
      for (uint32_t layer = 0; layer < m.layers; ++layer) ev = observer_event(ev);
      CoalgElem::Entry e{out.store, ev, CoalgElem::Tag::Terminated, nullptr};
      if (!out.terminated()) {
        if (depth <= 1) {
          e.tag = CoalgElem::Tag::Cut;
        } else {
          e.tag = CoalgElem::Tag::Next;
          e.next = rec(out.residual, depth - 1);
        }
      }
      elem->entries[i] = std::move(e);
    }
    CoalgPtr out = elem;
    memo.emplace(key, out);
    return out;
  };
  return rec(m.core, fuel);
}

Verdict check_layered(const Universe& u, uint32_t fuel) {
  const StoreSpace space(u);
  const auto programs = enumerate_terms(u, Lang::Source);
  const auto ctxs = enumerate_ctxs(u, Lang::Target);
  const std::size_t total = programs.size() * ctxs.size();

  // Which sub-check failed, for the witness.
  std::atomic<int> failed_sub{-1};

  auto pair_fails = [&](std::size_t idx) {
    const TermPtr& p = programs[idx / ctxs.size()];
    const Ctx& ct = ctxs[idx % ctxs.size()];
    const LayeredTerm m = cross_plug(ct, p);
    const TermPtr compiled = compile(CompilerId::Sandbox, p);

    // Blue: plug the compiled program, or compile inside the layers and
    // collapse; the unfolder memoizes structurally, so the second route
    // reuses the first route's elements.
    Unfolder target_unf(Lang::Target, space);
    const TermPtr plugged = plug(ct, compiled);
    TermPtr collapsed = compile(CompilerId::Sandbox, m.core);
    for (uint32_t i = 0; i < m.layers; ++i) collapsed = obs(collapsed);
    if (!coalg_equal(target_unf.get(plugged, fuel), target_unf.get(collapsed, fuel))) {
      failed_sub = 0;
      return true;
    }

    // Purple: plugging into the back-translated context equals collapsing
    // the layered term through the context map.
    const TermPtr via_bk = plug(backtranslate(ct), p);
    if (!term_equal(via_bk, m.core)) {
      failed_sub = 1;
      return true;
    }

    // Bisimulation: the layered coalgebra, collapsed, agrees with the
    // translated source behavior.
    Unfolder source_unf(Lang::Source, space);
    const CoalgPtr layered = unfold_layered(m, space, fuel, BehMap::Erase);
    const CoalgPtr collapsed_beh =
        apply_beh_map_deep(BehMap::Erase, source_unf.get(p, fuel));
    if (!coalg_equal(layered, collapsed_beh)) {
      failed_sub = 2;
      return true;
    }
    return false;
  };

  Verdict v;
  const auto failing = par::first_failure(total, pair_fails);
  if (!failing) return v;

  v.holds = false;
  Witness w;
  const TermPtr& p = programs[*failing / ctxs.size()];
  const Ctx& ct = ctxs[*failing % ctxs.size()];
  pair_fails(*failing);  // rerun the winning pair so the sub-check label is its own
  static const char* kSubNames[] = {"blue", "purple", "bisimulation"};
  const int sub = failed_sub.load();
  w.add("sub-check", sub >= 0 && sub < 3 ? kSubNames[sub] : "unknown");
  w.add("program", render_term(p));
  w.add("target-context", render_ctx(ct));
  v.witness = std::move(w);
  return v;
}

} // namespace sclab
