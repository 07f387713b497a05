#pragma once

#include <memory>

#include "sclab/compilers.hpp"

namespace sclab {

// Residual of a one-step rule: either termination, a plain term, or a free
// term over a child reference. Keeping the one-layer free structure
// symbolic lets the diagram checkers compare residuals without building
// terms per store; collapse() materializes the plain term when needed.
struct Residual {
  enum class Kind : uint8_t { Done, Term, SeqWith, ObsWrap };

  Kind kind = Kind::Done;
  TermPtr a;  // Term: the whole term; SeqWith: the stepped left child; ObsWrap: the inner child
  TermPtr b;  // SeqWith: the pending right-hand term

  static Residual done() { return {}; }
  static Residual of_term(TermPtr t) { return {Kind::Term, std::move(t), nullptr}; }
  static Residual seq_with(TermPtr left, TermPtr right) {
    return {Kind::SeqWith, std::move(left), std::move(right)};
  }
  static Residual obs_wrap(TermPtr inner) { return {Kind::ObsWrap, std::move(inner), nullptr}; }

  bool is_done() const { return kind == Kind::Done; }
  TermPtr collapse() const;
  bool equal(const Residual& o) const;
};

// One-step behavior as a finite table over the store space: an element of
// the behavior functor applied to the set of terms.
struct TableEntry {
  Store after;
  Event event = Event::Silent;
  Residual next;
};

struct BehaviorTable {
  std::vector<TableEntry> entries;  // indexed by store-enumeration index

  bool equal(const BehaviorTable& o) const;
};

// Tabulates step() over every store.
BehaviorTable one_step(Lang lang, const TermPtr& p, const StoreSpace& space);

// A constructor whose child slots carry a term together with its one-step
// behavior table: an element of the syntax functor applied to (term,
// behavior) pairs, the domain of a GSOS law.
struct GsosNode {
  enum class Ctor : uint8_t { Skip, Assign, Seq, While, Obs, Sandbox };

  struct Child {
    TermPtr term;
    std::shared_ptr<const BehaviorTable> table;
  };

  Ctor ctor = Ctor::Skip;
  std::string var;           // Assign / Sandbox
  ExprPtr expr;              // Assign / Sandbox / While
  std::vector<Child> children;  // Seq: two, While/Obs: one, leaf ctors: none
};

// Views a term's outermost constructor as a GsosNode, with the immediate
// subterms paired with their real one-step tables.
GsosNode node_of(Lang lang, const TermPtr& p, const StoreSpace& space);

// The composite term the node denotes.
TermPtr node_term(const GsosNode& n);

// Applies the GSOS law clause of the node's constructor, reading only the
// children's tables (never their syntax). Agrees with one_step(node_term)
// after collapsing residuals.
BehaviorTable rho_apply(Lang lang, const GsosNode& n, const StoreSpace& space);

// The registered natural transformations between the two languages.
// Syntax maps send source constructors to target terms over the same
// children; behavior maps act on one-step tables entrywise; the context
// map sends the observer constructor to the trivial source layer.
enum class SyntaxMap : uint8_t { Embed, SandboxAssigns };    // s_embed | s_sandbox
enum class BehMap : uint8_t { Incl, Erase };                 // b_incl  | b_erase
enum class CtxMap : uint8_t { Identity };                    // t_id

std::string syntax_map_name(SyntaxMap m);
std::string beh_map_name(BehMap m);
std::string ctx_map_name(CtxMap m);
SyntaxMap syntax_map_from_name(const std::string& n);
BehMap beh_map_from_name(const std::string& n);
CtxMap ctx_map_from_name(const std::string& n);

GsosNode apply_syntax_map(SyntaxMap m, const GsosNode& source_node);
TableEntry apply_beh_map(BehMap m, TableEntry e);
BehaviorTable apply_beh_map(BehMap m, const BehaviorTable& t);
CompilerId compiler_of(SyntaxMap m);

// Map-of-distributive-laws square, checked over every enumerated source
// node: translating the behavior of a source step must agree with stepping
// the translated node in the target, entry by entry.
Verdict check_modl(SyntaxMap s, BehMap b, const Universe& u);

// Both composite tables of the square for a single node, for reporting.
struct ModlPaths {
  BehaviorTable upper;  // source law, then syntax/behavior translation
  BehaviorTable lower;  // translation first, then target law
};
ModlPaths modl_paths(SyntaxMap s, BehMap b, const GsosNode& source_node, const StoreSpace& space);

// Many-layers square: an observer layer around a source term. After the
// shared source evaluation stage, back-translating the layer and then
// translating the behavior must agree with translating the behavior,
// letting the observer act, and collapsing the layer.
Verdict check_mmodl(CtxMap t, BehMap b, const Universe& u);

struct MmodlPaths {
  BehaviorTable upper;
  BehaviorTable lower;
};
MmodlPaths mmodl_paths(CtxMap t, BehMap b, const TermPtr& source_term, const StoreSpace& space);

// Fuel-bounded unfolding of the one-step behavior: an approximation of an
// element of the final coalgebra, with Cut marking the fuel frontier.
struct CoalgElem;
using CoalgPtr = std::shared_ptr<const CoalgElem>;
struct CoalgElem {
  enum class Tag : uint8_t { Next, Terminated, Cut };
  struct Entry {
    Store after;
    Event event = Event::Silent;
    Tag tag = Tag::Terminated;
    CoalgPtr next;  // meaningful only for Tag::Next
  };
  std::vector<Entry> entries;  // indexed by store-enumeration index
};

CoalgPtr f_unfold(Lang lang, const TermPtr& p, const StoreSpace& space, uint32_t fuel);
bool coalg_equal(const CoalgPtr& a, const CoalgPtr& b);

// Applies the behavior map at every level of the unfolding; realizes the
// coinductively induced behavior translation.
CoalgPtr apply_beh_map_deep(BehMap m, const CoalgPtr& e);

// Bridges between unfoldings and traces: psi reads one trace per initial
// store off an element (Cut becomes Timeout); phi replays a finite trace
// as a store-oblivious element. phi rejects fuel-limited and zero-step
// traces.
Behavior psi(const CoalgPtr& e, const StoreSpace& space);
CoalgPtr phi(const Trace& t, const StoreSpace& space);

// Observer layers of a target context recorded around an untranslated
// source core.
struct LayeredTerm {
  uint32_t layers = 0;
  TermPtr core;
};
LayeredTerm cross_plug(const Ctx& target_ctx, const TermPtr& source_term);

// Unfolds the coalgebra the observer layers induce on layered terms: the
// core steps by the source law, the behavior map translates the event, and
// each layer acts by the target observer clause.
CoalgPtr unfold_layered(const LayeredTerm& m, const StoreSpace& space, uint32_t fuel, BehMap b);

// The three layered checks for the sandbox triple, over every enumerated
// (target context, source program) pair:
//   blue:   plugging the compiled program equals compiling inside the
//           layered term and collapsing, up to fuel-bounded unfolding;
//   purple: plugging into the back-translated context equals collapsing
//           the layered term through the context map;
//   bisim:  stepping the layered coalgebra and collapsing agrees with
//           collapsing first and stepping under the translated source law.
Verdict check_layered(const Universe& u, uint32_t fuel);

} // namespace sclab
