#include <doctest.h>

#include <random>

#include "sclab/enumerate.hpp"
#include "sclab/gsos.hpp"
#include "test_util.hpp"

using namespace sclab;
using namespace sclab::test;

namespace {

Universe big() {
  Universe u = tiny_universe();
  u.vmax = 63;
  u.literal_pool = {0, 1, 2, 42};
  return u;
}

} // namespace

TEST_CASE("one-step tables match the displayed elements") {
  const Universe u = big();
  const StoreSpace space(u);

  const BehaviorTable flagged = one_step(Lang::Source, src(u, "h := 42"), space);
  const BehaviorTable reported = one_step(Lang::Target, tgt(u, "obs(h := 42)"), space);
  const BehaviorTable idle = one_step(Lang::Source, src(u, "skip"), space);
  for (std::size_t i = 0; i < space.count(); ++i) {
    const Store& s = space.at(i);
    Store updated = s;
    updated.set(u.var_index("h"), 42);
    const bool changes = s.get(u.var_index("h")) != 42;

    CHECK(flagged.entries[i].after == updated);
    CHECK(flagged.entries[i].event == (changes ? Event::H : Event::Silent));
    CHECK(flagged.entries[i].next.is_done());

    CHECK(reported.entries[i].after == updated);
    CHECK(reported.entries[i].event == (changes ? Event::Bang : Event::Silent));
    CHECK(reported.entries[i].next.is_done());

    CHECK(idle.entries[i].after == s);
    CHECK(idle.entries[i].event == Event::Silent);
  }
}

TEST_CASE("law application reads only the children's tables") {
  const Universe u = big();
  const StoreSpace space(u);

  // Sequencing: a terminated left child hands over to the right term, a
  // stepping one stacks it behind the residual.
  const GsosNode done_node = node_of(Lang::Source, src(u, "l := 2 ; skip"), space);
  const BehaviorTable done_tbl = rho_apply(Lang::Source, done_node, space);
  for (std::size_t i = 0; i < space.count(); ++i) {
    CHECK(render_term(done_tbl.entries[i].next.collapse()) == "skip");
  }

  const GsosNode step_node = node_of(Lang::Source, src(u, "(skip ; skip) ; h := 1"), space);
  const BehaviorTable step_tbl = rho_apply(Lang::Source, step_node, space);
  for (std::size_t i = 0; i < space.count(); ++i) {
    CHECK(step_tbl.entries[i].next.kind == Residual::Kind::SeqWith);
    CHECK(render_term(step_tbl.entries[i].next.collapse()) == "skip ; h := 1");
  }

  // The observer clause rewrites the child's flag.
  const GsosNode obs_node = node_of(Lang::Target, tgt(u, "obs(h := 42)"), space);
  const BehaviorTable obs_tbl = rho_apply(Lang::Target, obs_node, space);
  for (std::size_t i = 0; i < space.count(); ++i) {
    const bool changes = space.at(i).get(u.var_index("h")) != 42;
    CHECK(obs_tbl.entries[i].event == (changes ? Event::Bang : Event::Silent));
  }
}

TEST_CASE("law application agrees with the interpreter on every composite") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  for (Lang lang : {Lang::Source, Lang::Target}) {
    for (const TermPtr& t : enumerate_terms(u, lang)) {
      const GsosNode n = node_of(lang, t, space);
      const BehaviorTable via_law = rho_apply(lang, n, space);
      const BehaviorTable via_step = one_step(lang, t, space);
      CAPTURE(render_term(t));
      REQUIRE(via_law.entries.size() == via_step.entries.size());
      for (std::size_t i = 0; i < via_law.entries.size(); ++i) {
        CHECK(via_law.entries[i].after == via_step.entries[i].after);
        CHECK(via_law.entries[i].event == via_step.entries[i].event);
        CHECK(via_law.entries[i].next.equal(via_step.entries[i].next));
      }
    }
  }
}

TEST_CASE("registered transformations act as documented") {
  const Universe u = big();
  const StoreSpace space(u);

  BehaviorTable flagged = one_step(Lang::Source, src(u, "h := 42"), space);
  const BehaviorTable erased = apply_beh_map(BehMap::Erase, flagged);
  const BehaviorTable included = apply_beh_map(BehMap::Incl, flagged);
  for (std::size_t i = 0; i < space.count(); ++i) {
    CHECK(erased.entries[i].event == Event::Silent);
    CHECK(erased.entries[i].after == flagged.entries[i].after);
    CHECK(included.entries[i].event == flagged.entries[i].event);
  }

  const GsosNode asn = node_of(Lang::Source, src(u, "h := 2"), space);
  const GsosNode mapped = apply_syntax_map(SyntaxMap::SandboxAssigns, asn);
  CHECK(render_term(node_term(mapped)) == "sandbox{ h := 2 }");
  const GsosNode kept = apply_syntax_map(SyntaxMap::Embed, asn);
  CHECK(render_term(node_term(kept)) == "h := 2");
}

TEST_CASE("behavior maps are natural in the carrier") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  const auto terms = enumerate_terms(u, Lang::Source);

  // Sample relabelings g of the carrier and check that mapping the table
  // along g commutes with the behavior map.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
  for (int round = 0; round < 20; ++round) {
    const TermPtr t = terms[pick(rng)];
    const BehaviorTable tbl = one_step(Lang::Source, t, space);
    std::vector<std::pair<TermPtr, TermPtr>> relabel;
    auto g = [&](const TermPtr& x) -> TermPtr {
      for (auto& [from, to] : relabel) {
        if (term_equal(from, x)) return to;
      }
      relabel.emplace_back(x, terms[pick(rng)]);
      return relabel.back().second;
    };
    auto map_table = [&](const BehaviorTable& in) {
      BehaviorTable out = in;
      for (auto& e : out.entries) {
        if (!e.next.is_done()) e.next = Residual::of_term(g(e.next.collapse()));
      }
      return out;
    };
    for (BehMap m : {BehMap::Incl, BehMap::Erase}) {
      const BehaviorTable path1 = apply_beh_map(m, map_table(tbl));
      const BehaviorTable path2 = map_table(apply_beh_map(m, tbl));
      CHECK(path1.equal(path2));
    }
  }
}

TEST_CASE("syntax maps are natural in the children") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  const TermPtr left = src(u, "skip");
  const TermPtr right = src(u, "l := 1");
  GsosNode n = node_of(Lang::Source, seq(left, right), space);
  // Relabel the children, then map, and the other way around.
  auto relabel = [&](GsosNode node) {
    for (auto& child : node.children) {
      child.term = src(u, "h := 1");
      child.table = std::make_shared<BehaviorTable>(one_step(Lang::Source, child.term, space));
    }
    return node;
  };
  for (SyntaxMap m : {SyntaxMap::Embed, SyntaxMap::SandboxAssigns}) {
    const GsosNode a = apply_syntax_map(m, relabel(n));
    const GsosNode b = relabel(apply_syntax_map(m, n));
    CHECK(term_equal(node_term(a), node_term(b)));
  }
}

TEST_CASE("square checks on the tiny universe") {
  const Universe u = tiny_universe();
  CHECK(check_modl(SyntaxMap::SandboxAssigns, BehMap::Erase, u).holds);
  CHECK(check_modl(SyntaxMap::Embed, BehMap::Incl, u).holds);

  const Verdict broken = check_modl(SyntaxMap::SandboxAssigns, BehMap::Incl, u);
  CHECK(!broken.holds);
  REQUIRE(broken.witness.has_value());

  CHECK(check_mmodl(CtxMap::Identity, BehMap::Erase, u).holds);
  const Verdict layer_broken = check_mmodl(CtxMap::Identity, BehMap::Incl, u);
  CHECK(!layer_broken.holds);
}

TEST_CASE("layer square paths on the documented witness") {
  const Universe u = big();
  const StoreSpace space(u);
  const MmodlPaths paths =
      mmodl_paths(CtxMap::Identity, BehMap::Incl, src(u, "h := 42"), space);
  const std::size_t i = space.index_of(mk_store(u, 1, 0));
  CHECK(paths.upper.entries[i].event == Event::H);
  CHECK(paths.lower.entries[i].event == Event::Bang);

  const MmodlPaths fixed =
      mmodl_paths(CtxMap::Identity, BehMap::Erase, src(u, "h := 42"), space);
  CHECK(fixed.upper.entries[i].event == Event::Silent);
  CHECK(fixed.lower.entries[i].event == Event::Silent);

  // Silent bodies commute under both maps.
  const MmodlPaths idle = mmodl_paths(CtxMap::Identity, BehMap::Incl, src(u, "skip"), space);
  CHECK(idle.upper.equal(idle.lower));
}

TEST_CASE("unfolding approximates the final coalgebra") {
  const Universe u = big();
  const StoreSpace space(u);

  const CoalgPtr one = f_unfold(Lang::Source, src(u, "h := 42"), space, u.fuel);
  for (std::size_t i = 0; i < space.count(); ++i) {
    CHECK(one->entries[i].tag == CoalgElem::Tag::Terminated);
    const bool changes = space.at(i).get(u.var_index("h")) != 42;
    CHECK(one->entries[i].event == (changes ? Event::H : Event::Silent));
  }

  const CoalgPtr spin = f_unfold(Lang::Source, src(u, "while 1 { skip }"), space, 2);
  for (std::size_t i = 0; i < space.count(); ++i) {
    REQUIRE(spin->entries[i].tag == CoalgElem::Tag::Next);
    CHECK(spin->entries[i].event == Event::Silent);
    CHECK(spin->entries[i].next->entries[i].tag == CoalgElem::Tag::Cut);
  }
}

TEST_CASE("deepening the fuel refines the unfolding without rewriting it") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  // Truncating a deeper unfolding yields the shallower one.
  std::function<bool(const CoalgPtr&, const CoalgPtr&, uint32_t)> refines =
      [&](const CoalgPtr& shallow, const CoalgPtr& deep, uint32_t depth) -> bool {
    for (std::size_t i = 0; i < shallow->entries.size(); ++i) {
      const auto& se = shallow->entries[i];
      const auto& de = deep->entries[i];
      if (!(se.after == de.after) || se.event != de.event) return false;
      if (se.tag == CoalgElem::Tag::Terminated && de.tag != CoalgElem::Tag::Terminated)
        return false;
      if (se.tag == CoalgElem::Tag::Cut) continue;  // the frontier may move
      if (se.tag == CoalgElem::Tag::Next) {
        if (de.tag != CoalgElem::Tag::Next) return false;
        if (depth > 1 && !refines(se.next, de.next, depth - 1)) return false;
      }
    }
    return true;
  };
  for (const TermPtr& t : enumerate_terms(u, Lang::Source)) {
    const CoalgPtr shallow = f_unfold(Lang::Source, t, space, 3);
    const CoalgPtr deep = f_unfold(Lang::Source, t, space, 6);
    CHECK(refines(shallow, deep, 3));
  }
}

TEST_CASE("reading traces off an unfolding reproduces beh") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  for (Lang lang : {Lang::Source, Lang::Target}) {
    for (const Ctx& c : enumerate_ctxs(u, lang)) {
      for (const TermPtr& t : enumerate_terms(u, lang)) {
        const Behavior direct = beh(lang, c, t, space);
        const Behavior via_psi = psi(f_unfold(lang, plug(c, t), space, u.fuel), space);
        CAPTURE(render_term(t));
        CHECK(direct == via_psi);
      }
    }
  }
}

TEST_CASE("replaying a trace as an element") {
  const Universe u = big();
  const StoreSpace space(u);

  const Trace t = run(Lang::Source, mk_store(u, 1, 0), src(u, "h := 42"), u.fuel, u);
  const CoalgPtr e = phi(t, space);
  // Store-oblivious: every input store takes the same step.
  for (std::size_t i = 0; i < space.count(); ++i) {
    CHECK(e->entries[i].after == mk_store(u, 42, 0));
    CHECK(e->entries[i].event == Event::H);
    CHECK(e->entries[i].tag == CoalgElem::Tag::Terminated);
  }

  // A one-step silent trace becomes a constant element terminating in one
  // silent step, and its replay is the singleton-per-store set.
  const Trace idle = run(Lang::Source, mk_store(u, 0, 0), src(u, "skip"), u.fuel, u);
  const CoalgPtr ce = phi(idle, space);
  const Behavior replay = psi(ce, space);
  for (std::size_t i = 0; i < space.count(); ++i) {
    CHECK(ce->entries[i].tag == CoalgElem::Tag::Terminated);
    CHECK(ce->entries[i].event == Event::Silent);
    REQUIRE(replay.traces[i].elems.size() == 2);
    CHECK(replay.traces[i].initial() == space.at(i));
    CHECK(replay.traces[i].elems[1].store == mk_store(u, 0, 0));
  }

  const Trace cut = run(Lang::Source, mk_store(u, 0, 0), src(u, "while 1 { skip }"), 2, u);
  CHECK_THROWS_AS(phi(cut, space), std::invalid_argument);
}

TEST_CASE("replay distinguishes traces that share their initial store") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  std::vector<Trace> traces;
  for (const TermPtr& t : enumerate_terms(u, Lang::Source)) {
    const Trace tr = run(Lang::Source, space.at(0), t, u.fuel, u);
    if (!tr.fuel_limited()) traces.push_back(tr);
  }
  std::sort(traces.begin(), traces.end());
  traces.erase(std::unique(traces.begin(), traces.end()), traces.end());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = i + 1; j < traces.size(); ++j) {
      CHECK(!coalg_equal(phi(traces[i], space), phi(traces[j], space)));
    }
  }
}

TEST_CASE("cross plugging records layers without translating the core") {
  const Universe u = big();
  const TermPtr p = src(u, "h := 42");
  CHECK(cross_plug(Ctx{Lang::Target, 1}, p).layers == 1);
  CHECK(cross_plug(Ctx{Lang::Target, 0}, p).layers == 0);
  CHECK(cross_plug(Ctx{Lang::Target, 2}, skip()).layers == 2);
  CHECK(term_equal(cross_plug(Ctx{Lang::Target, 2}, p).core, p));
}

TEST_CASE("layered checks hold for the sandbox triple on the tiny universe") {
  const Universe u = tiny_universe();
  CHECK(check_layered(u, u.fuel).holds);
}

TEST_CASE("layered unfolding silences the flag before any layer reports it") {
  const Universe u = big();
  const StoreSpace space(u);
  const LayeredTerm m = cross_plug(Ctx{Lang::Target, 1}, src(u, "h := 42"));
  const CoalgPtr layered = unfold_layered(m, space, 8, BehMap::Erase);
  const CoalgPtr collapsed =
      apply_beh_map_deep(BehMap::Erase, f_unfold(Lang::Source, m.core, space, 8));
  CHECK(coalg_equal(layered, collapsed));

  // With the inclusion map the layer does report, breaking the bisimulation.
  const CoalgPtr included = unfold_layered(m, space, 8, BehMap::Incl);
  const CoalgPtr plain = apply_beh_map_deep(BehMap::Incl, f_unfold(Lang::Source, m.core, space, 8));
  CHECK(!coalg_equal(included, plain));
}
