#include <doctest.h>

#include "sclab/compilers.hpp"
#include "sclab/enumerate.hpp"
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

// Independent oracle: the quantifier-literal reading of noninterference,
// checking every ordered pair of traces.
bool ni_oracle(const Behavior& b, const Universe& u) {
  for (const Trace& t1 : b.traces) {
    for (const Trace& t2 : b.traces) {
      if (low_eq(t1.initial(), t2.initial(), u) && !low_eq(t1, t2, u)) return false;
    }
  }
  return true;
}

} // namespace

TEST_CASE("low equivalence on stores ignores private values") {
  const Universe u = big();
  CHECK(low_eq(mk_store(u, 1, 0), mk_store(u, 42, 0), u));
  CHECK(!low_eq(mk_store(u, 1, 0), mk_store(u, 1, 1), u));

  // Stores from a different universe are rejected, not mis-compared.
  CHECK_THROWS_AS(low_eq(Store(1), mk_store(u, 1, 0), u), std::invalid_argument);
}

TEST_CASE("low equivalence on traces ignores internal flags only") {
  const Universe u = big();
  const Trace flagged = parse_trace("{h=1,l=0} #H {h=42,l=0} OK", u);
  const Trace silent = parse_trace("{h=1,l=0} {h=42,l=0} OK", u);
  CHECK(low_eq(flagged, silent, u));

  // A reported event does not match a state at the same position.
  const Trace reported = parse_trace("{h=1,l=0} ! {h=42,l=0} OK", u);
  const Trace two_states = parse_trace("{h=42,l=0} {h=42,l=0} OK", u);
  CHECK(!low_eq(reported, two_states, u));

  // Termination markers only match themselves.
  const Trace done = parse_trace("{h=0,l=0} {h=0,l=0} OK", u);
  const Trace cut = parse_trace("{h=0,l=0} {h=0,l=0} TIMEOUT", u);
  CHECK(!low_eq(done, cut, u));
}

TEST_CASE("low equivalence is an equivalence relation on run traces") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  std::vector<Trace> traces;
  for (const TermPtr& t : enumerate_terms(u, Lang::Source)) {
    traces.push_back(run(Lang::Source, space.at(0), t, u.fuel, u));
    if (traces.size() >= 40) break;
  }
  for (const Trace& a : traces) CHECK(low_eq(a, a, u));
  for (const Trace& a : traces) {
    for (const Trace& b : traces) {
      CHECK(low_eq(a, b, u) == low_eq(b, a, u));
      for (const Trace& c : traces) {
        if (low_eq(a, b, u) && low_eq(b, c, u)) CHECK(low_eq(a, c, u));
      }
    }
  }
}

TEST_CASE("noninterference membership") {
  const Universe u = big();
  const StoreSpace space(u);

  const Behavior source = beh(Lang::Source, Ctx{Lang::Source, 0}, src(u, "h := 42"), space);
  CHECK(sat(source, Hyperproperty::ni(), u));
  CHECK(ni_oracle(source, u));

  const Behavior observed = beh(Lang::Target, Ctx{Lang::Target, 1}, tgt(u, "h := 42"), space);
  CHECK(!sat(observed, Hyperproperty::ni(), u));
  CHECK(!ni_oracle(observed, u));
  const auto pair = ni_violation(observed, u);
  REQUIRE(pair.has_value());
  CHECK(low_eq(observed.traces[pair->first].initial(), observed.traces[pair->second].initial(), u));
  CHECK(!low_eq(observed.traces[pair->first], observed.traces[pair->second], u));

  CHECK(sat(Behavior{}, Hyperproperty::ni(), u));  // vacuous
}

TEST_CASE("noninterference agrees with the pairwise oracle everywhere") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  for (const TermPtr& t : enumerate_terms(u, Lang::Target)) {
    for (const Ctx& c : enumerate_ctxs(u, Lang::Target)) {
      const Behavior b = beh(Lang::Target, c, t, space);
      CAPTURE(render_term(t));
      CHECK(sat(b, Hyperproperty::ni(), u) == ni_oracle(b, u));
    }
  }
}

TEST_CASE("noninterference is invariant under erasure of internal flags") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  for (const TermPtr& t : enumerate_terms(u, Lang::Source)) {
    const Behavior b = beh(Lang::Source, Ctx{Lang::Source, 0}, t, space);
    CHECK(sat(b, Hyperproperty::ni(), u) == sat(erase_h(b), Hyperproperty::ni(), u));
  }
}

TEST_CASE("other hyperproperties") {
  const Universe u = big();
  const StoreSpace space(u);
  const Behavior flagged = beh(Lang::Source, Ctx{Lang::Source, 0}, src(u, "h := 42"), space);
  const Behavior silent = beh(Lang::Source, Ctx{Lang::Source, 0}, src(u, "skip"), space);

  CHECK(sat(flagged, Hyperproperty::top(), u));
  CHECK(sat(silent, Hyperproperty::top(), u));
  CHECK(!sat(flagged, Hyperproperty::never_event(Event::H), u));
  CHECK(sat(silent, Hyperproperty::never_event(Event::H), u));
  CHECK(sat(flagged, Hyperproperty::never_event(Event::Bang), u));

  auto members = std::make_shared<ExplicitSet>(ExplicitSet::from_behaviors({silent}));
  const Hyperproperty explicit_h = Hyperproperty::explicit_set(members);
  CHECK(sat(silent, explicit_h, u));
  CHECK(!sat(flagged, explicit_h, u));

  // Extending an explicit family never loses members.
  auto extended =
      std::make_shared<ExplicitSet>(ExplicitSet::from_behaviors({silent, flagged}));
  const Hyperproperty extended_h = Hyperproperty::explicit_set(extended);
  CHECK(sat(silent, extended_h, u));
  CHECK(sat(flagged, extended_h, u));
}

TEST_CASE("robust satisfaction") {
  const Universe u = big();

  const Verdict source = robust_sat(Lang::Source, src(u, "h := 42"), Hyperproperty::ni(), u);
  CHECK(source.holds);

  const Verdict target = robust_sat(Lang::Target, tgt(u, "h := 42"), Hyperproperty::ni(), u);
  CHECK(!target.holds);
  REQUIRE(target.witness.has_value());
  bool found_ctx = false;
  for (const auto& [k, v] : target.witness->fields) {
    if (k == "context") {
      CHECK(v == "obs(hole)");
      found_ctx = true;
    }
  }
  CHECK(found_ctx);

  const Verdict sandboxed =
      robust_sat(Lang::Target, tgt(u, "sandbox{ h := 42 }"), Hyperproperty::ni(), u);
  CHECK(sandboxed.holds);
}

TEST_CASE("robust satisfaction in the source reduces to the sole context") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  for (const TermPtr& t : enumerate_terms(u, Lang::Source)) {
    const Verdict v = robust_sat(Lang::Source, t, Hyperproperty::ni(), u);
    const Behavior b = beh(Lang::Source, Ctx{Lang::Source, 0}, t, space);
    CHECK(v.holds == sat(b, Hyperproperty::ni(), u));
  }
}

TEST_CASE("contextual equivalence") {
  const Universe u = big();

  CHECK(ctx_equiv(Lang::Source, src(u, "skip"), src(u, "l := l"), u).holds);
  CHECK(ctx_equiv(Lang::Target, tgt(u, "obs(skip)"), tgt(u, "skip"), u).holds);

  const Verdict diff = ctx_equiv(Lang::Source, src(u, "h := 42"), src(u, "skip"), u);
  CHECK(!diff.holds);
  REQUIRE(diff.witness.has_value());

  // Within-language fuel flag: spinning programs mark the verdict.
  const Verdict spin = ctx_equiv(Lang::Source, src(u, "while 1 { skip }"),
                                 src(u, "while 2 { skip }"), u);
  CHECK(spin.holds);
  CHECK(spin.fuel_limited);
}
