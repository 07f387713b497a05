#include <doctest.h>

#include "sclab/enumerate.hpp"
#include "sclab/opsem.hpp"
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

TEST_CASE("assignment rules") {
  const Universe u = big();

  SUBCASE("private assignment flags the change") {
    const StepOutcome out = step(Lang::Source, mk_store(u, 1, 0), src(u, "h := 42"), u);
    CHECK(out.store == mk_store(u, 42, 0));
    CHECK(out.event == Event::H);
    CHECK(out.terminated());
    CHECK(std::string(out.rule) == "asnH");
  }

  SUBCASE("private assignment without a change is silent") {
    const StepOutcome out = step(Lang::Source, mk_store(u, 42, 0), src(u, "h := 42"), u);
    CHECK(out.store == mk_store(u, 42, 0));
    CHECK(out.event == Event::Silent);
    CHECK(std::string(out.rule) == "asnH-eq");
  }

  SUBCASE("public assignment from public data") {
    const StepOutcome out = step(Lang::Source, mk_store(u, 1, 0), src(u, "l := 2"), u);
    CHECK(out.store == mk_store(u, 1, 2));
    CHECK(out.event == Event::Silent);
    CHECK(std::string(out.rule) == "asnL");
  }

  SUBCASE("public assignment reading private data is silent") {
    const StepOutcome out = step(Lang::Source, mk_store(u, 5, 0), src(u, "l := h"), u);
    CHECK(out.store == mk_store(u, 5, 5));
    CHECK(out.event == Event::Silent);
    CHECK(std::string(out.rule) == "asnL-hi");
  }
}

TEST_CASE("observer and sandbox rules") {
  const Universe u = big();

  const StepOutcome bang = step(Lang::Target, mk_store(u, 1, 0), tgt(u, "obs(h := 42)"), u);
  CHECK(bang.store == mk_store(u, 42, 0));
  CHECK(bang.event == Event::Bang);
  CHECK(bang.terminated());
  CHECK(std::string(bang.rule) == "bang1");

  const StepOutcome sb = step(Lang::Target, mk_store(u, 1, 0), tgt(u, "sandbox{ h := 42 }"), u);
  CHECK(sb.store == mk_store(u, 42, 0));
  CHECK(sb.event == Event::Silent);
  CHECK(sb.terminated());
  CHECK(std::string(sb.rule) == "sb1");

  // The observer layer persists while its body runs and is silent for
  // non-H events.
  const StepOutcome inner =
      step(Lang::Target, mk_store(u, 1, 0), tgt(u, "obs(l := 2 ; skip)"), u);
  CHECK(inner.event == Event::Silent);
  REQUIRE(!inner.terminated());
  CHECK(render_term(inner.residual) == "obs(skip)");
  CHECK(std::string(inner.rule) == "obs2");

  const StepOutcome nested =
      step(Lang::Target, mk_store(u, 1, 0), tgt(u, "obs(obs(h := 42))"), u);
  CHECK(nested.event == Event::Bang);  // inner layer reports, outer passes it through
  CHECK(nested.terminated());

  const StepOutcome sb_obs =
      step(Lang::Target, mk_store(u, 1, 0), tgt(u, "obs(sandbox{ h := 42 })"), u);
  CHECK(sb_obs.event == Event::Silent);  // the sandbox already silenced the flag
}

TEST_CASE("sequencing propagates the label and keeps the rest") {
  const Universe u = big();
  const StepOutcome out = step(Lang::Source, mk_store(u, 1, 0), src(u, "l := 2 ; skip"), u);
  CHECK(out.store == mk_store(u, 1, 2));
  CHECK(out.event == Event::Silent);
  REQUIRE(!out.terminated());
  CHECK(render_term(out.residual) == "skip");
  CHECK(std::string(out.rule) == "seq1");

  const StepOutcome labeled = step(Lang::Source, mk_store(u, 1, 0), src(u, "h := 42 ; skip"), u);
  CHECK(labeled.event == Event::H);
  CHECK(std::string(labeled.rule) == "seq1");

  const StepOutcome deep =
      step(Lang::Source, mk_store(u, 1, 0), src(u, "(h := 42 ; skip) ; skip"), u);
  CHECK(deep.event == Event::H);
  CHECK(std::string(deep.rule) == "seq2");
  CHECK(render_term(deep.residual) == "skip ; skip");
}

TEST_CASE("while unrolls or stops") {
  const Universe u = big();
  const StepOutcome stop = step(Lang::Source, mk_store(u, 0, 0), src(u, "while l { skip }"), u);
  CHECK(std::string(stop.rule) == "while1");
  CHECK(render_term(stop.residual) == "skip");

  const StepOutcome go = step(Lang::Source, mk_store(u, 0, 1), src(u, "while l { skip }"), u);
  CHECK(std::string(go.rule) == "while2");
  CHECK(render_term(go.residual) == "skip ; while l { skip }");
  CHECK(go.event == Event::Silent);
}

TEST_CASE("determinacy and totality over the tiny universe") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  for (Lang lang : {Lang::Source, Lang::Target}) {
    for (const TermPtr& t : enumerate_terms(u, lang)) {
      for (std::size_t i = 0; i < space.count(); ++i) {
        const auto rules = matching_rules(lang, space.at(i), t, u);
        CAPTURE(render_term(t));
        REQUIRE(rules.size() == 1);
        const StepOutcome out = step(lang, space.at(i), t, u);
        CHECK(rules.front() == out.rule);
      }
    }
  }
}

TEST_CASE("event discipline") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);

  // Source steps never report; sandboxed steps never flag or report.
  for (const TermPtr& t : enumerate_terms(u, Lang::Source)) {
    for (std::size_t i = 0; i < space.count(); ++i) {
      CHECK(step(Lang::Source, space.at(i), t, u).event != Event::Bang);
    }
  }
  for (const ExprPtr& e : enumerate_exprs(u)) {
    for (const auto& v : u.vars) {
      const TermPtr sb = sandbox(v.name, e);
      for (std::size_t i = 0; i < space.count(); ++i) {
        CHECK(step(Lang::Target, space.at(i), sb, u).event == Event::Silent);
      }
    }
  }

  // The observer is store-transparent and maps H to ! and nothing else.
  for (const TermPtr& t : enumerate_terms(u, Lang::Target)) {
    for (std::size_t i = 0; i < space.count(); ++i) {
      const StepOutcome raw = step(Lang::Target, space.at(i), t, u);
      const StepOutcome wrapped = step(Lang::Target, space.at(i), obs(t), u);
      CHECK(wrapped.store == raw.store);
      CHECK(wrapped.event == (raw.event == Event::H ? Event::Bang : raw.event));
    }
  }

  // Ill-formed input is rejected rather than mis-stepped.
  CHECK_THROWS_AS(step(Lang::Source, space.at(0), obs(skip()), u), std::invalid_argument);
}
