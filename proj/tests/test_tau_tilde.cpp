#include <doctest.h>

#include "sclab/enumerate.hpp"
#include "sclab/tau_tilde.hpp"
#include "test_util.hpp"

using namespace sclab;
using namespace sclab::test;

TEST_CASE("the compatibility relation is functional for both compilers") {
  const Universe u = tiny_universe();
  for (CompilerId c : {CompilerId::Identity, CompilerId::Sandbox}) {
    const ComprelReport rep = comprel_build(c, u);
    CAPTURE(compiler_name(c));
    CHECK(rep.functional);
    CHECK(rep.relation.entries.size() == enumerate_terms(u, Lang::Source).size());
    CHECK(rep.distinct_source_families <= rep.relation.entries.size());
  }
}

TEST_CASE("a one-program universe gives a single-pair relation") {
  Universe u = tiny_universe();
  u.term_depth = 1;  // only the empty statement fits
  const ComprelReport rep = comprel_build(CompilerId::Identity, u);
  CHECK(rep.relation.entries.size() == 1);
  CHECK(rep.functional);
  CHECK(rep.injective);
  CHECK(rep.distinct_source_families == 1);
}

TEST_CASE("the translated hyperproperty under the identity compiler leaks") {
  const Universe u = tiny_universe();
  bool found_leak = false;
  const TauTildeStats stats = tau_tilde_visit(
      CompilerId::Identity, Hyperproperty::ni(), u,
      [&](const Behavior& member, bool is_new, const TermPtr&, const Ctx&) {
        if (is_new && !sat(member, Hyperproperty::ni(), u)) found_leak = true;
      });
  CHECK(found_leak);
  CHECK(stats.robust_programs > 0);
  CHECK(stats.distinct_members > 0);
  CHECK(stats.members_emitted >= stats.distinct_members);
}

TEST_CASE("the translated hyperproperty under the sandbox compiler stays inside") {
  const Universe u = tiny_universe();
  bool all_inside = true;
  tau_tilde_visit(CompilerId::Sandbox, Hyperproperty::ni(), u,
                  [&](const Behavior& member, bool is_new, const TermPtr&, const Ctx&) {
                    if (is_new && !sat(member, Hyperproperty::ni(), u)) all_inside = false;
                  });
  CHECK(all_inside);
}

TEST_CASE("an unsatisfiable hyperproperty translates to the empty set") {
  const Universe u = tiny_universe();
  const Hyperproperty nothing =
      Hyperproperty::explicit_set(std::make_shared<ExplicitSet>());
  const ExplicitSet out = tau_tilde(CompilerId::Identity, nothing, u);
  CHECK(out.size() == 0);
}

TEST_CASE("every member is realized and every realizable behavior is a member") {
  const Universe u = tiny_universe();
  const StoreSpace space(u);
  const Hyperproperty h = Hyperproperty::ni();

  // Collect the set and remember the realizing pairs.
  std::vector<std::pair<TermPtr, Ctx>> realizers;
  ExplicitSet members;
  tau_tilde_visit(CompilerId::Sandbox, h, u,
                  [&](const Behavior& member, bool is_new, const TermPtr& p, const Ctx& c) {
                    if (!is_new) return;
                    members.insert(member);
                    realizers.emplace_back(p, c);
                  });

  // Minimality: each member is the behavior of its recorded realizer.
  CHECK(members.size() == realizers.size());
  for (const auto& [p, c] : realizers) {
    const Behavior b = beh(Lang::Target, c, compile(CompilerId::Sandbox, p), space);
    CHECK(members.contains(b));
  }

  // Containment by construction: every robust program's compiled behavior
  // under every target context is in the set.
  for (const TermPtr& p : enumerate_terms(u, Lang::Source)) {
    if (!robust_sat(Lang::Source, p, h, u).holds) continue;
    for (const Ctx& c : enumerate_ctxs(u, Lang::Target)) {
      CHECK(members.contains(beh(Lang::Target, c, compile(CompilerId::Sandbox, p), space)));
    }
  }
}

TEST_CASE("the corollary's two sides agree across the matrix") {
  const Universe u = tiny_universe();
  for (CompilerId c : {CompilerId::Identity, CompilerId::Sandbox}) {
    for (const Hyperproperty& h : {Hyperproperty::ni(), Hyperproperty::top(),
                                   Hyperproperty::never_event(Event::Bang)}) {
      const CorollaryVerdict cv = check_corollary(c, h, u);
      CAPTURE(compiler_name(c));
      CAPTURE(h.name());
      CHECK(cv.agree);
    }
  }

  const CorollaryVerdict identity_ni =
      check_corollary(CompilerId::Identity, Hyperproperty::ni(), u);
  CHECK(!identity_ni.preservation_holds);
  CHECK(!identity_ni.inclusion_holds);

  const CorollaryVerdict sandbox_ni =
      check_corollary(CompilerId::Sandbox, Hyperproperty::ni(), u);
  CHECK(sandbox_ni.preservation_holds);
  CHECK(sandbox_ni.inclusion_holds);

  const CorollaryVerdict identity_top =
      check_corollary(CompilerId::Identity, Hyperproperty::top(), u);
  CHECK(identity_top.preservation_holds);
  CHECK(identity_top.inclusion_holds);
}
