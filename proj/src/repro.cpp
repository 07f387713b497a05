#include "sclab/repro.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <variant>

#include "sclab/enumerate.hpp"
#include "sclab/gsos.hpp"
#include "sclab/insertion.hpp"
#include "sclab/parallel.hpp"
#include "sclab/tau_tilde.hpp"
#include "sclab/text.hpp"

namespace sclab {

namespace {

constexpr uint64_t kInsertionSeed = 0xC0FFEEull;

std::string yesno(bool b) { return b ? "holds" : "fails"; }

Universe with_term_depth(Universe u, uint32_t depth) {
  u.term_depth = depth;
  return u;
}

// The sampled-insertion universe: same variables, two values per variable,
// fuel 8, literals restricted to fit.
Universe insertion_sampled_universe(Universe u) {
  u.vmax = 1;
  u.fuel = 8;
  u.literal_pool = {0, 1};
  u.validate();
  return u;
}

// The exhaustive-insertion universe: one private variable and two values,
// i.e. a two-store world whose observable trace universe is tiny enough to
// exhaust at the hyperproperty level.
Universe insertion_exhaustive_universe() {
  Universe u;
  u.vars = {{"h", Level::High}};
  u.vmax = 1;
  u.fuel = 1;
  u.term_depth = 2;
  u.ctx_depth = 1;
  u.literal_pool = {0, 1};
  u.validate();
  return u;
}

struct RowSpec {
  std::string id;
  int criterion;
  std::string description;
  std::string expectation;
  std::function<std::pair<bool, std::string>(const Config&)> body;
};

// The documented counterexample of the preservation lemma, verified
// directly against the semantics: under the observer context, the compiled
// assignment distinguishes two low-equivalent stores with h=1 and h=42.
std::pair<bool, std::string> verify_identity_ni_witness(const Universe& u) {
  const StoreSpace space(u);
  const TermPtr p = parse_term("h := 42", Lang::Source, u);
  const Ctx observer = parse_ctx("obs(hole)", Lang::Target, u);
  const Behavior b = beh(Lang::Target, observer, compile(CompilerId::Identity, p), space);

  Store s1(u.var_count());
  Store s2(u.var_count());
  s1.set(u.var_index("h"), 1);
  s2.set(u.var_index("h"), 42);
  const Trace& t1 = b.traces[space.index_of(s1)];
  const Trace& t2 = b.traces[space.index_of(s2)];
  const bool premise = low_eq(s1, s2, u);
  const bool leak = !low_eq(t1, t2, u);
  const bool bang = t1.has_event(Event::Bang) && !t2.has_event(Event::Bang);
  const bool ok = premise && leak && bang;
  return {ok, "store pair " + render_store(s1, u) + " / " + render_store(s2, u) +
                  (ok ? " violates noninterference under obs(hole)"
                      : " does not exhibit the documented violation")};
}

std::vector<RowSpec> row_specs() {
  std::vector<RowSpec> rows;

  rows.push_back({"beh-display-source", 1,
                  "behavior of h := 42 in the identity context matches the closed form",
                  "byte-identical behavior text",
                  [](const Config& cfg) {
                    const StoreSpace space(cfg.universe);
                    const TermPtr p = parse_term("h := 42", Lang::Source, cfg.universe);
                    const std::string got =
                        render_behavior(beh(Lang::Source, Ctx{Lang::Source, 0}, p, space),
                                        cfg.universe);
                    const std::string want = golden_behavior_source_assign42(cfg.universe);
                    return std::make_pair(got == want,
                                          std::to_string(space.count()) + " traces compared");
                  }});

  rows.push_back({"beh-display-target", 1,
                  "behavior of obs(h := 42) replaces the internal flag by the report event",
                  "byte-identical behavior text",
                  [](const Config& cfg) {
                    const StoreSpace space(cfg.universe);
                    const TermPtr p = parse_term("h := 42", Lang::Target, cfg.universe);
                    const std::string got = render_behavior(
                        beh(Lang::Target, Ctx{Lang::Target, 1}, p, space), cfg.universe);
                    const std::string want = golden_behavior_target_obs_assign42(cfg.universe);
                    return std::make_pair(got == want,
                                          std::to_string(space.count()) + " traces compared");
                  }});

  rows.push_back({"fac-identity", 2,
                  "identity compiler preserves contextual equivalence (term size <= 3)",
                  "holds",
                  [](const Config& cfg) {
                    const Verdict v = check_fac(CompilerId::Identity,
                                                with_term_depth(cfg.universe, 3),
                                                FacDirection::Preserve);
                    return std::make_pair(v.holds, yesno(v.holds));
                  }});

  rows.push_back({"lemma-identity-ni", 3,
                  "identity compiler does not preserve robust noninterference",
                  "fails, documented witness verified",
                  [](const Config& cfg) {
                    const Verdict v =
                        check_preservation(CompilerId::Identity, Hyperproperty::ni(),
                                           cfg.universe);
                    if (v.holds) return std::make_pair(false, std::string("unexpectedly holds"));
                    auto [wok, wdetail] = verify_identity_ni_witness(cfg.universe);
                    return std::make_pair(wok, "fails as expected; " + wdetail);
                  }});

  rows.push_back({"preserve-sandbox-ni", 4,
                  "sandbox compiler preserves robust noninterference (term size <= 3)",
                  "holds",
                  [](const Config& cfg) {
                    const Verdict v =
                        check_preservation(CompilerId::Sandbox, Hyperproperty::ni(),
                                           with_term_depth(cfg.universe, 3));
                    return std::make_pair(v.holds, yesno(v.holds));
                  }});

  rows.push_back({"modl-sandbox-erase", 5, "square for (s_sandbox, b_erase) commutes", "holds",
                  [](const Config& cfg) {
                    const Verdict v =
                        check_modl(SyntaxMap::SandboxAssigns, BehMap::Erase, cfg.universe);
                    return std::make_pair(v.holds, yesno(v.holds));
                  }});

  rows.push_back({"modl-embed-incl", 5, "square for (s_embed, b_incl) commutes", "holds",
                  [](const Config& cfg) {
                    const Verdict v = check_modl(SyntaxMap::Embed, BehMap::Incl, cfg.universe);
                    return std::make_pair(v.holds, yesno(v.holds));
                  }});

  rows.push_back(
      {"modl-sandbox-incl", 5,
       "square for (s_sandbox, b_incl) breaks on an assignment to a private variable",
       "fails on a high-assignment node",
       [](const Config& cfg) {
         const Verdict v = check_modl(SyntaxMap::SandboxAssigns, BehMap::Incl, cfg.universe);
         if (v.holds || !v.witness) return std::make_pair(false, std::string("unexpectedly holds"));
         std::string node;
         for (const auto& [k, val] : v.witness->fields)
           if (k == "node") node = val;
         bool high_assign = false;
         try {
           const TermPtr t = parse_term(node, Lang::Source, cfg.universe);
           if (const auto* a = std::get_if<TermAssign>(&t->node)) {
             high_assign = cfg.universe.is_high(cfg.universe.var_index(a->var));
           }
         } catch (const std::exception&) {
         }
         return std::make_pair(high_assign, "fails on node " + node);
       }});

  rows.push_back({"mmodl-sandbox", 6, "layer square for (t_id, b_erase) commutes", "holds",
                  [](const Config& cfg) {
                    const Verdict v = check_mmodl(CtxMap::Identity, BehMap::Erase, cfg.universe);
                    return std::make_pair(v.holds, yesno(v.holds));
                  }});

  rows.push_back(
      {"mmodl-original-incl", 6,
       "layer square for (t_id, b_incl) breaks: upper path keeps H, lower reports !",
       "fails with the obs(h := 42) witness",
       [](const Config& cfg) {
         const Verdict v = check_mmodl(CtxMap::Identity, BehMap::Incl, cfg.universe);
         if (v.holds) return std::make_pair(false, std::string("unexpectedly holds"));
         // Verify the documented witness node directly.
         const StoreSpace space(cfg.universe);
         const TermPtr p = parse_term("h := 42", Lang::Source, cfg.universe);
         const MmodlPaths paths = mmodl_paths(CtxMap::Identity, BehMap::Incl, p, space);
         Store s(cfg.universe.var_count());
         s.set(cfg.universe.var_index("h"), 1);
         const std::size_t i = space.index_of(s);
         const bool witness_ok = paths.upper.entries[i].event == Event::H &&
                                 paths.lower.entries[i].event == Event::Bang;
         return std::make_pair(witness_ok,
                               std::string(witness_ok
                                               ? "fails as expected; on obs(h := 42) the upper "
                                                 "path ends in H and the lower in !"
                                               : "documented witness not reproduced"));
       }});

  rows.push_back({"rhp-sandbox-backtranslation", 7,
                  "sandbox compiler is robust via the back-translated context", "holds",
                  [](const Config& cfg) {
                    const Verdict v =
                        check_rhp(CompilerId::Sandbox, cfg.universe, RhpMode::Backtranslation);
                    return std::make_pair(v.holds, yesno(v.holds));
                  }});

  rows.push_back(
      {"rhp-identity-search", 7,
       "identity compiler is not robust: no source context explains the reported event",
       "fails with the (h := 42, obs(hole)) witness",
       [](const Config& cfg) {
         const Verdict v = check_rhp(CompilerId::Identity, cfg.universe, RhpMode::Search);
         if (v.holds) return std::make_pair(false, std::string("unexpectedly holds"));
         // Verify the documented witness pair directly.
         const StoreSpace space(cfg.universe);
         const TermPtr p = parse_term("h := 42", Lang::Source, cfg.universe);
         const Ctx observer = parse_ctx("obs(hole)", Lang::Target, cfg.universe);
         const Behavior lhs =
             beh(Lang::Target, observer, compile(CompilerId::Identity, p), space);
         bool witness_ok = false;
         for (const Ctx& cs : enumerate_ctxs(cfg.universe, Lang::Source)) {
           if (lhs == tau(beh(Lang::Source, cs, p, space))) return std::make_pair(false, std::string("documented witness has a matching source context"));
         }
         witness_ok = std::any_of(lhs.traces.begin(), lhs.traces.end(),
                                  [](const Trace& t) { return t.has_event(Event::Bang); });
         return std::make_pair(witness_ok,
                               std::string("fails as expected; the target behavior reports ! "
                                           "and no translated source behavior does"));
       }});

  rows.push_back(
      {"corollary-matrix", 8,
       "direct preservation and the inclusion test agree on {identity,sandbox} x {ni,top,never:!}",
       "all six combinations agree",
       [](const Config& cfg) {
         std::string detail;
         bool all_agree = true;
         for (CompilerId c : {CompilerId::Identity, CompilerId::Sandbox}) {
           for (const Hyperproperty& h : {Hyperproperty::ni(), Hyperproperty::top(),
                                          Hyperproperty::never_event(Event::Bang)}) {
             const CorollaryVerdict cv = check_corollary(c, h, cfg.universe);
             if (!detail.empty()) detail += "; ";
             detail += compiler_name(c) + "/" + h.name() + ": " +
                       (cv.preservation_holds ? "preserved" : "not-preserved") + "," +
                       (cv.inclusion_holds ? "included" : "not-included");
             all_agree = all_agree && cv.agree;
           }
         }
         return std::make_pair(all_agree, detail);
       }});

  rows.push_back({"tau-tilde-identity-ni", 8,
                  "translated noninterference under the identity compiler has a leaking member",
                  "contains a behavior outside noninterference",
                  [](const Config& cfg) {
                    bool leaking = false;
                    tau_tilde_visit(CompilerId::Identity, Hyperproperty::ni(), cfg.universe,
                                    [&](const Behavior& member, bool is_new, const TermPtr&,
                                        const Ctx&) {
                                      if (!is_new || leaking) return;
                                      if (!sat(member, Hyperproperty::ni(), cfg.universe))
                                        leaking = true;
                                    });
                    return std::make_pair(leaking, leaking ? "leaking member found"
                                                           : "no leaking member");
                  }});

  rows.push_back({"tau-tilde-sandbox-ni", 8,
                  "translated noninterference under the sandbox compiler stays inside it",
                  "every member satisfies noninterference",
                  [](const Config& cfg) {
                    bool all_ni = true;
                    const TauTildeStats stats = tau_tilde_visit(
                        CompilerId::Sandbox, Hyperproperty::ni(), cfg.universe,
                        [&](const Behavior& member, bool is_new, const TermPtr&, const Ctx&) {
                          if (!is_new || !all_ni) return;
                          if (!sat(member, Hyperproperty::ni(), cfg.universe)) all_ni = false;
                        });
                    return std::make_pair(all_ni, std::to_string(stats.distinct_members) +
                                                      " distinct members checked");
                  }});

  rows.push_back(
      {"bridges-psi-f", 9,
       "reading traces off the unfolded one-step behavior reproduces beh everywhere",
       "holds for every language, context and program",
       [](const Config& cfg) {
         const StoreSpace space(cfg.universe);
         bool all_ok = true;
         std::size_t checked = 0;
         for (Lang lang : {Lang::Source, Lang::Target}) {
           const auto terms = enumerate_terms(cfg.universe, lang);
           const auto ctxs = enumerate_ctxs(cfg.universe, lang);
           for (const Ctx& c : ctxs) {
             const auto mismatch = par::first_failure(terms.size(), [&](std::size_t i) {
               const TermPtr whole = plug(c, terms[i]);
               const Behavior via_psi =
                   psi(f_unfold(lang, whole, space, cfg.universe.fuel), space);
               return !(via_psi == beh(lang, c, terms[i], space));
             });
             checked += terms.size();
             if (mismatch) {
               all_ok = false;
               break;
             }
           }
           if (!all_ok) break;
         }
         return std::make_pair(all_ok, std::to_string(checked) + " plugged programs checked");
       }});

  rows.push_back(
      {"tau-coherence", 9,
       "trace-level erasure agrees with the coinductive behavior translation",
       "holds for every source program",
       [](const Config& cfg) {
         const StoreSpace space(cfg.universe);
         const auto terms = enumerate_terms(cfg.universe, Lang::Source);
         const auto mismatch = par::first_failure(terms.size(), [&](std::size_t i) {
           const Behavior trace_level =
               tau(beh(Lang::Source, Ctx{Lang::Source, 0}, terms[i], space));
           const Behavior coalg_level = psi(
               apply_beh_map_deep(BehMap::Erase,
                                  f_unfold(Lang::Source, terms[i], space, cfg.universe.fuel)),
               space);
           return !(trace_level == coalg_level);
         });
         return std::make_pair(!mismatch.has_value(),
                               std::to_string(terms.size()) + " source programs checked");
       }});

  rows.push_back(
      {"insertion-sampled", 10,
       "abstraction after concretization is the identity on sampled hyperproperties",
       "holds for 1000 samples per language",
       [](const Config& cfg) {
         const Universe u = insertion_sampled_universe(cfg.universe);
         const InsertionResult rs = check_insertion_sampled(Lang::Source, u, 1000, kInsertionSeed);
         const InsertionResult rt = check_insertion_sampled(Lang::Target, u, 1000, kInsertionSeed);
         const bool ok = rs.verdict.holds && rt.verdict.holds;
         return std::make_pair(
             ok, "observable universes: source " + std::to_string(rs.observable_count) +
                     ", target " + std::to_string(rt.observable_count));
       }});

  rows.push_back(
      {"insertion-exhaustive", 10,
       "the round trip is the identity on every hyperproperty of a two-store universe",
       "holds exhaustively",
       [](const Config&) {
         const Universe u = insertion_exhaustive_universe();
         const InsertionResult rs = check_insertion_exhaustive(Lang::Source, u);
         const InsertionResult rt = check_insertion_exhaustive(Lang::Target, u);
         const bool ok = rs.verdict.holds && rt.verdict.holds;
         return std::make_pair(ok, std::to_string(rs.property_sets_checked) + " property sets and " +
                                       std::to_string(rs.hyperproperties_checked) +
                                       " hyperproperties per language");
       }});

  rows.push_back({"layered-sandbox", 11,
                  "layered plugging, back-translation and the layered coalgebra agree (fuel 16)",
                  "holds for every (target context, source program) pair",
                  [](const Config& cfg) {
                    const Verdict v = check_layered(cfg.universe, 16);
                    return std::make_pair(v.holds, yesno(v.holds));
                  }});

  rows.push_back(
      {"hygiene-determinacy", 12, "exactly one rule fires for every configuration",
       "holds over all enumerated terms and stores",
       [](const Config& cfg) {
         const StoreSpace space(cfg.universe);
         bool ok = true;
         std::size_t checked = 0;
         for (Lang lang : {Lang::Source, Lang::Target}) {
           const auto terms = enumerate_terms(cfg.universe, lang);
           const auto bad = par::first_failure(terms.size(), [&](std::size_t i) {
             for (std::size_t s = 0; s < space.count(); ++s) {
               const auto rules = matching_rules(lang, space.at(s), terms[i], cfg.universe);
               if (rules.size() != 1) return true;
               if (rules.front() != step(lang, space.at(s), terms[i], cfg.universe).rule)
                 return true;
             }
             return false;
           });
           checked += terms.size() * space.count();
           if (bad) {
             ok = false;
             break;
           }
         }
         return std::make_pair(ok, std::to_string(checked) + " configurations checked");
       }});

  rows.push_back(
      {"hygiene-roundtrip", 12, "parse inverts render on every enumerated value",
       "holds over all enumerated terms, contexts, expressions and stores",
       [](const Config& cfg) {
         const Universe& u = cfg.universe;
         std::size_t checked = 0;
         for (Lang lang : {Lang::Source, Lang::Target}) {
           for (const TermPtr& t : enumerate_terms(u, lang)) {
             if (!term_equal(parse_term(render_term(t), lang, u), t))
               return std::make_pair(false, "term round trip failed: " + render_term(t));
             ++checked;
           }
           for (const Ctx& c : enumerate_ctxs(u, lang)) {
             if (!(parse_ctx(render_ctx(c), lang, u) == c))
               return std::make_pair(false, "context round trip failed: " + render_ctx(c));
             ++checked;
           }
         }
         for (const ExprPtr& e : enumerate_exprs(u)) {
           if (!expr_equal(parse_expr(render_expr(e), u), e))
             return std::make_pair(false, "expression round trip failed: " + render_expr(e));
           ++checked;
         }
         const StoreSpace space(u);
         for (std::size_t i = 0; i < space.count(); ++i) {
           if (!(parse_store(render_store(space.at(i), u), u) == space.at(i)))
             return std::make_pair(false, std::string("store round trip failed"));
           ++checked;
         }
         return std::make_pair(true, std::to_string(checked) + " values round-tripped");
       }});

  return rows;
}

} // namespace

std::string golden_behavior_source_assign42(const Universe& u) {
  const StoreSpace space(u);
  const std::size_t h = u.var_index("h");
  std::string out;
  for (std::size_t i = 0; i < space.count(); ++i) {
    const Store& s = space.at(i);
    Store updated = s;
    updated.set(h, 42);
    if (s.get(h) != 42) {
      out += render_store(s, u) + " #H " + render_store(updated, u) + " OK\n";
    } else {
      out += render_store(s, u) + " " + render_store(s, u) + " OK\n";
    }
  }
  return out;
}

std::string golden_behavior_target_obs_assign42(const Universe& u) {
  const StoreSpace space(u);
  const std::size_t h = u.var_index("h");
  std::string out;
  for (std::size_t i = 0; i < space.count(); ++i) {
    const Store& s = space.at(i);
    Store updated = s;
    updated.set(h, 42);
    if (s.get(h) != 42) {
      out += render_store(s, u) + " ! " + render_store(updated, u) + " OK\n";
    } else {
      out += render_store(s, u) + " " + render_store(s, u) + " OK\n";
    }
  }
  return out;
}

std::vector<std::string> repro_row_ids() {
  std::vector<std::string> ids;
  for (const auto& spec : row_specs()) ids.push_back(spec.id);
  return ids;
}

std::vector<ReproRow> run_repro(const std::string& scope, const Config& base) {
  std::vector<ReproRow> out;
  bool matched = false;
  for (const auto& spec : row_specs()) {
    if (scope != "all" && scope != spec.id) continue;
    matched = true;
    ReproRow row;
    row.id = spec.id;
    row.criterion = spec.criterion;
    row.description = spec.description;
    row.expectation = spec.expectation;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto [ok, detail] = spec.body(base);
      row.ok = ok;
      row.detail = detail;
    } catch (const std::exception& e) {
      row.ok = false;
      row.detail = std::string("error: ") + e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    out.push_back(std::move(row));
  }
  if (!matched) throw ConfigError("repro: unknown row '" + scope + "'");
  return out;
}

} // namespace sclab
