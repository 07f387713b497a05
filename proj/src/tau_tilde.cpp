#include "sclab/tau_tilde.hpp"

#include <atomic>
#include <map>
#include <set>

#include "sclab/enumerate.hpp"
#include "sclab/parallel.hpp"
#include "sclab/text.hpp"

namespace sclab {

ComprelReport comprel_build(CompilerId c, const Universe& u) {
  const auto programs = enumerate_terms(u, Lang::Source);
  const BehaviorFamilies fam = behavior_families(c, u, programs);

  ComprelReport rep;
  rep.fuel_limited = fam.fuel_limited;
  rep.relation.entries.reserve(programs.size());
  for (std::size_t i = 0; i < programs.size(); ++i) {
    rep.relation.entries.push_back({i, fam.source[i], fam.target[i]});
  }

  std::map<std::vector<Digest>, std::size_t> by_source;
  for (std::size_t i = 0; i < programs.size(); ++i) {
    const auto [it, inserted] = by_source.try_emplace(fam.source[i], i);
    if (inserted) continue;
    const std::size_t j = it->second;
    if (rep.functional && fam.target[j] != fam.target[i]) {
      rep.functional = false;
      Witness w;
      w.add("program1", render_term(programs[j]));
      w.add("program2", render_term(programs[i]));
      w.add("note", "equal source families map to distinct target families");
      rep.functional_witness = std::move(w);
    }
  }
  rep.distinct_source_families = by_source.size();

  // Injectivity of the induced map: representatives of distinct source
  // families must have distinct target families.
  std::map<std::vector<Digest>, std::size_t> by_target;
  for (const auto& [src_family, i] : by_source) {
    (void)src_family;
    const auto [it, inserted] = by_target.try_emplace(fam.target[i], i);
    if (inserted) continue;
    if (rep.injective) {
      rep.injective = false;
      Witness w;
      w.add("program1", render_term(programs[it->second]));
      w.add("program2", render_term(programs[i]));
      w.add("note", "distinct source families map to the same target family");
      rep.injective_witness = std::move(w);
    }
  }
  return rep;
}

TauTildeStats tau_tilde_visit(CompilerId c, const Hyperproperty& h, const Universe& u,
                              const TauTildeVisitor& fn) {
  const StoreSpace space(u);
  const auto programs = enumerate_terms(u, Lang::Source);
  const auto target_ctxs = enumerate_ctxs(u, Lang::Target);

  // Robustness filter, computed in parallel; emission stays in enumeration
  // order so visitors see a deterministic stream.
  std::vector<uint8_t> robust(programs.size(), 0);
  std::atomic<bool> any_timeout{false};
  par::for_each_index(programs.size(), [&](std::size_t i) {
    const Verdict v = robust_sat(Lang::Source, programs[i], h, u);
    if (v.fuel_limited) any_timeout = true;
    robust[i] = v.holds ? 1 : 0;
  });

  TauTildeStats stats;
  std::set<Digest> seen;
  for (std::size_t i = 0; i < programs.size(); ++i) {
    if (!robust[i]) continue;
    stats.robust_programs += 1;
    const TermPtr compiled = compile(c, programs[i]);
    for (const Ctx& ct : target_ctxs) {
      const Behavior member = beh(Lang::Target, ct, compiled, space);
      if (member.fuel_limited()) any_timeout = true;
      const bool is_new = seen.insert(behavior_digest(member)).second;
      stats.members_emitted += 1;
      if (is_new) stats.distinct_members += 1;
      if (fn) fn(member, is_new, programs[i], ct);
    }
  }
  stats.fuel_limited = any_timeout.load();
  return stats;
}

ExplicitSet tau_tilde(CompilerId c, const Hyperproperty& h, const Universe& u) {
  ExplicitSet out;
  tau_tilde_visit(c, h, u,
                  [&](const Behavior& member, bool is_new, const TermPtr&, const Ctx&) {
                    if (is_new) out.insert(member);
                  });
  return out;
}

CorollaryVerdict check_corollary(CompilerId c, const Hyperproperty& h, const Universe& u) {
  CorollaryVerdict cv;

  const Verdict pres = check_preservation(c, h, u);
  cv.preservation_holds = pres.holds;
  cv.preservation_witness = pres.witness;
  cv.fuel_limited = pres.fuel_limited;

  // Inclusion side: every member of the translated hyperproperty must
  // itself satisfy h.
  std::optional<Witness> inclusion_witness;
  const TauTildeStats stats = tau_tilde_visit(
      c, h, u, [&](const Behavior& member, bool is_new, const TermPtr& p, const Ctx& ct) {
        if (!is_new || inclusion_witness.has_value()) return;
        if (sat(member, h, u)) return;
        Witness w;
        w.add("program", render_term(p));
        w.add("target-context", render_ctx(ct));
        w.add("note", "member behavior violates the hyperproperty");
        inclusion_witness = std::move(w);
      });
  cv.fuel_limited = cv.fuel_limited || stats.fuel_limited;
  cv.inclusion_holds = !inclusion_witness.has_value();
  cv.inclusion_witness = std::move(inclusion_witness);
  cv.agree = cv.preservation_holds == cv.inclusion_holds;
  return cv;
}

} // namespace sclab
