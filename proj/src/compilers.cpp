#include "sclab/compilers.hpp"

#include <atomic>
#include <map>
#include <variant>

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

} // namespace

std::string compiler_name(CompilerId c) {
  return c == CompilerId::Identity ? "identity" : "sandbox";
}

CompilerId compiler_from_name(const std::string& name) {
  if (name == "identity") return CompilerId::Identity;
  if (name == "sandbox") return CompilerId::Sandbox;
  throw ConfigError("unknown compiler '" + name + "' (expected identity|sandbox)");
}

TermPtr compile(CompilerId c, const TermPtr& p) {
  return std::visit(
      overloaded{
          [&](const TermSkip&) { return p; },
          [&](const TermAssign& x) {
            if (c == CompilerId::Sandbox) return sandbox(x.var, x.expr);
            return p;
          },
          [&](const TermSeq& x) { return seq(compile(c, x.first), compile(c, x.second)); },
          [&](const TermWhile& x) { return while_loop(x.cond, compile(c, x.body)); },
          [&](const TermObs&) -> TermPtr {
            throw std::invalid_argument("compile: observer node in source input");
          },
          [&](const TermSandbox&) -> TermPtr {
            throw std::invalid_argument("compile: sandbox node in source input");
          },
      },
      p->node);
}

Behavior tau(const Behavior& source_behavior) {
  for (const auto& t : source_behavior.traces) {
    if (t.has_event(Event::Bang))
      throw std::invalid_argument("tau: input contains the target-only ! event");
  }
  return erase_h(source_behavior);
}

Ctx backtranslate(const Ctx& target_ctx) {
  (void)target_ctx;
  return Ctx{Lang::Source, 0};
}

Verdict check_rhp(CompilerId c, const Universe& u, RhpMode mode) {
  const StoreSpace space(u);
  const auto programs = enumerate_terms(u, Lang::Source);
  const auto target_ctxs = enumerate_ctxs(u, Lang::Target);
  const auto source_ctxs = enumerate_ctxs(u, Lang::Source);
  const std::size_t total = programs.size() * target_ctxs.size();

  std::atomic<bool> any_timeout{false};
  auto pair_fails = [&](std::size_t idx) {
    const TermPtr& p = programs[idx / target_ctxs.size()];
    const Ctx& ct = target_ctxs[idx % target_ctxs.size()];
    const Behavior lhs = beh(Lang::Target, ct, compile(c, p), space);
    if (lhs.fuel_limited()) any_timeout = true;
    if (mode == RhpMode::Backtranslation) {
      const Behavior rhs = tau(beh(Lang::Source, backtranslate(ct), p, space));
      return !(lhs == rhs);
    }
    for (const Ctx& cs : source_ctxs) {
      if (lhs == tau(beh(Lang::Source, cs, p, space))) return false;
    }
    return true;
  };

  Verdict v;
  const auto failing = par::first_failure(total, pair_fails);
  v.fuel_limited = any_timeout.load();
  if (!failing) return v;

  const TermPtr& p = programs[*failing / target_ctxs.size()];
  const Ctx& ct = target_ctxs[*failing % target_ctxs.size()];
  v.holds = false;
  Witness w;
  w.add("program", render_term(p));
  w.add("target-context", render_ctx(ct));
  const Behavior lhs = beh(Lang::Target, ct, compile(c, p), space);
  w.add("compiled", render_term(compile(c, p)));
  if (mode == RhpMode::Backtranslation) {
    const Behavior rhs = tau(beh(Lang::Source, backtranslate(ct), p, space));
    for (std::size_t i = 0; i < lhs.traces.size(); ++i) {
      if (lhs.traces[i] == rhs.traces[i]) continue;
      w.add("store", render_store(space.at(i), u));
      w.add("target-trace", render_trace(lhs.traces[i], u));
      w.add("tau-source-trace", render_trace(rhs.traces[i], u));
      break;
    }
  } else {
    w.add("note", "no enumerated source context matches the target behavior");
  }
  v.witness = std::move(w);
  return v;
}

Verdict check_preservation(CompilerId c, const Hyperproperty& h, const Universe& u) {
  const auto programs = enumerate_terms(u, Lang::Source);
  std::atomic<bool> any_timeout{false};

  auto program_fails = [&](std::size_t idx) {
    const TermPtr& p = programs[idx];
    const Verdict source_v = robust_sat(Lang::Source, p, h, u);
    if (source_v.fuel_limited) any_timeout = true;
    if (!source_v.holds) return false;  // not in the premise set
    const Verdict target_v = robust_sat(Lang::Target, compile(c, p), h, u);
    if (target_v.fuel_limited) any_timeout = true;
    return !target_v.holds;
  };

  Verdict v;
  const auto failing = par::first_failure(programs.size(), program_fails);
  v.fuel_limited = any_timeout.load();
  if (!failing) return v;

  const TermPtr& p = programs[*failing];
  v.holds = false;
  Witness w;
  w.add("program", render_term(p));
  w.add("compiled", render_term(compile(c, p)));
  const Verdict target_v = robust_sat(Lang::Target, compile(c, p), h, u);
  if (target_v.witness) {
    for (const auto& [k, val] : target_v.witness->fields) {
      if (k == "program") continue;
      w.add(k, val);
    }
  }
  v.witness = std::move(w);
  return v;
}

std::string fac_direction_name(FacDirection d) {
  switch (d) {
    case FacDirection::Preserve: return "preserve";
    case FacDirection::Reflect: return "reflect";
    case FacDirection::Both: return "both";
  }
  return "?";
}

BehaviorFamilies behavior_families(CompilerId c, const Universe& u,
                                   const std::vector<TermPtr>& programs) {
  const StoreSpace space(u);
  const auto source_ctxs = enumerate_ctxs(u, Lang::Source);
  const auto target_ctxs = enumerate_ctxs(u, Lang::Target);
  BehaviorFamilies fam;
  fam.source.resize(programs.size());
  fam.target.resize(programs.size());
  std::atomic<bool> any_timeout{false};
  par::for_each_index(programs.size(), [&](std::size_t i) {
    fam.source[i].reserve(source_ctxs.size());
    for (const Ctx& cs : source_ctxs) {
      const Behavior b = beh(Lang::Source, cs, programs[i], space);
      if (b.fuel_limited()) any_timeout = true;
      fam.source[i].push_back(behavior_digest(b));
    }
    const TermPtr compiled = compile(c, programs[i]);
    fam.target[i].reserve(target_ctxs.size());
    for (const Ctx& ct : target_ctxs) {
      const Behavior b = beh(Lang::Target, ct, compiled, space);
      if (b.fuel_limited()) any_timeout = true;
      fam.target[i].push_back(behavior_digest(b));
    }
  });
  fam.fuel_limited = any_timeout.load();
  return fam;
}

namespace {

// One direction of the full-abstraction check: programs whose `from`
// families agree must have agreeing `to` families. Witnesses are verified
// exactly before being reported.
std::optional<Witness> fac_direction(const std::vector<TermPtr>& programs,
                                     const std::vector<std::vector<Digest>>& from,
                                     const std::vector<std::vector<Digest>>& to,
                                     CompilerId c, Lang to_lang, const Universe& u) {
  const StoreSpace space(u);
  const auto to_ctxs = enumerate_ctxs(u, to_lang);
  std::map<std::vector<Digest>, std::size_t> rep;  // family -> first program
  for (std::size_t i = 0; i < programs.size(); ++i) {
    const auto [it, inserted] = rep.try_emplace(from[i], i);
    if (inserted) continue;
    const std::size_t j = it->second;
    if (to[j] == to[i]) continue;
    for (std::size_t k = 0; k < to_ctxs.size(); ++k) {
      if (to[j][k] == to[i][k]) continue;
      const TermPtr pj = to_lang == Lang::Target ? compile(c, programs[j]) : programs[j];
      const TermPtr pi = to_lang == Lang::Target ? compile(c, programs[i]) : programs[i];
      const Behavior bj = beh(to_lang, to_ctxs[k], pj, space);
      const Behavior bi = beh(to_lang, to_ctxs[k], pi, space);
      if (bj == bi) throw std::logic_error("behavior digest collision");
      Witness w;
      w.add("program1", render_term(programs[j]));
      w.add("program2", render_term(programs[i]));
      w.add("distinguishing-context", render_ctx(to_ctxs[k]));
      for (std::size_t s = 0; s < bj.traces.size(); ++s) {
        if (bj.traces[s] == bi.traces[s]) continue;
        w.add("store", render_store(space.at(s), u));
        w.add("trace1", render_trace(bj.traces[s], u));
        w.add("trace2", render_trace(bi.traces[s], u));
        break;
      }
      return w;
    }
  }
  return std::nullopt;
}

} // namespace

Verdict check_fac(CompilerId c, const Universe& u, FacDirection direction) {
  const auto programs = enumerate_terms(u, Lang::Source);
  const BehaviorFamilies fam = behavior_families(c, u, programs);
  Verdict v;
  v.fuel_limited = fam.fuel_limited;
  if (direction == FacDirection::Preserve || direction == FacDirection::Both) {
    if (auto w = fac_direction(programs, fam.source, fam.target, c, Lang::Target, u)) {
      v.holds = false;
      w->add("direction", "preserve");
      v.witness = std::move(w);
      return v;
    }
  }
  if (direction == FacDirection::Reflect || direction == FacDirection::Both) {
    if (auto w = fac_direction(programs, fam.target, fam.source, c, Lang::Source, u)) {
      v.holds = false;
      w->add("direction", "reflect");
      v.witness = std::move(w);
      return v;
    }
  }
  return v;
}

} // namespace sclab
