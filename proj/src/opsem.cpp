#include "sclab/opsem.hpp"

#include <variant>

namespace sclab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

StepOutcome step_assign(const TermAssign& a, const Store& s, const Universe& u) {
  const std::size_t vi = u.var_index(a.var);
  const uint32_t val = eval_expr(a.expr, s, u);
  StepOutcome out{s, Event::Silent, nullptr, ""};
  if (u.is_high(vi)) {
    if (s.get(vi) != val) {
      out.store.set(vi, static_cast<uint16_t>(val));
      out.event = Event::H;
      out.rule = "asnH";
    } else {
      out.rule = "asnH-eq";
    }
  } else {
    out.store.set(vi, static_cast<uint16_t>(val));
    out.rule = reads_high(a.expr, u) ? "asnL-hi" : "asnL";
  }
  return out;
}

} // namespace

std::string event_name(Event e) {
  switch (e) {
    case Event::Silent: return "silent";
    case Event::H: return "H";
    case Event::Bang: return "!";
  }
  return "?";
}

StepOutcome step(Lang lang, const Store& s, const TermPtr& p, const Universe& u) {
  return std::visit(
      overloaded{
          [&](const TermSkip&) -> StepOutcome {
            return StepOutcome{s, Event::Silent, nullptr, "skip"};
          },
          [&](const TermAssign& a) -> StepOutcome { return step_assign(a, s, u); },
          [&](const TermSeq& q) -> StepOutcome {
            StepOutcome inner = step(lang, s, q.first, u);
            if (inner.terminated()) {
              return StepOutcome{inner.store, inner.event, q.second, "seq1"};
            }
            return StepOutcome{inner.store, inner.event, seq(inner.residual, q.second), "seq2"};
          },
          [&](const TermWhile& w) -> StepOutcome {
            if (eval_expr(w.cond, s, u) == 0) {
              return StepOutcome{s, Event::Silent, skip(), "while1"};
            }
            return StepOutcome{s, Event::Silent, seq(w.body, p), "while2"};
          },
          [&](const TermObs& o) -> StepOutcome {
            if (lang != Lang::Target)
              throw std::invalid_argument("observer node is not part of the source language");
            StepOutcome inner = step(lang, s, o.body, u);
            const bool reported = inner.event == Event::H;
            StepOutcome out{inner.store, reported ? Event::Bang : inner.event, nullptr, ""};
            if (inner.terminated()) {
              out.rule = reported ? "bang1" : "obs1";
            } else {
              out.residual = obs(inner.residual);
              out.rule = reported ? "bang2" : "obs2";
            }
            return out;
          },
          [&](const TermSandbox& sb) -> StepOutcome {
            if (lang != Lang::Target)
              throw std::invalid_argument("sandbox node is not part of the source language");
            StepOutcome inner = step_assign(sb.assign, s, u);
            // The sandboxed assignment always terminates in one step, and
            // any H it produced is silenced.
            return StepOutcome{inner.store, Event::Silent, nullptr, "sb1"};
          },
      },
      p->node);
}

std::vector<std::string> matching_rules(Lang lang, const Store& s, const TermPtr& p,
                                        const Universe& u) {
  std::vector<std::string> out;
  std::visit(
      overloaded{
          [&](const TermSkip&) { out.push_back("skip"); },
          [&](const TermAssign& a) {
            const std::size_t vi = u.var_index(a.var);
            const bool high = u.is_high(vi);
            const bool changes = s.get(vi) != eval_expr(a.expr, s, u);
            const bool high_rhs = reads_high(a.expr, u);
            if (!high && !high_rhs) out.push_back("asnL");
            if (!high && high_rhs) out.push_back("asnL-hi");
            if (high && changes) out.push_back("asnH");
            if (high && !changes) out.push_back("asnH-eq");
          },
          [&](const TermSeq& q) {
            const StepOutcome inner = step(lang, s, q.first, u);
            if (inner.terminated()) out.push_back("seq1");
            if (!inner.terminated()) out.push_back("seq2");
          },
          [&](const TermWhile& w) {
            if (eval_expr(w.cond, s, u) == 0) out.push_back("while1");
            if (eval_expr(w.cond, s, u) != 0) out.push_back("while2");
          },
          [&](const TermObs& o) {
            if (lang != Lang::Target) return;
            const StepOutcome inner = step(lang, s, o.body, u);
            const bool reported = inner.event == Event::H;
            if (reported && inner.terminated()) out.push_back("bang1");
            if (reported && !inner.terminated()) out.push_back("bang2");
            if (!reported && inner.terminated()) out.push_back("obs1");
            if (!reported && !inner.terminated()) out.push_back("obs2");
          },
          [&](const TermSandbox&) {
            if (lang != Lang::Target) return;
            out.push_back("sb1");
          },
      },
      p->node);
  return out;
}

} // namespace sclab
