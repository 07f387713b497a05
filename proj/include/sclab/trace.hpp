#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sclab/opsem.hpp"
#include "sclab/syntax.hpp"

namespace sclab {

enum class Terminator : uint8_t { Tick, Timeout };

// One abstract execution trace: the initial store, then for every step the
// event (when not silent) followed by the resulting store, then either
// normal termination or the fuel marker.
struct Trace {
  struct Elem {
    enum class Kind : uint8_t { State, H, Bang };
    Kind kind = Kind::State;
    Store store;  // meaningful only for Kind::State

    bool operator==(const Elem& o) const {
      if (kind != o.kind) return false;
      return kind != Kind::State || store == o.store;
    }
  };

  std::vector<Elem> elems;  // first element is always a state
  Terminator term = Terminator::Tick;

  bool operator==(const Trace& o) const { return term == o.term && elems == o.elems; }
  bool operator<(const Trace& o) const;

  bool has_event(Event e) const;
  bool fuel_limited() const { return term == Terminator::Timeout; }
  const Store& initial() const { return elems.front().store; }
};

// The whole behavior of one program in one context: exactly one trace per
// initial store, kept in store-enumeration order. Determinism makes this
// vector an exact representation of the trace set.
struct Behavior {
  std::vector<Trace> traces;

  bool operator==(const Behavior& o) const { return traces == o.traces; }
  bool fuel_limited() const;
};

// Fuel-bounded execution from one initial store. When `rules` is given it
// receives the identifier of the rule fired at each step.
Trace run(Lang lang, const Store& s0, const TermPtr& p, uint32_t fuel, const Universe& u,
          std::vector<std::string>* rules = nullptr);

// Behavior of p plugged into c, over every initial store of the space.
Behavior beh(Lang lang, const Ctx& c, const TermPtr& p, const StoreSpace& space);

// Deletes every internal H element; observable events and states remain.
Trace erase_h(const Trace& t);
Behavior erase_h(const Behavior& b);

// Text format, one token per element: `{h=1,l=0} #H {h=42,l=0} OK`,
// with `!` for the reported event and `TIMEOUT` for fuel exhaustion.
std::string render_trace(const Trace& t, const Universe& u);
Trace parse_trace(const std::string& text, const Universe& u);
std::vector<std::string> trace_tokens(const Trace& t, const Universe& u);

// One rendered trace per line, in store-enumeration order.
std::string render_behavior(const Behavior& b, const Universe& u);

// Canonical compact byte encodings; equal encodings iff equal values.
std::string encode_trace(const Trace& t);
std::string encode_behavior(const Behavior& b);

// 128-bit content digest of the canonical encoding, used to group and
// deduplicate behaviors without keeping them in memory.
struct Digest {
  uint64_t hi = 0;
  uint64_t lo = 0;
  auto operator<=>(const Digest&) const = default;
};
Digest digest_bytes(const std::string& bytes);
Digest behavior_digest(const Behavior& b);
std::string digest_hex(const Digest& d);

// The fuel-bounded trace universe: every distinct trace producible by an
// enumerated term of the language from some initial store, plus its
// observable image. gamma is relative to this bounded universe.
struct TraceUniverse {
  Lang lang;
  std::vector<Trace> abstract_traces;    // sorted, duplicate-free
  std::vector<Trace> observable_traces;  // H-erased image, sorted, duplicate-free
};
TraceUniverse trace_universe(Lang lang, const Universe& u);

// Abstraction: per-trace H erasure, as a set image.
std::vector<Trace> galois_alpha(const std::vector<Trace>& traces);
// Concretization: every abstract trace of the bounded universe whose
// erasure lies in the argument.
std::vector<Trace> galois_gamma(const std::vector<Trace>& observable, const TraceUniverse& tu);

} // namespace sclab
