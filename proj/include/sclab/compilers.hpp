#pragma once

#include "sclab/hyperprop.hpp"

namespace sclab {

// The two translations under study. Identity embeds source programs into
// the target unchanged; Sandbox additionally wraps every assignment in the
// sandbox construct, suppressing the internal H event at its origin. Both
// act homomorphically on all other constructors.
enum class CompilerId : uint8_t { Identity, Sandbox };

std::string compiler_name(CompilerId c);
CompilerId compiler_from_name(const std::string& name);

TermPtr compile(CompilerId c, const TermPtr& source_term);

// Behavior translation: per-trace deletion of every internal H. Rejects
// behaviors containing the target-only ! event.
Behavior tau(const Behavior& source_behavior);

// Context back-translation: every target context maps to the identity
// source context.
Ctx backtranslate(const Ctx& target_ctx);

enum class RhpMode : uint8_t { Search, Backtranslation };

// Robust hyperproperty preservation in its property-free form: for every
// enumerated source program and target context there must be a source
// context whose behavior, translated by tau, matches the target behavior
// of the compiled program. Search mode looks for the source context among
// the enumerated ones; backtranslation mode commits to backtranslate().
Verdict check_rhp(CompilerId c, const Universe& u, RhpMode mode);

// For every enumerated source program that robustly satisfies h, the
// compiled program must robustly satisfy h in the target.
Verdict check_preservation(CompilerId c, const Hyperproperty& h, const Universe& u);

enum class FacDirection : uint8_t { Preserve, Reflect, Both };

std::string fac_direction_name(FacDirection d);

// Full abstraction over the bounded enumeration: source contextual
// equivalence of program pairs implies (preserve), is implied by (reflect),
// or coincides with (both) target contextual equivalence of their
// compilations.
Verdict check_fac(CompilerId c, const Universe& u, FacDirection direction);

// Per-program behavior families used by check_fac, the compatibility
// relation and the tau-tilde construction: the digests of beh under every
// source context and under every target context (of the compiled program).
struct BehaviorFamilies {
  std::vector<std::vector<Digest>> source;  // [program][source ctx]
  std::vector<std::vector<Digest>> target;  // [program][target ctx]
  bool fuel_limited = false;
};
BehaviorFamilies behavior_families(CompilerId c, const Universe& u,
                                   const std::vector<TermPtr>& programs);

} // namespace sclab
