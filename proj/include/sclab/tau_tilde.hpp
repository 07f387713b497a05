#pragma once

#include <functional>

#include "sclab/compilers.hpp"

namespace sclab {

// The compatibility relation between context-indexed source behavior
// families and the target families of the compiled programs, one entry per
// enumerated source program. Families are kept as digests of the canonical
// behavior encodings.
struct Comprel {
  struct Entry {
    std::size_t program;
    std::vector<Digest> source_family;
    std::vector<Digest> target_family;
  };
  std::vector<Entry> entries;
};

struct ComprelReport {
  Comprel relation;
  bool functional = true;   // equal source families never map to distinct target families
  bool injective = true;    // distinct source families never map to equal target families
  std::optional<Witness> functional_witness;
  std::optional<Witness> injective_witness;
  std::size_t distinct_source_families = 0;
  bool fuel_limited = false;
};

ComprelReport comprel_build(CompilerId c, const Universe& u);

// Streams every member of the translated hyperproperty: the behavior of
// the compiled program under every enumerated target context, for every
// enumerated source program that robustly satisfies h. `is_new` is false
// for repeats of an already-seen behavior.
struct TauTildeStats {
  std::size_t robust_programs = 0;
  std::size_t members_emitted = 0;
  std::size_t distinct_members = 0;
  bool fuel_limited = false;
};
using TauTildeVisitor =
    std::function<void(const Behavior& member, bool is_new, const TermPtr& program, const Ctx& ctx)>;
TauTildeStats tau_tilde_visit(CompilerId c, const Hyperproperty& h, const Universe& u,
                              const TauTildeVisitor& fn);

// Materializes the translated hyperproperty as an explicit behavior set.
ExplicitSet tau_tilde(CompilerId c, const Hyperproperty& h, const Universe& u);

// Decides preservation twice, independently: directly via
// check_preservation, and via the inclusion test on the streamed
// translated hyperproperty. The two answers must agree.
struct CorollaryVerdict {
  bool preservation_holds = true;
  bool inclusion_holds = true;
  bool agree = true;
  bool fuel_limited = false;
  std::optional<Witness> preservation_witness;
  std::optional<Witness> inclusion_witness;
};
CorollaryVerdict check_corollary(CompilerId c, const Hyperproperty& h, const Universe& u);

} // namespace sclab
