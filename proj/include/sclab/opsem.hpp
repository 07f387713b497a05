#pragma once

#include <string>
#include <vector>

#include "sclab/syntax.hpp"

namespace sclab {

// Trace alphabet of internal and reportable events. H flags a change to a
// high variable; only observer layers turn it into the public ! event, and
// only in the target language.
enum class Event : uint8_t { Silent, H, Bang };

std::string event_name(Event e);

struct StepOutcome {
  Store store;
  Event event = Event::Silent;
  TermPtr residual;  // null means the program terminated on this step
  const char* rule = "";

  bool terminated() const { return residual == nullptr; }
};

// One deterministic small step. Total on well-formed terms of the given
// language; throws std::invalid_argument on ill-formed input.
//
// Rule set: skip, asnL, asnH, the completion rules asnH-eq (high assignment
// that does not change the value, silent) and asnL-hi (low assignment
// reading a high variable, silent), seq1/seq2, while1/while2; target adds
// bang1/bang2 (observer converts H to !), obs1/obs2 (observer passes other
// events through, keeping the layer until its body terminates) and sb1
// (sandbox silences H around its assignment). Event labels propagate
// through seq and obs unchanged.
StepOutcome step(Lang lang, const Store& s, const TermPtr& p, const Universe& u);

// Every rule identifier whose guard holds for this configuration. step()
// fires exactly the single matching rule; the determinacy check asserts
// that this list always has length one.
std::vector<std::string> matching_rules(Lang lang, const Store& s, const TermPtr& p,
                                        const Universe& u);

} // namespace sclab
