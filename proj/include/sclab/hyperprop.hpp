#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sclab/trace.hpp"

namespace sclab {

// Low-equivalence: agreement on the public part of the state. On traces it
// ignores internal H elements, requires equal length after erasure, and
// compares the remaining observables pointwise; the terminators must match.
bool low_eq(const Store& a, const Store& b, const Universe& u);
bool low_eq(const Trace& a, const Trace& b, const Universe& u);

// Ordered label/value pairs explaining a failed check. Values are rendered
// in the concrete syntax so they can be replayed through `run` and `beh`.
struct Witness {
  std::vector<std::pair<std::string, std::string>> fields;

  void add(std::string label, std::string value) {
    fields.emplace_back(std::move(label), std::move(value));
  }
};

struct Verdict {
  bool holds = true;
  bool fuel_limited = false;
  std::optional<Witness> witness;
};

// An extensionally given set of behaviors, stored as canonical encodings.
struct ExplicitSet {
  std::vector<std::string> encoded;  // sorted, duplicate-free

  static ExplicitSet from_behaviors(const std::vector<Behavior>& bs);
  void insert(const Behavior& b);
  bool contains(const Behavior& b) const;
  std::size_t size() const { return encoded.size(); }
};

struct Hyperproperty {
  enum class Kind : uint8_t { NI, Top, NeverEvent, Explicit };

  Kind kind = Kind::Top;
  Event never = Event::Bang;
  std::shared_ptr<const ExplicitSet> members;

  static Hyperproperty ni() { return {Kind::NI, Event::Bang, nullptr}; }
  static Hyperproperty top() { return {Kind::Top, Event::Bang, nullptr}; }
  static Hyperproperty never_event(Event e) { return {Kind::NeverEvent, e, nullptr}; }
  static Hyperproperty explicit_set(std::shared_ptr<const ExplicitSet> s) {
    return {Kind::Explicit, Event::Bang, std::move(s)};
  }

  std::string name() const;
};

// Membership of a whole behavior in the hyperproperty.
bool sat(const Behavior& b, const Hyperproperty& h, const Universe& u);

// First noninterference violation in store-enumeration order: a pair of
// trace indices whose initial stores are low-equivalent but whose traces
// are not. nullopt when the behavior satisfies NI.
std::optional<std::pair<std::size_t, std::size_t>> ni_violation(const Behavior& b,
                                                                const Universe& u);

// Satisfaction under every enumerated context of the language.
Verdict robust_sat(Lang lang, const TermPtr& p, const Hyperproperty& h, const Universe& u);

// Equality of behaviors under every enumerated context.
Verdict ctx_equiv(Lang lang, const TermPtr& p1, const TermPtr& p2, const Universe& u);

} // namespace sclab
