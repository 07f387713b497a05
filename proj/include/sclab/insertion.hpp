#pragma once

#include "sclab/hyperprop.hpp"

namespace sclab {

// Round-trip law of the abstraction/concretization pair between the
// bounded abstract trace universe and its observable image: abstracting a
// concretized observable set gives the set back, and likewise for the
// lifted maps on hyperproperties.
struct InsertionResult {
  std::size_t abstract_count = 0;
  std::size_t observable_count = 0;
  std::size_t property_sets_checked = 0;
  std::size_t hyperproperties_checked = 0;
  Verdict verdict;
};

// Random observable hyperproperties (small collections of random subsets
// of the observable universe), fixed seed for reproducibility.
InsertionResult check_insertion_sampled(Lang lang, const Universe& u, std::size_t samples,
                                        uint64_t seed);

// Every subset of the observable universe, and every hyperproperty over it
// when the universe is small enough for that to be feasible. Throws
// CapExceeded when the observable universe is too large to exhaust.
InsertionResult check_insertion_exhaustive(Lang lang, const Universe& u);

} // namespace sclab
