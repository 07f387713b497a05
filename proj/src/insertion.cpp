#include "sclab/insertion.hpp"

#include <algorithm>
#include <random>

#include "sclab/text.hpp"

namespace sclab {

namespace {

std::vector<Trace> sorted(std::vector<Trace> ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

bool same_trace_set(const std::vector<Trace>& a, const std::vector<Trace>& b) {
  return sorted(a) == sorted(b);
}

// One property-level round trip through the real maps.
bool roundtrip_ok(const std::vector<Trace>& y, const TraceUniverse& tu) {
  return same_trace_set(galois_alpha(galois_gamma(y, tu)), y);
}

std::vector<Trace> subset_from_mask(const std::vector<Trace>& universe, uint64_t mask) {
  std::vector<Trace> out;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (mask & (uint64_t{1} << i)) out.push_back(universe[i]);
  }
  return out;
}

Witness property_witness(const std::vector<Trace>& y, const Universe& u) {
  Witness w;
  std::string rendered;
  for (const auto& t : y) {
    if (!rendered.empty()) rendered += " | ";
    rendered += render_trace(t, u);
  }
  w.add("observable-set", rendered.empty() ? "(empty)" : rendered);
  w.add("note", "abstraction of the concretization differs from the set");
  return w;
}

} // namespace

InsertionResult check_insertion_sampled(Lang lang, const Universe& u, std::size_t samples,
                                        uint64_t seed) {
  const TraceUniverse tu = trace_universe(lang, u);
  InsertionResult res;
  res.abstract_count = tu.abstract_traces.size();
  res.observable_count = tu.observable_traces.size();

  std::mt19937_64 rng(seed);
  const std::size_t n = tu.observable_traces.size();
  std::uniform_int_distribution<std::size_t> member_count(1, 4);
  std::uniform_int_distribution<std::size_t> set_size(0, std::min<std::size_t>(n, 8));
  std::uniform_int_distribution<std::size_t> pick(0, n == 0 ? 0 : n - 1);

  for (std::size_t k = 0; k < samples; ++k) {
    // One random hyperproperty: a few random observable sets.
    std::vector<std::vector<Trace>> members;
    const std::size_t mcount = member_count(rng);
    for (std::size_t m = 0; m < mcount; ++m) {
      std::vector<std::size_t> idx;
      const std::size_t sz = set_size(rng);
      while (idx.size() < sz) {
        const std::size_t i = pick(rng);
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
      }
      std::vector<Trace> y;
      for (std::size_t i : idx) y.push_back(tu.observable_traces[i]);
      members.push_back(std::move(y));
    }

    // Lifted round trip: concretize and re-abstract every member, then
    // compare the two hyperproperties as sets of trace sets.
    std::vector<std::vector<Trace>> before;
    std::vector<std::vector<Trace>> after;
    for (const auto& y : members) {
      before.push_back(sorted(y));
      after.push_back(sorted(galois_alpha(galois_gamma(y, tu))));
      res.property_sets_checked += 1;
    }
    std::sort(before.begin(), before.end());
    before.erase(std::unique(before.begin(), before.end()), before.end());
    std::sort(after.begin(), after.end());
    after.erase(std::unique(after.begin(), after.end()), after.end());
    res.hyperproperties_checked += 1;
    if (before != after) {
      res.verdict.holds = false;
      Witness w = property_witness(members.front(), u);
      w.add("sample", std::to_string(k));
      res.verdict.witness = std::move(w);
      return res;
    }
  }
  return res;
}

InsertionResult check_insertion_exhaustive(Lang lang, const Universe& u) {
  const TraceUniverse tu = trace_universe(lang, u);
  InsertionResult res;
  res.abstract_count = tu.abstract_traces.size();
  res.observable_count = tu.observable_traces.size();

  const std::size_t n = tu.observable_traces.size();
  if (n > 20)
    throw CapExceeded("insertion: observable universe too large for exhaustive subsets (" +
                      std::to_string(n) + " traces)");

  // Every observable property set.
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    const std::vector<Trace> y = subset_from_mask(tu.observable_traces, mask);
    res.property_sets_checked += 1;
    if (!roundtrip_ok(y, tu)) {
      res.verdict.holds = false;
      res.verdict.witness = property_witness(y, u);
      return res;
    }
  }

  // Every hyperproperty, when the power set of the power set is small.
  if (n <= 4) {
    const uint64_t property_count = uint64_t{1} << n;
    for (uint64_t hmask = 0; hmask < (uint64_t{1} << property_count); ++hmask) {
      std::vector<std::vector<Trace>> before;
      std::vector<std::vector<Trace>> after;
      for (uint64_t pmask = 0; pmask < property_count; ++pmask) {
        if (!(hmask & (uint64_t{1} << pmask))) continue;
        const std::vector<Trace> y = subset_from_mask(tu.observable_traces, pmask);
        before.push_back(sorted(y));
        after.push_back(sorted(galois_alpha(galois_gamma(y, tu))));
      }
      std::sort(before.begin(), before.end());
      std::sort(after.begin(), after.end());
      res.hyperproperties_checked += 1;
      if (before != after) {
        res.verdict.holds = false;
        Witness w;
        w.add("hyperproperty-mask", std::to_string(hmask));
        w.add("note", "lifted round trip differs");
        res.verdict.witness = std::move(w);
        return res;
      }
    }
  }
  return res;
}

} // namespace sclab
