#pragma once

#include <string>
#include <vector>

#include "sclab/config.hpp"

namespace sclab {

// One row of the reproduction suite. Rows whose expectation is a failure
// count as green when the underlying check fails and the documented
// counterexample is itself verified against the semantics.
struct ReproRow {
  std::string id;
  int criterion = 0;  // acceptance criterion this row realizes, 1..12
  std::string description;
  std::string expectation;
  bool ok = false;
  std::string detail;
  double wall_ms = 0.0;
};

std::vector<std::string> repro_row_ids();

// Runs the suite (scope "all" or one row id) against the given base
// configuration; rows that the acceptance criteria pin to reduced bounds
// derive those bounds from the base configuration.
std::vector<ReproRow> run_repro(const std::string& scope, const Config& base);

// Expected behavior text of the two reference programs, built from the
// closed-form description rather than the interpreter: assigning 42 to the
// private variable updates it and flags the change exactly when the value
// differs, and the observer reports the flag.
std::string golden_behavior_source_assign42(const Universe& u);
std::string golden_behavior_target_obs_assign42(const Universe& u);

} // namespace sclab
