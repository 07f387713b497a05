#pragma once

#include <json.hpp>

#include "sclab/config.hpp"
#include "sclab/hyperprop.hpp"

namespace sclab {

nlohmann::json witness_to_json(const Witness& w);
std::string witness_to_text(const Witness& w, const std::string& indent);
nlohmann::json verdict_to_json(const Verdict& v);
std::string verdict_to_text(const Verdict& v);

// Envelope for one CLI invocation. The JSON rendering carries everything
// the text rendering shows; wall time is attached only on request so equal
// inputs produce byte-identical reports.
struct Report {
  std::string command;
  nlohmann::json bounds;
  nlohmann::json body;
  std::string text;
  bool ok = true;
  double wall_ms = 0.0;

  nlohmann::json to_json(bool with_timings) const;
};

} // namespace sclab
