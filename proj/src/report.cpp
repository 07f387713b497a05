#include "sclab/report.hpp"

namespace sclab {

nlohmann::json witness_to_json(const Witness& w) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : w.fields) j[k] = v;
  return j;
}

std::string witness_to_text(const Witness& w, const std::string& indent) {
  std::string out;
  for (const auto& [k, v] : w.fields) {
    out += indent;
    out += k;
    out += ": ";
    out += v;
    out += "\n";
  }
  return out;
}

nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json j{{"holds", v.holds}, {"fuel_limited", v.fuel_limited}};
  if (v.witness) j["witness"] = witness_to_json(*v.witness);
  return j;
}

std::string verdict_to_text(const Verdict& v) {
  std::string out = v.holds ? "holds" : "fails";
  if (v.fuel_limited) out += " (fuel-limited)";
  out += "\n";
  if (v.witness) {
    out += "witness:\n";
    out += witness_to_text(*v.witness, "  ");
  }
  return out;
}

nlohmann::json Report::to_json(bool with_timings) const {
  nlohmann::json j{{"command", command}, {"bounds", bounds}, {"ok", ok}, {"result", body}};
  if (with_timings) j["wall_ms"] = wall_ms;
  return j;
}

} // namespace sclab
