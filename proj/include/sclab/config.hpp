#pragma once

#include <json.hpp>

#include "sclab/universe.hpp"

namespace sclab {

enum class OutputFormat : uint8_t { Text, Json };

struct Config {
  Universe universe;
  OutputFormat format = OutputFormat::Text;
};

// The configuration the reproduction suite runs under: two variables (one
// private, one public), values 0..63, fuel 64, terms of at most four AST
// nodes, observer chains of at most two layers, literals {0, 1, 2, 42}.
Config fixture_config();

nlohmann::json config_to_json(const Config& c);
Config config_from_json(const nlohmann::json& j);
Config load_config(const std::string& path);

} // namespace sclab
