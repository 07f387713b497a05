#include "sclab/config.hpp"

#include <fstream>

namespace sclab {

Config fixture_config() {
  Config c;
  c.universe.vars = {{"h", Level::High}, {"l", Level::Low}};
  c.universe.vmax = 63;
  c.universe.fuel = 64;
  c.universe.term_depth = 4;
  c.universe.ctx_depth = 2;
  c.universe.literal_pool = {0, 1, 2, 42};
  c.universe.enumeration_cap = 1u << 20;
  c.universe.validate();
  return c;
}

nlohmann::json config_to_json(const Config& c) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : c.universe.vars) {
    vars.push_back({{"name", v.name}, {"level", v.level == Level::High ? "high" : "low"}});
  }
  return nlohmann::json{
      {"vars", vars},
      {"vmax", c.universe.vmax},
      {"fuel", c.universe.fuel},
      {"term_depth", c.universe.term_depth},
      {"ctx_depth", c.universe.ctx_depth},
      {"literal_pool", c.universe.literal_pool},
      {"enumeration_cap", c.universe.enumeration_cap},
      {"format", c.format == OutputFormat::Json ? "json" : "text"},
  };
}

Config config_from_json(const nlohmann::json& j) {
  Config c;
  try {
    c.universe.vars.clear();
    for (const auto& v : j.at("vars")) {
      const std::string level = v.at("level").get<std::string>();
      if (level != "high" && level != "low")
        throw ConfigError("config: level must be 'high' or 'low'");
      c.universe.vars.push_back(
          {v.at("name").get<std::string>(), level == "high" ? Level::High : Level::Low});
    }
    c.universe.vmax = j.at("vmax").get<uint32_t>();
    c.universe.fuel = j.at("fuel").get<uint32_t>();
    c.universe.term_depth = j.at("term_depth").get<uint32_t>();
    c.universe.ctx_depth = j.at("ctx_depth").get<uint32_t>();
    c.universe.literal_pool = j.at("literal_pool").get<std::vector<uint32_t>>();
    if (j.contains("enumeration_cap"))
      c.universe.enumeration_cap = j.at("enumeration_cap").get<uint64_t>();
    if (j.contains("format")) {
      const std::string f = j.at("format").get<std::string>();
      if (f == "json") c.format = OutputFormat::Json;
      else if (f == "text") c.format = OutputFormat::Text;
      else throw ConfigError("config: format must be 'text' or 'json'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.universe.validate();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config_from_json(j);
}

} // namespace sclab
