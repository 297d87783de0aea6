#include "cli_config.hpp"

#include <nlohmann/json.hpp>

namespace usfda::cli {
namespace {

using nlohmann::json;

void flatten(const json& j, const std::string& name, const std::vector<std::string>& parents,
             std::vector<CLI::ConfigItem>& out) {
  if (j.is_object()) {
    auto next = parents;
    if (!name.empty()) next.push_back(name);
    for (const auto& [key, value] : j.items()) flatten(value, key, next, out);
    return;
  }
  if (name.empty()) throw CLI::ConversionError("config file must hold a JSON object");
  CLI::ConfigItem item;
  item.name = name;
  item.parents = parents;
  if (j.is_string()) {
    item.inputs = {j.get<std::string>()};
  } else if (j.is_boolean() || j.is_number()) {
    item.inputs = {j.dump()};
  } else if (j.is_array()) {
    for (const auto& v : j) item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  } else {
    throw CLI::ConversionError("unsupported value for config key '" + name + "'");
  }
  out.push_back(std::move(item));
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const {
  json j = json::object();
  for (const CLI::Option* opt : app->get_options({})) {
    if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
    const std::string name = opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto& results = opt->results();
      j[name] = results.size() == 1 ? json(results.front()) : json(results);
    } else if (default_also && !opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    }
  }
  return j.dump(2);
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  json j;
  try {
    j = json::parse(input);
  } catch (const json::exception& e) {
    throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
  }
  std::vector<CLI::ConfigItem> items;
  flatten(j, "", {}, items);
  return items;
}

}  // namespace usfda::cli
