#include "scenestat/pipeline/manifest.h"

#include "json.hpp"
#include "scenestat/error.h"

namespace scenestat::pipeline {

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["options"] = m.options;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.options = j.at("options").get<std::map<std::string, std::string>>();
    m.outputs = j.value("outputs", std::map<std::string, std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid run manifest: ") + e.what());
  }
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  auto p = output;
  p += ".manifest.json";
  return p;
}

}  // namespace scenestat::pipeline
