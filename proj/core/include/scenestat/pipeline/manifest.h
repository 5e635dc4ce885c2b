#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace scenestat::pipeline {

/// Reproducibility envelope written next to every output: the subcommand, the
/// resolved value of each of its options, and the output paths.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> options;
  std::map<std::string, std::string> outputs;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(std::string_view text);

/// `<output>.manifest.json`
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

}  // namespace scenestat::pipeline
