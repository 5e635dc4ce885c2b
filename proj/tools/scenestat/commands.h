#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scenestat/log_base.h"
#include "scenestat/pipeline/manifest.h"

namespace scenestat::cli {

struct ScanOptions {
  std::filesystem::path corpus;
  int k = 4;
  std::string mode = "tiled";
  std::filesystem::path out;
  unsigned threads = 0;
};

struct CtmOptions {
  int k = 2;
  int states = 4;
  std::uint64_t samples = 1'000'000;
  std::uint64_t steps = 500;
  std::uint64_t seed = 1729;
  std::filesystem::path out;
  unsigned threads = 0;
};

struct ScoreOptions {
  std::filesystem::path freq;
  std::filesystem::path ctm;
  std::optional<std::filesystem::path> stimuli;
  double alpha = 1.0;
  std::string log_base = "2";
  std::filesystem::path out;
};

struct SampleOptions {
  std::filesystem::path freq;
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::string id = "stimuli";
  std::filesystem::path out;
};

struct AnalyzeOptions {
  std::filesystem::path scores;
  std::filesystem::path aggregates;
  std::filesystem::path out_dir;
  std::string log_base = "2";
};

struct ServeOptions {
  std::filesystem::path data_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> static_dir;
  std::vector<std::filesystem::path> import_sets;
};

// Each command writes its outputs plus a RunManifest next to the primary
// output, and returns the manifest.
pipeline::RunManifest cmd_scan(const ScanOptions& o, std::ostream& log);
pipeline::RunManifest cmd_ctm(const CtmOptions& o, std::ostream& log);
pipeline::RunManifest cmd_score(const ScoreOptions& o, std::ostream& log);
pipeline::RunManifest cmd_sample(const SampleOptions& o, std::ostream& log);
pipeline::RunManifest cmd_analyze(const AnalyzeOptions& o, std::ostream& log);

/// Blocks until SIGINT/SIGTERM, then snapshots the store.
void cmd_serve(const ServeOptions& o, std::ostream& log);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace scenestat::cli
