#include "scenestat/cli.h"

#include <iostream>

#include "CLI11.hpp"
#include "scenestat/commands.h"
#include "scenestat/error.h"

namespace scenestat::cli {

namespace {

constexpr const char* kEnvPrefix = "SCENESTAT_";

std::string env_name(std::string flag) {
  for (auto& ch : flag) ch = ch == '-' ? '_' : static_cast<char>(std::toupper(ch));
  return kEnvPrefix + flag;
}

// Every flag also reads SCENESTAT_<FLAG> when absent from the command line.
template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env_name(name));
}

int run_manifest(const std::string& path, std::ostream& out, std::ostream& err);

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"scenestat: natural scene statistics, algorithmic complexity and subjective "
               "randomness"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  ScanOptions scan;
  auto* scan_cmd = app.add_subcommand("scan", "Tally k×k binary patches over a PGM corpus");
  flag(scan_cmd, "corpus", scan.corpus, "Directory of .pgm files or a manifest listing paths")
      ->required();
  flag(scan_cmd, "k", scan.k, "Patch side")->check(CLI::Range(2, 4));
  flag(scan_cmd, "mode", scan.mode, "tiled or sliding")
      ->check(CLI::IsMember({"tiled", "sliding"}));
  flag(scan_cmd, "out", scan.out, "Frequency CSV to write")->required();
  flag(scan_cmd, "threads", scan.threads, "Worker threads (0 = all cores)");

  CtmOptions ctm;
  auto* ctm_cmd = app.add_subcommand("ctm", "Estimate CTM values by sampling random turmites");
  flag(ctm_cmd, "k", ctm.k, "Output array side")->check(CLI::Range(1, 3));
  flag(ctm_cmd, "states", ctm.states, "Machine states")->check(CLI::Range(1, 64));
  flag(ctm_cmd, "samples", ctm.samples, "Machines to draw")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  flag(ctm_cmd, "steps", ctm.steps, "Step budget per machine")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 32));
  flag(ctm_cmd, "seed", ctm.seed, "Sampler seed");
  flag(ctm_cmd, "out", ctm.out, "CTM CSV to write")->required();
  flag(ctm_cmd, "threads", ctm.threads, "Worker threads (0 = all cores)");

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Complexity and natural randomness per pattern");
  flag(score_cmd, "freq", score.freq, "Frequency CSV")->required();
  flag(score_cmd, "ctm", score.ctm, "CTM CSV")->required();
  flag(score_cmd, "stimuli", score.stimuli, "Stimulus set JSON (default: all observed patterns)");
  flag(score_cmd, "alpha", score.alpha, "Add-alpha smoothing of natural frequencies")
      ->check(CLI::NonNegativeNumber);
  flag(score_cmd, "log-base", score.log_base, "2 or e")->check(CLI::IsMember({"2", "e"}));
  flag(score_cmd, "out", score.out, "Scores CSV to write")->required();

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a frequency-weighted stimulus set");
  flag(sample_cmd, "freq", sample.freq, "Frequency CSV")->required();
  flag(sample_cmd, "n", sample.n, "Distinct patterns to draw")->check(CLI::PositiveNumber);
  flag(sample_cmd, "seed", sample.seed, "Sampling seed");
  flag(sample_cmd, "id", sample.id, "Stimulus set id");
  flag(sample_cmd, "out", sample.out, "Stimulus set JSON to write")->required();

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Correlations and mediation analysis");
  flag(analyze_cmd, "scores", analyze.scores, "Scores CSV")->required();
  flag(analyze_cmd, "aggregates", analyze.aggregates, "Judgment aggregates CSV")->required();
  flag(analyze_cmd, "out-dir", analyze.out_dir, "Directory for the report and plots")->required();
  flag(analyze_cmd, "log-base", analyze.log_base, "2 or e")->check(CLI::IsMember({"2", "e"}));

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the judgment experiment HTTP service");
  flag(serve_cmd, "data-dir", serve.data_dir, "Existing directory for sets and the event log")
      ->required();
  flag(serve_cmd, "host", serve.host, "Listen address");
  flag(serve_cmd, "port", serve.port, "Listen port")->check(CLI::Range(0, 65535));
  flag(serve_cmd, "seed", serve.seed, "Master seed for presentation orders");
  flag(serve_cmd, "static-dir", serve.static_dir, "Participant UI assets to serve at /");
  flag(serve_cmd, "import-set", serve.import_sets, "Stimulus set JSON to register (repeatable)");

  std::string manifest;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a subcommand from its run manifest");
  replay_cmd->add_option("manifest", manifest, "A *.manifest.json file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << "run 'scenestat " << sub->get_name() << " --help' for usage\n";
    }
    return kExitUsage;
  }

  try {
    if (*scan_cmd) cmd_scan(scan, err);
    else if (*ctm_cmd) cmd_ctm(ctm, err);
    else if (*score_cmd) cmd_score(score, err);
    else if (*sample_cmd) cmd_sample(sample, err);
    else if (*analyze_cmd) cmd_analyze(analyze, err);
    else if (*serve_cmd) cmd_serve(serve, err);
    else if (*replay_cmd) return run_manifest(manifest, out, err);
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

namespace {

int run_manifest(const std::string& path, std::ostream& out, std::ostream& err) {
  pipeline::RunManifest m;
  try {
    m = pipeline::manifest_from_json(read_text_file(path));
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (m.command == "replay") {
    err << "error: a manifest cannot replay another replay\n";
    return kExitUsage;
  }
  std::vector<std::string> args{m.command};
  for (const auto& [key, value] : m.options) {
    args.push_back("--" + key);
    args.push_back(value);
  }
  return run(args, out, err);
}

}  // namespace

}  // namespace scenestat::cli
