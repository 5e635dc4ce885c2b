#include "scenestat/commands.h"

#include <pthread.h>
#include <signal.h>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "scenestat/complexity/ctm.h"
#include "scenestat/error.h"
#include "scenestat/experiment/http_server.h"
#include "scenestat/experiment/stimulus.h"
#include "scenestat/experiment/store.h"
#include "scenestat/grid/frequency_table.h"
#include "scenestat/grid/pgm.h"
#include "scenestat/pipeline/analysis.h"
#include "scenestat/pipeline/scoring.h"

namespace scenestat::cli {

namespace fs = std::filesystem;

namespace {

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_manifest(const pipeline::RunManifest& m, const fs::path& primary) {
  write_text_file(pipeline::manifest_path_for(primary), pipeline::manifest_to_json(m));
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw InputError("write failed for " + path.string());
}

pipeline::RunManifest cmd_scan(const ScanOptions& o, std::ostream& log) {
  const auto mode = grid::parse_extraction_mode(o.mode);
  const auto paths = grid::list_corpus(o.corpus);
  std::vector<grid::GrayImage> images;
  images.reserve(paths.size());
  for (const auto& p : paths) images.push_back(grid::load_pgm_file(p));
  const auto table = grid::scan_corpus(images, o.k, mode, o.threads);
  write_text_file(o.out, grid::save_frequency_csv(table));
  log << "scanned " << images.size() << " images: " << table.total() << " patches, "
      << table.distinct() << " distinct -> " << o.out.string() << "\n";

  pipeline::RunManifest m{"scan",
                          {{"corpus", o.corpus.string()},
                           {"k", std::to_string(o.k)},
                           {"mode", o.mode},
                           {"out", o.out.string()}},
                          {{"frequency_csv", o.out.string()}}};
  write_manifest(m, o.out);
  return m;
}

pipeline::RunManifest cmd_ctm(const CtmOptions& o, std::ostream& log) {
  complexity::SamplerParams params{o.k, o.states, o.samples, o.steps, o.seed};
  const auto table = complexity::sample_ctm(params, o.threads);
  write_text_file(o.out, complexity::save_ctm_table(table));
  const auto& meta = table.metadata();
  log << "sampled " << o.samples << " machines: " << meta.n_halting << " halted, "
      << meta.total_hits << " produced a " << o.k << "x" << o.k << " array, "
      << table.entries().size() << " classes -> " << o.out.string() << "\n";

  pipeline::RunManifest m{"ctm",
                          {{"k", std::to_string(o.k)},
                           {"states", std::to_string(o.states)},
                           {"samples", std::to_string(o.samples)},
                           {"steps", std::to_string(o.steps)},
                           {"seed", std::to_string(o.seed)},
                           {"out", o.out.string()}},
                          {{"ctm_csv", o.out.string()}}};
  write_manifest(m, o.out);
  return m;
}

pipeline::RunManifest cmd_score(const ScoreOptions& o, std::ostream& log) {
  const auto freq = grid::load_frequency_csv(read_text_file(o.freq));
  const auto ctm = complexity::load_ctm_table(read_text_file(o.ctm));
  const auto base = pipeline::parse_log_base(o.log_base);
  if (o.alpha < 0) throw InputError("--alpha must be >= 0");

  std::vector<std::uint32_t> patterns;
  if (o.stimuli) {
    const auto set = experiment::stimulus_set_from_json(read_text_file(*o.stimuli));
    if (set.side != freq.side()) {
      throw InputError("stimulus set side " + std::to_string(set.side) +
                       " does not match the frequency table side " + std::to_string(freq.side()));
    }
    patterns = set.patterns;
  } else {
    patterns = pipeline::observed_patterns(freq);
  }
  const auto rows = pipeline::score_patterns(patterns, freq, ctm, {o.alpha, base});
  write_text_file(o.out, pipeline::scores_to_csv(rows, freq.side(), base));
  log << "scored " << rows.size() << " patterns -> " << o.out.string() << "\n";

  pipeline::RunManifest m{"score",
                          {{"freq", o.freq.string()},
                           {"ctm", o.ctm.string()},
                           {"alpha", shortest(o.alpha)},
                           {"log-base", o.log_base},
                           {"out", o.out.string()}},
                          {{"scores_csv", o.out.string()}}};
  if (o.stimuli) m.options["stimuli"] = o.stimuli->string();
  write_manifest(m, o.out);
  return m;
}

pipeline::RunManifest cmd_sample(const SampleOptions& o, std::ostream& log) {
  const auto freq = grid::load_frequency_csv(read_text_file(o.freq));
  const auto set = experiment::sample_stimuli(freq, o.n, o.seed, o.id, o.freq.filename().string());
  write_text_file(o.out, experiment::stimulus_set_to_json(set));
  log << "sampled " << set.patterns.size() << " stimuli -> " << o.out.string() << "\n";

  pipeline::RunManifest m{"sample",
                          {{"freq", o.freq.string()},
                           {"n", std::to_string(o.n)},
                           {"seed", std::to_string(o.seed)},
                           {"id", o.id},
                           {"out", o.out.string()}},
                          {{"stimulus_set_json", o.out.string()}}};
  write_manifest(m, o.out);
  return m;
}

pipeline::RunManifest cmd_analyze(const AnalyzeOptions& o, std::ostream& log) {
  const auto base = pipeline::parse_log_base(o.log_base);
  const auto scores_text = read_text_file(o.scores);
  const auto aggregates_text = read_text_file(o.aggregates);

  // Side comes from the scores file's "# k=" line.
  int side = 4;
  if (auto at = scores_text.find("k="); at != std::string::npos && scores_text.starts_with("#")) {
    side = scores_text[at + 2] - '0';
  }
  const auto scores = pipeline::scores_from_csv(scores_text, side);
  const auto aggregates = experiment::aggregates_from_csv(aggregates_text, side);
  const auto rows = pipeline::join_scores(scores, aggregates);
  const auto result = pipeline::analyze(rows, base);

  std::vector<double> complexity, natural;
  for (const auto& r : rows) {
    complexity.push_back(r.complexity_bits);
    natural.push_back(r.natural_randomness);
  }
  const auto subjective = pipeline::subjective_scores(rows, base);

  const auto report = o.out_dir / "report.json";
  write_text_file(report, pipeline::report_to_json(result));
  write_text_file(o.out_dir / "correlations.csv", pipeline::correlation_table_csv(result));
  write_text_file(o.out_dir / "analysis.csv", pipeline::analysis_rows_to_csv(rows, side));
  write_text_file(o.out_dir / "scatter_natural.svg",
                  pipeline::scatter_svg(natural, subjective, "natural randomness",
                                        "subjective randomness",
                                        "Subjective vs natural randomness"));
  write_text_file(o.out_dir / "scatter_complexity.svg",
                  pipeline::scatter_svg(complexity, subjective, "algorithmic complexity (bits)",
                                        "subjective randomness",
                                        "Subjective randomness vs complexity"));
  const auto& med = result.mediation;
  log << "n=" << result.n << "  r(K,N)=" << result.complexity_vs_natural.r
      << "  r(K,S)=" << result.complexity_vs_subjective.r
      << "  r(N,S)=" << result.natural_vs_subjective.r << "\n"
      << "a=" << med.a << " b=" << med.b << " c=" << med.c << " c'=" << med.c_prime
      << "  adj R2=" << med.adj_r_squared << "  Sobel z=" << med.sobel_z << " (p=" << med.sobel_p
      << ")\n";

  pipeline::RunManifest m{"analyze",
                          {{"scores", o.scores.string()},
                           {"aggregates", o.aggregates.string()},
                           {"out-dir", o.out_dir.string()},
                           {"log-base", o.log_base}},
                          {{"report_json", report.string()},
                           {"correlations_csv", (o.out_dir / "correlations.csv").string()},
                           {"analysis_csv", (o.out_dir / "analysis.csv").string()},
                           {"scatter_natural_svg", (o.out_dir / "scatter_natural.svg").string()},
                           {"scatter_complexity_svg",
                            (o.out_dir / "scatter_complexity.svg").string()}}};
  write_manifest(m, report);
  return m;
}

void cmd_serve(const ServeOptions& o, std::ostream& log) {
  experiment::ExperimentStore store({o.data_dir, o.seed, {}, {}});
  for (const auto& path : o.import_sets) {
    store.add_set(experiment::stimulus_set_from_json(read_text_file(path)));
  }

  // Block termination signals before any server thread starts so that only
  // the waiter below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  experiment::ExperimentServer server(store, {o.host, o.port, o.static_dir});
  const int port = server.bind();

  pipeline::RunManifest m{"serve",
                          {{"data-dir", o.data_dir.string()},
                           {"host", o.host},
                           {"port", std::to_string(o.port)},
                           {"seed", std::to_string(o.seed)}},
                          {}};
  if (o.static_dir) m.options["static-dir"] = o.static_dir->string();
  write_text_file(o.data_dir / "serve.manifest.json", pipeline::manifest_to_json(m));

  log << "serving " << store.set_ids().size() << " stimulus set(s) on http://" << o.host << ":"
      << port << "\n"
      << std::flush;
  std::jthread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.serve();
  // Wakes the waiter if the server stopped for another reason.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  store.write_snapshot();
  log << "snapshot written, " << store.session_count() << " session(s)\n";
}

}  // namespace scenestat::cli
