#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenestat/log_base.h"
#include "scenestat/pipeline/scoring.h"
#include "scenestat/stats/descriptive.h"
#include "scenestat/stats/mediation.h"
#include "scenestat/stats/regression.h"

namespace scenestat::pipeline {

struct AnalysisRow {
  std::uint32_t pattern = 0;
  double complexity_bits = 0.0;
  double natural_randomness = 0.0;
  std::uint64_t n_random = 0;
  std::uint64_t n_total = 0;
};

/// Inner join on pattern, in score order. Throws DataError if a scored
/// pattern has no aggregate row or an aggregate has n_total = 0.
std::vector<AnalysisRow> join_scores(std::span<const ScoreRow> scores,
                                     std::span<const stats::JudgmentAggregate> aggregates);

/// `pattern_hex,complexity_bits,natural_randomness,n_random,n_total`
std::string analysis_rows_to_csv(std::span<const AnalysisRow> rows, int side);
std::vector<AnalysisRow> analysis_rows_from_csv(std::string_view text, int side);

struct AnalysisResult {
  std::size_t n = 0;
  LogBase base = LogBase::kBits;
  stats::Correlation complexity_vs_natural;
  stats::Correlation complexity_vs_subjective;
  stats::Correlation natural_vs_subjective;
  stats::MediationReport mediation;  // predictor complexity, mediator natural
  std::size_t unanimous_patterns = 0;  // all or none judged random

  friend bool operator==(const AnalysisResult& a, const AnalysisResult& b);
};

/// Subjective randomness of each row, log p̃ in `base`.
std::vector<double> subjective_scores(std::span<const AnalysisRow> rows, LogBase base);

/// Correlations, then the mediation of complexity → subjective randomness
/// through natural randomness. `base` applies to the subjective transform;
/// the score columns are taken as given.
AnalysisResult analyze(std::span<const AnalysisRow> rows, LogBase base = LogBase::kBits);

/// Flat JSON object holding every MediationReport field plus the correlations.
std::string report_to_json(const AnalysisResult& result);
AnalysisResult report_from_json(std::string_view text);

/// `pair,r,t,p,n` rows for the three pairwise correlations.
std::string correlation_table_csv(const AnalysisResult& result);

/// Scatter plot with a least-squares line, as a standalone SVG document.
std::string scatter_svg(std::span<const double> x, std::span<const double> y,
                        std::string_view x_label, std::string_view y_label,
                        std::string_view title);

}  // namespace scenestat::pipeline
