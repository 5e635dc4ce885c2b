#include "scenestat/pipeline/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "csv_util.h"
#include "json.hpp"
#include "scenestat/error.h"
#include "scenestat/grid/pattern.h"

namespace scenestat::pipeline {

using nlohmann::json;
using nlohmann::ordered_json;

bool operator==(const AnalysisResult& a, const AnalysisResult& b) {
  auto same = [](const stats::Correlation& x, const stats::Correlation& y) {
    return x.r == y.r && x.t == y.t && x.p == y.p && x.n == y.n;
  };
  return a.n == b.n && a.base == b.base && same(a.complexity_vs_natural, b.complexity_vs_natural) &&
         same(a.complexity_vs_subjective, b.complexity_vs_subjective) &&
         same(a.natural_vs_subjective, b.natural_vs_subjective) && a.mediation == b.mediation &&
         a.unanimous_patterns == b.unanimous_patterns;
}

std::vector<AnalysisRow> join_scores(std::span<const ScoreRow> scores,
                                     std::span<const stats::JudgmentAggregate> aggregates) {
  std::map<std::uint32_t, stats::JudgmentAggregate> by_pattern;
  for (const auto& a : aggregates) {
    if (!by_pattern.emplace(a.pattern, a).second) {
      throw DataError("aggregates list pattern " + std::to_string(a.pattern) + " twice");
    }
  }
  std::vector<AnalysisRow> rows;
  std::vector<std::uint32_t> missing;
  for (const auto& s : scores) {
    auto it = by_pattern.find(s.pattern);
    if (it == by_pattern.end()) {
      missing.push_back(s.pattern);
      continue;
    }
    if (it->second.n_total == 0) {
      throw DataError("pattern " + std::to_string(s.pattern) +
                      " has no judgments (no completed sessions?)");
    }
    rows.push_back({s.pattern, s.complexity_bits, s.natural_randomness, it->second.n_random,
                    it->second.n_total});
  }
  if (!missing.empty()) {
    throw DataError(std::to_string(missing.size()) + " scored pattern(s) have no judgment row");
  }
  return rows;
}

std::string analysis_rows_to_csv(std::span<const AnalysisRow> rows, int side) {
  std::ostringstream out;
  out << "pattern_hex,complexity_bits,natural_randomness,n_random,n_total\n";
  for (const auto& r : rows) {
    out << grid::to_hex(r.pattern, side) << ',' << detail::format_double(r.complexity_bits) << ','
        << detail::format_double(r.natural_randomness) << ',' << r.n_random << ',' << r.n_total
        << '\n';
  }
  return out.str();
}

std::vector<AnalysisRow> analysis_rows_from_csv(std::string_view text, int side) {
  std::istringstream in{std::string(text)};
  std::vector<AnalysisRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      if (line != "pattern_hex,complexity_bits,natural_randomness,n_random,n_total") {
        throw ParseError("unexpected analysis CSV header", lineno, ParseError::Unit::kLine);
      }
      have_header = true;
      continue;
    }
    const auto f = detail::split_commas(line);
    if (f.size() != 5) throw ParseError("expected five columns", lineno, ParseError::Unit::kLine);
    AnalysisRow r;
    try {
      r.pattern = grid::parse_hex(f[0], side).bits;
    } catch (const InputError& e) {
      throw ParseError(e.what(), lineno, ParseError::Unit::kLine);
    }
    r.complexity_bits = detail::parse_field<double>(f[1], lineno);
    r.natural_randomness = detail::parse_field<double>(f[2], lineno);
    r.n_random = detail::parse_field<std::uint64_t>(f[3], lineno);
    r.n_total = detail::parse_field<std::uint64_t>(f[4], lineno);
    rows.push_back(r);
  }
  if (!have_header) throw ParseError("missing CSV header", lineno, ParseError::Unit::kLine);
  return rows;
}

std::vector<double> subjective_scores(std::span<const AnalysisRow> rows, LogBase base) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(stats::subjective_randomness({r.pattern, r.n_random, r.n_total}, base));
  return out;
}

AnalysisResult analyze(std::span<const AnalysisRow> rows, LogBase base) {
  std::vector<double> complexity, natural;
  for (const auto& r : rows) {
    complexity.push_back(r.complexity_bits);
    natural.push_back(r.natural_randomness);
  }
  const auto subjective = subjective_scores(rows, base);

  AnalysisResult out;
  out.n = rows.size();
  out.base = base;
  out.complexity_vs_natural = stats::pearson(complexity, natural);
  out.complexity_vs_subjective = stats::pearson(complexity, subjective);
  out.natural_vs_subjective = stats::pearson(natural, subjective);
  out.mediation = stats::mediation(complexity, natural, subjective);
  out.unanimous_patterns = static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(),
      [](const AnalysisRow& r) { return r.n_random == 0 || r.n_random == r.n_total; }));
  return out;
}

namespace {

// JSON has no infinities; non-finite values travel as strings.
ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double read_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  const auto s = v.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw InputError(std::string("report field '") + key + "' is not a number");
}

}  // namespace

std::string report_to_json(const AnalysisResult& r) {
  const auto& m = r.mediation;
  ordered_json j;
  j["n"] = r.n;
  j["log_base"] = std::string(to_string(r.base));
  j["predictor"] = "complexity_bits";
  j["mediator"] = "natural_randomness";
  j["outcome"] = "subjective_randomness";
  j["a"] = number(m.a);
  j["se_a"] = number(m.se_a);
  j["p_a"] = number(m.p_a);
  j["b"] = number(m.b);
  j["se_b"] = number(m.se_b);
  j["p_b"] = number(m.p_b);
  j["c"] = number(m.c);
  j["se_c"] = number(m.se_c);
  j["p_c"] = number(m.p_c);
  j["c_prime"] = number(m.c_prime);
  j["se_c_prime"] = number(m.se_c_prime);
  j["p_c_prime"] = number(m.p_c_prime);
  j["indirect"] = number(m.indirect);
  j["sobel_z"] = number(m.sobel_z);
  j["sobel_p"] = number(m.sobel_p);
  j["adj_r_squared"] = number(m.adj_r_squared);
  j["model_p"] = number(m.model_p);
  auto corr = [&](const char* prefix, const stats::Correlation& c) {
    j[std::string("r_") + prefix] = number(c.r);
    j[std::string("t_") + prefix] = number(c.t);
    j[std::string("p_") + prefix] = number(c.p);
  };
  corr("complexity_natural", r.complexity_vs_natural);
  corr("complexity_subjective", r.complexity_vs_subjective);
  corr("natural_subjective", r.natural_vs_subjective);
  j["unanimous_patterns"] = r.unanimous_patterns;
  j["subjective_smoothing"] = "add_half";
  return j.dump(2) + "\n";
}

AnalysisResult report_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    AnalysisResult r;
    r.n = j.at("n").get<std::size_t>();
    r.base = parse_log_base(j.at("log_base").get<std::string>());
    auto& m = r.mediation;
    m.n = r.n;
    m.a = read_number(j, "a");
    m.se_a = read_number(j, "se_a");
    m.p_a = read_number(j, "p_a");
    m.b = read_number(j, "b");
    m.se_b = read_number(j, "se_b");
    m.p_b = read_number(j, "p_b");
    m.c = read_number(j, "c");
    m.se_c = read_number(j, "se_c");
    m.p_c = read_number(j, "p_c");
    m.c_prime = read_number(j, "c_prime");
    m.se_c_prime = read_number(j, "se_c_prime");
    m.p_c_prime = read_number(j, "p_c_prime");
    m.indirect = read_number(j, "indirect");
    m.sobel_z = read_number(j, "sobel_z");
    m.sobel_p = read_number(j, "sobel_p");
    m.adj_r_squared = read_number(j, "adj_r_squared");
    m.model_p = read_number(j, "model_p");
    auto corr = [&](const std::string& prefix) {
      stats::Correlation c;
      c.r = read_number(j, ("r_" + prefix).c_str());
      c.t = read_number(j, ("t_" + prefix).c_str());
      c.p = read_number(j, ("p_" + prefix).c_str());
      c.n = r.n;
      return c;
    };
    r.complexity_vs_natural = corr("complexity_natural");
    r.complexity_vs_subjective = corr("complexity_subjective");
    r.natural_vs_subjective = corr("natural_subjective");
    r.unanimous_patterns = j.at("unanimous_patterns").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid report JSON: ") + e.what());
  }
}

std::string correlation_table_csv(const AnalysisResult& r) {
  std::ostringstream out;
  out << "pair,r,t,p,n\n";
  auto row = [&](const char* name, const stats::Correlation& c) {
    out << name << ',' << detail::format_double(c.r) << ',' << detail::format_double(c.t) << ','
        << detail::format_double(c.p) << ',' << c.n << '\n';
  };
  row("complexity~natural_randomness", r.complexity_vs_natural);
  row("complexity~subjective_randomness", r.complexity_vs_subjective);
  row("natural_randomness~subjective_randomness", r.natural_vs_subjective);
  return out.str();
}

namespace {

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string scatter_svg(std::span<const double> x, std::span<const double> y,
                        std::string_view x_label, std::string_view y_label,
                        std::string_view title) {
  if (x.size() != y.size() || x.empty()) throw DataError("scatter plot needs paired, non-empty data");
  constexpr double kWidth = 480, kHeight = 400, kLeft = 64, kRight = 16, kTop = 36, kBottom = 52;
  const auto [x_min_it, x_max_it] = std::minmax_element(x.begin(), x.end());
  const auto [y_min_it, y_max_it] = std::minmax_element(y.begin(), y.end());
  double x0 = *x_min_it, x1 = *x_max_it, y0 = *y_min_it, y1 = *y_max_it;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto sy = [&](double v) { return kTop + ph - (v - y0) / (y1 - y0) * ph; };

  std::ostringstream out;
  out << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << kWidth << R"(" height=")"
      << kHeight << R"(" font-family="sans-serif" font-size="12">)" << "\n";
  out << R"(<rect width="100%" height="100%" fill="white"/>)" << "\n";
  out << R"(<text x=")" << kWidth / 2 << R"(" y="20" text-anchor="middle" font-size="14">)"
      << escape_xml(title) << "</text>\n";
  out << R"(<rect x=")" << kLeft << R"(" y=")" << kTop << R"(" width=")" << pw << R"(" height=")"
      << ph << R"(" fill="none" stroke="black"/>)" << "\n";
  for (const double v : {x0, x1}) {
    out << R"(<text x=")" << fixed(sx(v)) << R"(" y=")" << kTop + ph + 16
        << R"(" text-anchor="middle">)" << fixed(v) << "</text>\n";
  }
  for (const double v : {y0, y1}) {
    out << R"(<text x=")" << kLeft - 6 << R"(" y=")" << fixed(sy(v) + 4)
        << R"(" text-anchor="end">)" << fixed(v) << "</text>\n";
  }
  out << R"(<text x=")" << kLeft + pw / 2 << R"(" y=")" << kHeight - 12
      << R"(" text-anchor="middle">)" << escape_xml(x_label) << "</text>\n";
  out << R"svg(<text transform="translate(16 )svg" << kTop + ph / 2
      << R"svg() rotate(-90)" text-anchor="middle">)svg" << escape_xml(y_label) << "</text>\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << R"(<circle cx=")" << fixed(sx(x[i])) << R"(" cy=")" << fixed(sy(y[i]))
        << R"(" r="3" fill="steelblue" fill-opacity="0.7"/>)" << "\n";
  }
  // Least-squares line, clipped to the x range.
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx > 0) {
    const double slope = sxy / sxx;
    const double ya = my + slope * (x0 - mx), yb = my + slope * (x1 - mx);
    out << R"(<line x1=")" << fixed(sx(x0)) << R"(" y1=")" << fixed(sy(ya)) << R"(" x2=")"
        << fixed(sx(x1)) << R"(" y2=")" << fixed(sy(yb))
        << R"(" stroke="firebrick" stroke-width="1.5"/>)" << "\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace scenestat::pipeline
