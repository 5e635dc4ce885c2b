#include "scenestat/grid/frequency_table.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "scenestat/error.h"

namespace scenestat::grid {

FrequencyTable::FrequencyTable(int side, ExtractionMode mode) : side_(side), mode_(mode) {
  pattern_space_size(side);  // validates
}

std::uint64_t FrequencyTable::count(std::uint32_t bits) const {
  auto it = counts_.find(bits);
  return it == counts_.end() ? 0 : it->second;
}

void FrequencyTable::add(std::uint32_t bits, std::uint64_t n) {
  if (n == 0) return;
  if (bits >= pattern_space_size(side_)) throw InputError("pattern out of range for table side");
  counts_[bits] += n;
  total_ += n;
}

void FrequencyTable::merge(const FrequencyTable& other) {
  if (other.side_ != side_ || other.mode_ != mode_) {
    throw InputError("cannot merge frequency tables with different side or mode");
  }
  for (const auto& [bits, n] : other.counts_) counts_[bits] += n;
  total_ += other.total_;
  n_images_ += other.n_images_;
}

FrequencyTable scan_image(const GrayImage& image, int side, ExtractionMode mode) {
  FrequencyTable table(side, mode);
  table.add_images(1);
  const auto patches = extract_patches(binarize_median(image), side, mode);
  if (side <= 4) {
    std::vector<std::uint64_t> dense(pattern_space_size(side), 0);
    for (const Pattern& p : patches) ++dense[p.bits];
    for (std::uint32_t bits = 0; bits < dense.size(); ++bits) table.add(bits, dense[bits]);
  } else {
    for (const Pattern& p : patches) table.add(p.bits);
  }
  return table;
}

FrequencyTable scan_corpus(std::span<const GrayImage> images, int side, ExtractionMode mode,
                           unsigned threads) {
  for (const auto& img : images) {
    if (img.empty()) throw InputError("corpus contains an empty image");
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, images.size()));

  std::vector<FrequencyTable> partial(threads, FrequencyTable(side, mode));
  std::atomic<std::size_t> next{0};
  auto work = [&](unsigned slot) {
    for (std::size_t i = next++; i < images.size(); i = next++) {
      partial[slot].merge(scan_image(images[i], side, mode));
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  FrequencyTable result(side, mode);
  for (const auto& t : partial) result.merge(t);
  return result;
}

std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& source) {
  namespace fs = std::filesystem;
  std::vector<fs::path> paths;
  if (fs::is_directory(source)) {
    for (const auto& entry : fs::directory_iterator(source)) {
      auto ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
      if (entry.is_regular_file() && ext == ".pgm") paths.push_back(entry.path());
    }
  } else if (fs::is_regular_file(source)) {
    std::ifstream in(source);
    std::string line;
    while (std::getline(in, line)) {
      line.erase(line.find_last_not_of(" \t\r") + 1);
      line.erase(0, line.find_first_not_of(" \t"));
      if (line.empty() || line.front() == '#') continue;
      fs::path p(line);
      paths.push_back(p.is_absolute() ? p : source.parent_path() / p);
    }
  } else {
    throw InputError("corpus source " + source.string() + " does not exist");
  }
  if (paths.empty()) throw InputError("no images found in " + source.string());
  std::sort(paths.begin(), paths.end());
  return paths;
}

std::string save_frequency_csv(const FrequencyTable& table) {
  std::ostringstream out;
  out << "# side=" << table.side() << " mode=" << to_string(table.mode())
      << " total=" << table.total() << " n_images=" << table.n_images() << "\n";
  out << "pattern_hex,count\n";
  for (const auto& [bits, n] : table.counts()) out << to_hex(bits, table.side()) << ',' << n << '\n';
  return out.str();
}

namespace {

std::uint64_t parse_u64(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw ParseError("invalid integer '" + std::string(s) + "'", line, ParseError::Unit::kLine);
  }
  return v;
}

}  // namespace

FrequencyTable load_frequency_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  int side = -1;
  ExtractionMode mode = ExtractionMode::kTiled;
  std::uint64_t total = 0, n_images = 0;
  bool have_total = false, have_images = false, have_header = false;
  FrequencyTable table;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream fields(line.substr(1));
      std::string kv;
      while (fields >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        auto key = kv.substr(0, eq);
        auto value = std::string_view(kv).substr(eq + 1);
        if (key == "side") side = static_cast<int>(parse_u64(value, lineno));
        else if (key == "mode") mode = parse_extraction_mode(value);
        else if (key == "total") total = parse_u64(value, lineno), have_total = true;
        else if (key == "n_images") n_images = parse_u64(value, lineno), have_images = true;
      }
      continue;
    }
    if (!have_header) {
      if (line != "pattern_hex,count") {
        throw ParseError("expected header 'pattern_hex,count'", lineno, ParseError::Unit::kLine);
      }
      if (side < 0 || !have_total || !have_images) {
        throw ParseError("missing '# side= mode= total= n_images=' metadata", lineno,
                         ParseError::Unit::kLine);
      }
      table = FrequencyTable(side, mode);
      table.add_images(n_images);
      have_header = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("expected two columns", lineno, ParseError::Unit::kLine);
    }
    Pattern p;
    try {
      p = parse_hex(std::string_view(line).substr(0, comma), side);
    } catch (const InputError& e) {
      throw ParseError(e.what(), lineno, ParseError::Unit::kLine);
    }
    const auto n = parse_u64(std::string_view(line).substr(comma + 1), lineno);
    if (n == 0) throw ParseError("counts must be positive", lineno, ParseError::Unit::kLine);
    if (table.count(p) != 0) {
      throw ParseError("duplicate pattern " + to_hex(p), lineno, ParseError::Unit::kLine);
    }
    table.add(p.bits, n);
  }
  if (!have_header) throw ParseError("missing CSV header", lineno, ParseError::Unit::kLine);
  if (table.total() != total) {
    throw ParseError("counts sum to " + std::to_string(table.total()) + " but metadata says " +
                         std::to_string(total),
                     lineno, ParseError::Unit::kLine);
  }
  return table;
}

double chance_probability(int side) {
  if (side < 1) throw InputError("side must be at least 1");
  return std::ldexp(1.0, -side * side);
}

double natural_probability(const Pattern& x, const FrequencyTable& table, double alpha) {
  if (x.side != table.side()) throw InputError("pattern side does not match the table");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("smoothing must be >= 0");
  const double count = static_cast<double>(table.count(x));
  if (alpha == 0.0 && count == 0.0) throw UnobservedPatternError({x.bits});
  const double space = static_cast<double>(pattern_space_size(x.side));
  return (count + alpha) / (static_cast<double>(table.total()) + alpha * space);
}

double natural_randomness(const Pattern& x, const FrequencyTable& table, double alpha,
                          LogBase base) {
  const double pn = natural_probability(x, table, alpha);
  return log_in(base, chance_probability(x.side) / pn);
}

}  // namespace scenestat::grid
