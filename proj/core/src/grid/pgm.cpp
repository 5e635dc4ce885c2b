#include "scenestat/grid/pgm.h"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "scenestat/error.h"

namespace scenestat::grid {

namespace {

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }
  std::uint8_t peek() const { return bytes_[pos_]; }

  // Whitespace and '#'-to-end-of-line comments.
  void skip_separators() {
    while (!at_end()) {
      if (std::isspace(peek())) {
        ++pos_;
      } else if (peek() == '#') {
        while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long read_uint(const char* what) {
    skip_separators();
    if (at_end()) throw ParseError(std::string("unexpected end of data reading ") + what, pos_);
    if (!std::isdigit(peek())) {
      throw ParseError(std::string("expected a decimal ") + what, pos_);
    }
    unsigned long value = 0;
    while (!at_end() && std::isdigit(peek())) {
      value = value * 10 + (peek() - '0');
      if (value > 1'000'000'000ul) throw ParseError(std::string(what) + " is too large", pos_);
      ++pos_;
    }
    if (!at_end() && !std::isspace(peek()) && peek() != '#') {
      throw ParseError(std::string("unexpected character after ") + what, pos_);
    }
    return value;
  }

  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint8_t rescale(unsigned long value, unsigned long maxval) {
  if (maxval == 255) return static_cast<std::uint8_t>(value);
  return static_cast<std::uint8_t>((value * 510 + maxval) / (2 * maxval));
}

}  // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw ParseError("not a portable graymap", 0);
  const bool ascii = bytes[1] == '2';
  if (!ascii && bytes[1] != '5') {
    throw ParseError(std::string("unsupported magic 'P") + static_cast<char>(bytes[1]) +
                         "' (only P2 and P5 graymaps are supported)",
                     0);
  }
  Reader in(bytes);
  in.advance(2);
  if (!in.at_end() && !std::isspace(in.peek()) && in.peek() != '#') {
    throw ParseError("malformed magic number", in.pos());
  }

  const unsigned long width = in.read_uint("width");
  const unsigned long height = in.read_uint("height");
  in.skip_separators();
  const std::size_t maxval_at = in.pos();
  const unsigned long maxval = in.read_uint("maxval");
  if (width == 0 || height == 0) throw ParseError("image dimensions must be positive", maxval_at);
  if (maxval == 0 || maxval > 255) {
    throw ParseError("maxval " + std::to_string(maxval) + " outside [1, 255]", maxval_at);
  }
  if (width * height > (std::size_t{1} << 31)) throw ParseError("image too large", maxval_at);

  std::vector<std::uint8_t> pixels(width * height);
  if (ascii) {
    for (auto& px : pixels) {
      in.skip_separators();
      const std::size_t at = in.pos();
      const unsigned long v = in.read_uint("sample");
      if (v > maxval) throw ParseError("sample exceeds maxval", at);
      px = rescale(v, maxval);
    }
  } else {
    // Exactly one whitespace byte separates the header from the raster.
    if (in.at_end() || !std::isspace(in.peek())) {
      throw ParseError("missing separator before raster", in.pos());
    }
    in.advance(1);
    auto raster = in.rest();
    if (raster.size() < pixels.size()) {
      throw ParseError("truncated raster: expected " + std::to_string(pixels.size()) +
                           " bytes, found " + std::to_string(raster.size()),
                       in.pos() + raster.size());
    }
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      if (raster[i] > maxval) throw ParseError("sample exceeds maxval", in.pos() + i);
      pixels[i] = rescale(raster[i], maxval);
    }
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

GrayImage load_pgm_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                  std::istreambuf_iterator<char>());
  try {
    return load_pgm(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.offset(), e.unit());
  }
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
  const std::string header = "P5\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.intensities().begin(), image.intensities().end());
  return out;
}

}  // namespace scenestat::grid
