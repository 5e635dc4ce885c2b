#include "scenestat/pipeline/synthetic.h"

#include <algorithm>
#include <cmath>

#include "scenestat/error.h"
#include "scenestat/stats/descriptive.h"

namespace scenestat::pipeline {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// One separable pass with periodic boundaries.
std::vector<double> blur_pass(const std::vector<double>& in, int width, int height,
                              const std::vector<double>& kernel, bool horizontal) {
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> out(in.size(), 0.0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int rr = horizontal ? r : ((r + i) % height + height) % height;
        const int cc = horizontal ? ((c + i) % width + width) % width : c;
        acc += kernel[i + radius] * in[rr * width + cc];
      }
      out[r * width + c] = acc;
    }
  }
  return out;
}

}  // namespace

grid::GrayImage smoothed_noise_image(int width, int height, double sigma, Rng& rng) {
  if (width < 1 || height < 1) throw InputError("image dimensions must be positive");
  if (!(sigma > 0.0)) throw InputError("blur sigma must be positive");
  std::vector<double> field(static_cast<std::size_t>(width) * height);
  for (auto& v : field) v = rng.normal();
  const auto kernel = gaussian_kernel(sigma);
  field = blur_pass(blur_pass(field, width, height, kernel, true), width, height, kernel, false);

  const auto [lo, hi] = std::minmax_element(field.begin(), field.end());
  const double span = *hi - *lo > 0 ? *hi - *lo : 1.0;
  std::vector<std::uint8_t> pixels(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    pixels[i] = static_cast<std::uint8_t>(std::lround((field[i] - *lo) / span * 255.0));
  }
  return grid::GrayImage(width, height, std::move(pixels));
}

std::vector<grid::GrayImage> synthetic_corpus(const SyntheticCorpusParams& p) {
  if (p.min_sigma <= 0 || p.max_sigma < p.min_sigma) throw InputError("invalid sigma range");
  std::vector<grid::GrayImage> images;
  images.reserve(static_cast<std::size_t>(p.count));
  for (int i = 0; i < p.count; ++i) {
    Rng rng = Rng::derive(p.seed, {static_cast<std::uint64_t>(i)});
    const double sigma = p.min_sigma + (p.max_sigma - p.min_sigma) * rng.uniform();
    images.push_back(smoothed_noise_image(p.width, p.height, sigma, rng));
  }
  return images;
}

std::vector<double> judgment_probabilities(std::span<const double> natural_randomness,
                                           const ParticipantModel& model) {
  const auto z = stats::standardize(natural_randomness);
  Rng rng(model.seed);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double logit = model.intercept + model.slope * z[i] + model.pattern_noise * rng.normal();
    out[i] = 1.0 / (1.0 + std::exp(-logit));
  }
  return out;
}

}  // namespace scenestat::pipeline
