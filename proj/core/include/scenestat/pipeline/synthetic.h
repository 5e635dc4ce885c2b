#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scenestat/grid/image.h"
#include "scenestat/random.h"
#include "scenestat/stats/mediation.h"

namespace scenestat::pipeline {

/// Gaussian white noise blurred with a separable Gaussian kernel of the given
/// standard deviation (pixels), rescaled to the full [0, 255] range.
grid::GrayImage smoothed_noise_image(int width, int height, double sigma, Rng& rng);

struct SyntheticCorpusParams {
  int count = 100;
  int width = 128;
  int height = 128;
  double min_sigma = 1.0;  // blur width drawn uniformly per image
  double max_sigma = 4.0;
  std::uint64_t seed = 7;
};

std::vector<grid::GrayImage> synthetic_corpus(const SyntheticCorpusParams& params);

struct ParticipantModel {
  double slope = 1.5;          // on the z-scored natural randomness
  double intercept = 0.0;
  double pattern_noise = 0.5;  // sd of a per-pattern logit offset
  std::uint64_t seed = 11;
};

/// Probability that a simulated participant calls each pattern random:
/// logistic(intercept + slope·z(natural_randomness) + ε), ε ~ N(0, noise²)
/// drawn once per pattern.
std::vector<double> judgment_probabilities(std::span<const double> natural_randomness,
                                           const ParticipantModel& model);

}  // namespace scenestat::pipeline
