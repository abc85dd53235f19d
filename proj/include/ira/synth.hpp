#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ira/dataset.hpp"

namespace ira::synth {

struct Normal {
  double mean;
  double sd;
};

/// Independent normal predictors plus uniform noise on [noise_lo, noise_hi].
struct GeneratorSpec {
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::vector<Normal> predictors;
  double noise_lo = 0.0;
  double noise_hi = 0.0;

  /// n >= 1, every sd > 0, noise_lo <= noise_hi (equal bounds give zero noise).
  void validate() const;
};

/// Predictors, the response and the noise draw behind each response value.
struct Sample {
  std::vector<std::string> names;
  Matrix values;
  std::vector<double> response;
  std::vector<double> noise;
};

using ResponseFn = std::function<double(std::span<const double> x, double noise)>;

/// Draws row by row: each row's predictors in column order, then its noise.
/// Normals come from the Box-Muller transform of the seeded stream.
Sample generate(const GeneratorSpec& spec, const ResponseFn& response);

/// Y = 2 X1 - 0.5 X3 + 0.05 X4 + 0.1 X6 - 1.2 X7 + noise.
double linear_response(std::span<const double> x, double noise);
/// Y = -X1 X2 - 0.1 X3^2 + 0.08 exp(X5) + 6.1 cos(X6) + noise.
double nonlinear_response(std::span<const double> x, double noise);

GeneratorSpec linear_spec(std::size_t n, std::uint64_t seed);
GeneratorSpec nonlinear_spec(std::size_t n, std::uint64_t seed);

Sample sample_linear(const GeneratorSpec& spec);
Sample sample_nonlinear(const GeneratorSpec& spec);

/// Wraps a sample as a Dataset with response column "Y" (requires n >= 2).
Dataset to_dataset(Sample sample);

/// Eight-predictor linear benchmark, noise U(-5, 5).
Dataset gen_linear(std::size_t n, std::uint64_t seed);
/// Eight-predictor nonlinear benchmark, noise U(-3, 3).
Dataset gen_nonlinear(std::size_t n, std::uint64_t seed);

/// Surrogate feed-mill background: each predictor normal with the reference
/// mean and sd, clipped to the reference [min, max]. No response column.
Matrix feed_mill_background_rows(std::size_t n, std::uint64_t seed);
Dataset make_feed_mill_background(std::size_t n, std::uint64_t seed);

}  // namespace ira::synth
