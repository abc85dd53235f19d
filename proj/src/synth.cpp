#include "ira/synth.hpp"

#include <algorithm>
#include <cmath>

#include "ira/error.hpp"
#include "ira/feed_mill.hpp"
#include "ira/rng.hpp"

namespace ira::synth {

namespace {

std::vector<std::string> x_names(std::size_t p) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= p; ++i) names.push_back("X" + std::to_string(i));
  return names;
}

}  // namespace

void GeneratorSpec::validate() const {
  if (n < 1) throw ConfigError("generator needs n >= 1");
  if (predictors.empty()) throw ConfigError("generator needs at least one predictor");
  for (const auto& d : predictors) {
    if (!(d.sd > 0.0)) throw ConfigError("predictor standard deviations must be positive");
  }
  if (!(noise_lo <= noise_hi)) throw ConfigError("noise bounds must satisfy lo <= hi");
}

Sample generate(const GeneratorSpec& spec, const ResponseFn& response) {
  spec.validate();
  const std::size_t p = spec.predictors.size();
  auto stream = rng::Stream::derive(spec.seed, rng::Domain::synth, {});
  Sample s;
  s.names = x_names(p);
  s.values = Matrix(spec.n, p);
  s.response.resize(spec.n);
  s.noise.resize(spec.n);
  for (std::size_t r = 0; r < spec.n; ++r) {
    auto row = s.values.row(r);
    for (std::size_t c = 0; c < p; ++c) {
      row[c] = stream.normal(spec.predictors[c].mean, spec.predictors[c].sd);
    }
    s.noise[r] = stream.uniform(spec.noise_lo, spec.noise_hi);
    s.response[r] = response(row, s.noise[r]);
  }
  return s;
}

double linear_response(std::span<const double> x, double noise) {
  return 2.0 * x[0] - 0.5 * x[2] + 0.05 * x[3] + 0.1 * x[5] - 1.2 * x[6] + noise;
}

double nonlinear_response(std::span<const double> x, double noise) {
  return -x[0] * x[1] - 0.1 * x[2] * x[2] + 0.08 * std::exp(x[4]) + 6.1 * std::cos(x[5]) + noise;
}

GeneratorSpec linear_spec(std::size_t n, std::uint64_t seed) {
  return {n,
          seed,
          {{0.0, 1.0},
           {-12.0, 6.0},
           {5.0, 2.5},
           {1.0, 5.0},
           {-8.0, 0.5},
           {10.0, 5.0},
           {3.0, 5.0},
           {-2.0, 4.0}},
          -5.0,
          5.0};
}

GeneratorSpec nonlinear_spec(std::size_t n, std::uint64_t seed) {
  return {n,
          seed,
          {{1.0, 0.5},
           {5.0, 2.0},
           {-6.0, 1.2},
           {0.0, 0.7},
           {0.15, 2.1},
           {-5.0, 2.2},
           {2.8, 0.7},
           {-4.5, 1.8}},
          -3.0,
          3.0};
}

Sample sample_linear(const GeneratorSpec& spec) { return generate(spec, linear_response); }
Sample sample_nonlinear(const GeneratorSpec& spec) { return generate(spec, nonlinear_response); }

Dataset to_dataset(Sample sample) {
  return Dataset(std::move(sample.names), std::move(sample.values), std::move(sample.response),
                 std::string("Y"));
}

Dataset gen_linear(std::size_t n, std::uint64_t seed) {
  return to_dataset(sample_linear(linear_spec(n, seed)));
}

Dataset gen_nonlinear(std::size_t n, std::uint64_t seed) {
  return to_dataset(sample_nonlinear(nonlinear_spec(n, seed)));
}

Matrix feed_mill_background_rows(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("generator needs n >= 1");
  const auto& table = feed_mill::kPredictors;
  auto stream = rng::Stream::derive(seed, rng::Domain::synth, {1});
  Matrix rows(n, table.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < table.size(); ++c) {
      const auto& d = table[c];
      rows(r, c) = std::clamp(stream.normal(d.mean, d.sd), d.min, d.max);
    }
  }
  return rows;
}

Dataset make_feed_mill_background(std::size_t n, std::uint64_t seed) {
  return Dataset(feed_mill::names(), feed_mill_background_rows(n, seed));
}

}  // namespace ira::synth
