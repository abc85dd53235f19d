#include <doctest.h>

#include <cmath>

#include "ira/dataset.hpp"
#include "ira/error.hpp"
#include "ira/feed_mill.hpp"
#include "ira/models.hpp"
#include "ira/synth.hpp"

using namespace ira;

TEST_SUITE("synth") {
  TEST_CASE("linear benchmark predictor distribution") {
    const auto ds = synth::gen_linear(1000, 2024);
    CHECK(ds.n_rows() == 1000);
    CHECK(ds.n_predictors() == 8);
    CHECK(ds.predictor_names().front() == "X1");
    CHECK(ds.response_name() == std::optional<std::string>("Y"));
    const auto s = column_stats(ds.column(2));
    CHECK(std::abs(s.mean - 5.0) <= 0.24);
    CHECK(std::abs(s.sd - 2.5) <= 0.17);
  }

  TEST_CASE("linear benchmark coefficients are recoverable") {
    const auto fit = fit_ols(synth::gen_linear(1000, 2024));
    CHECK(std::abs(fit.coefficients()[6] + 1.2) <= 0.20);

    auto spec = synth::linear_spec(200, 31);
    spec.noise_lo = spec.noise_hi = 0.0;
    const auto exact = fit_ols(synth::to_dataset(synth::sample_linear(spec)));
    const std::vector<double> truth{2, 0, -0.5, 0.05, 0, 0.1, -1.2, 0};
    for (std::size_t i = 0; i < truth.size(); ++i) {
      CHECK(std::abs(exact.coefficients()[i] - truth[i]) < 1e-8);
    }
    CHECK(std::abs(exact.intercept()) < 1e-8);
  }

  TEST_CASE("nonlinear response by hand") {
    std::vector<double> x(8, 0.0);
    CHECK(synth::nonlinear_response(x, 0.0) == doctest::Approx(6.18).epsilon(1e-15));
    x = {2, 3, -1, 9, 0, 0, 9, 9};
    CHECK(synth::nonlinear_response(x, 0.5) == doctest::Approx(-6 - 0.1 + 0.08 + 6.1 + 0.5));
    x = {1, 0, 0, 5, 0, 0, 3, 2};
    CHECK(synth::linear_response(x, 1.0) == doctest::Approx(2 + 0.25 - 3.6 + 1));
  }

  TEST_CASE("nonlinear benchmark predictor distribution") {
    const auto ds = synth::gen_nonlinear(1000, 2024);
    CHECK(std::abs(column_stats(ds.column(5)).mean + 5.0) <= 0.21);
  }

  TEST_CASE("unused predictors do not enter the response") {
    const auto s = synth::sample_nonlinear(synth::nonlinear_spec(300, 8));
    std::vector<double> row(8);
    for (std::size_t r = 0; r < 300; ++r) {
      std::copy(s.values.row(r).begin(), s.values.row(r).end(), row.begin());
      const double y = synth::nonlinear_response(row, s.noise[r]);
      CHECK(y == s.response[r]);
      row[3] += 17.0;
      row[6] -= 4.0;
      row[7] *= 3.0;
      CHECK(synth::nonlinear_response(row, s.noise[r]) == y);
    }
  }

  TEST_CASE("noise stays inside its bounds") {
    const auto s = synth::sample_linear(synth::linear_spec(500, 2));
    for (double e : s.noise) {
      CHECK(e >= -5.0);
      CHECK(e <= 5.0);
    }
    const auto t = synth::sample_nonlinear(synth::nonlinear_spec(500, 2));
    for (double e : t.noise) {
      CHECK(e >= -3.0);
      CHECK(e <= 3.0);
    }
  }

  TEST_CASE("generation is reproducible") {
    CHECK(to_csv(synth::gen_linear(50, 77)) == to_csv(synth::gen_linear(50, 77)));
    CHECK(to_csv(synth::gen_linear(50, 77)) != to_csv(synth::gen_linear(50, 78)));
    const auto one = synth::sample_linear(synth::linear_spec(1, 4));
    CHECK(one.values.rows() == 1);
    CHECK(synth::sample_linear(synth::linear_spec(1, 4)).values == one.values);
  }

  TEST_CASE("generator validation") {
    auto spec = synth::linear_spec(0, 1);
    CHECK_THROWS_AS(synth::sample_linear(spec), ConfigError);
    spec = synth::linear_spec(5, 1);
    spec.noise_lo = 1.0;
    spec.noise_hi = 0.0;
    CHECK_THROWS_AS(synth::sample_linear(spec), ConfigError);
    spec = synth::linear_spec(5, 1);
    spec.predictors[0].sd = 0.0;
    CHECK_THROWS_AS(synth::sample_linear(spec), ConfigError);
  }

  TEST_CASE("feed-mill surrogate background") {
    const auto bg = synth::make_feed_mill_background(2000, 7);
    CHECK(bg.predictor_names() == feed_mill::names());
    CHECK_FALSE(bg.has_response());
    const auto fat = bg.column(*bg.find_predictor("Fat Content (%)"));
    for (double v : fat) {
      CHECK(v >= 2.1);
      CHECK(v <= 7.5);
    }
    const auto et = bg.column(*bg.find_predictor("Expanding Temperature (°C)"));
    CHECK(std::abs(column_stats(et).mean - 92.1) <= 0.6);
    for (std::size_t c = 0; c < 9; ++c) {
      const auto& d = feed_mill::kPredictors[c];
      for (double v : bg.column(c)) {
        CHECK(v >= d.min);
        CHECK(v <= d.max);
      }
    }

    const auto a = synth::feed_mill_background_rows(1, 3);
    CHECK(a.rows() == 1);
    CHECK(synth::feed_mill_background_rows(1, 3) == a);
  }
}
