#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "ira/dataset.hpp"
#include "ira/models.hpp"

namespace ira::feed_mill {

/// Summary statistics and fitted coefficient of one predictor of the pellet
/// durability (PDI) model.
struct Predictor {
  std::string_view name;
  double mean;
  double sd;
  double min;
  double median;
  double max;
  double coefficient;
};

inline constexpr std::array<Predictor, 9> kPredictors{{
    {"Amino Acids (%)", 0.4, 0.2, 0.0, 0.4, 1.0, 4.42e8},
    {"ADF Content (%)", 3.4, 1.2, 1.7, 2.9, 7.2, 1.41e8},
    {"Dehydrated Bakery Meal (%)", 6.1, 5.5, 0.0, 5.9, 16.5, 3.06e7},
    {"Indoor Humidity (Pelletizer) (%)", 28.1, 9.8, 10.5, 27.3, 53.8, 1.20e7},
    {"Expanding Temperature (°C)", 92.1, 6.9, 62.5, 91.8, 111.7, 7.50e6},
    {"Cumulative Production (tonnes)", 20687.7, 13415.3, 55.4, 18602.4, 47953.9, -5.29e3},
    {"Ambient Humidity (%)", 65.3, 13.1, 22.5, 66.5, 91.8, -3.88e6},
    {"Fat Content (%)", 3.7, 0.8, 2.1, 3.7, 7.5, -1.55e8},
    {"Processing Aid Water (%)", 0.9, 0.2, 0.0, 0.8, 1.5, -2.17e8},
}};

inline constexpr double kIntercept = 2.14e9;
inline constexpr double kLambda = 5.18;

std::vector<std::string> names();
std::vector<double> means();
/// Observed [min, max] of each predictor in the training data.
std::vector<Range> training_ranges();

}  // namespace ira::feed_mill

namespace ira {

/// The nine-predictor PDI model: a linear model on the Box-Cox transformed
/// response, back-transformed with lambda = 5.18.
BoxCoxLinearModel make_feed_mill_model();

}  // namespace ira
