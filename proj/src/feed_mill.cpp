#include "ira/feed_mill.hpp"

#include <string>

namespace ira::feed_mill {

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& p : kPredictors) out.emplace_back(p.name);
  return out;
}

std::vector<double> means() {
  std::vector<double> out;
  for (const auto& p : kPredictors) out.push_back(p.mean);
  return out;
}

std::vector<Range> training_ranges() {
  std::vector<Range> out;
  for (const auto& p : kPredictors) out.push_back({p.min, p.max});
  return out;
}

}  // namespace ira::feed_mill

namespace ira {

BoxCoxLinearModel make_feed_mill_model() {
  std::vector<double> coefficients;
  for (const auto& p : feed_mill::kPredictors) coefficients.push_back(p.coefficient);
  return BoxCoxLinearModel(
      LinearModel(std::move(coefficients), feed_mill::kIntercept, feed_mill::names()),
      feed_mill::kLambda, "feedmill");
}

}  // namespace ira
