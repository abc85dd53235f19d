#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ira/dataset.hpp"
#include "ira/models.hpp"

namespace ira {

struct ForestParams {
  std::size_t n_trees = 100;
  /// Maximum tree depth; nullopt grows until leaves are pure or too small.
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_split = 2;
  /// Features considered at each split; 0 means all of them.
  std::size_t max_features = 0;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  /// Throws ConfigError for out-of-range values.
  void validate() const;
  std::string to_string() const;
};

/// Binary regression tree stored as a flat node array. Node 0 is the root.
class RegressionTree {
 public:
  struct Node {
    /// Split feature, or -1 for a leaf.
    std::int32_t feature = -1;
    std::int32_t left = -1;
    std::int32_t right = -1;
    /// Split threshold (x <= threshold goes left) or the leaf mean.
    double value = 0.0;
  };

  explicit RegressionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  double predict(std::span<const double> row) const noexcept {
    std::int32_t i = 0;
    while (nodes_[i].feature >= 0) {
      const Node& n = nodes_[i];
      i = row[n.feature] <= n.value ? n.left : n.right;
    }
    return nodes_[i].value;
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

 private:
  std::vector<Node> nodes_;
};

/// Bagged CART regression forest; prediction is the mean of the per-tree leaves.
class ForestModel final : public RegressionModel {
 public:
  ForestModel(std::vector<RegressionTree> trees, std::size_t n_features, ForestParams params);

  std::size_t n_features() const override { return n_features_; }
  std::string spec() const override { return "rf(" + params_.to_string() + ")"; }

  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  const ForestParams& params() const noexcept { return params_; }

 protected:
  std::vector<double> do_predict(const Matrix& batch) const override;

 private:
  std::vector<RegressionTree> trees_;
  std::size_t n_features_;
  ForestParams params_;
};

/// Grows one CART tree on the given sample (row indices, repeats allowed).
/// Splits minimise the summed squared error of the children; thresholds are
/// midpoints between consecutive distinct values; ties go to the lowest
/// feature index, then the lowest threshold.
RegressionTree grow_tree(const Dataset& ds, std::span<const std::size_t> sample,
                         const ForestParams& params, std::uint64_t tree_index);

/// Fits a forest. Each tree draws from its own seeded substream, so the result
/// does not depend on `threads` (0 = hardware concurrency).
ForestModel fit_random_forest(const Dataset& ds, const ForestParams& params,
                              std::size_t threads = 0);

}  // namespace ira
