#include "ira/forest.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>

#include "ira/error.hpp"
#include "ira/parallel.hpp"
#include "ira/rng.hpp"

namespace ira {

void ForestParams::validate() const {
  if (n_trees < 1) throw ConfigError("forest needs at least one tree");
  if (max_depth && *max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
}

std::string ForestParams::to_string() const {
  std::ostringstream os;
  os << "trees=" << n_trees << ",max_depth=";
  if (max_depth) {
    os << *max_depth;
  } else {
    os << "none";
  }
  os << ",min_samples_split=" << min_samples_split << ",max_features=";
  if (max_features == 0) {
    os << "all";
  } else {
    os << max_features;
  }
  os << ",bootstrap=" << (bootstrap ? "true" : "false") << ",seed=" << seed;
  return os.str();
}

std::size_t RegressionTree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (nodes_[i].feature >= 0) {
      level[nodes_[i].left] = level[i] + 1;
      level[nodes_[i].right] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& ds, const ForestParams& params, std::uint64_t tree_index)
      : ds_(ds),
        y_(ds.response()),
        params_(params),
        stream_(rng::Stream::derive(params.seed, rng::Domain::forest, {tree_index, 1})) {
    const std::size_t p = ds.n_predictors();
    features_.resize(p);
    std::iota(features_.begin(), features_.end(), std::size_t{0});
    n_candidates_ = (params.max_features == 0 || params.max_features >= p)
                        ? p
                        : params.max_features;
  }

  std::vector<RegressionTree::Node> build(std::vector<std::size_t> sample) {
    idx_ = std::move(sample);
    scratch_.resize(idx_.size());
    nodes_.clear();
    grow(0, idx_.size(), 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double score = -1.0;
  };

  std::int32_t make_leaf(double value) {
    nodes_.push_back({-1, -1, -1, value});
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::int32_t grow(std::size_t begin, std::size_t end, std::size_t depth) {
    const std::size_t count = end - begin;
    const double first = y_[idx_[begin]];
    bool pure = true;
    double sum = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const double v = y_[idx_[k]];
      sum += v;
      pure = pure && v == first;
    }
    if (pure) return make_leaf(first);
    const double mean = sum / static_cast<double>(count);
    if (count < params_.min_samples_split || (params_.max_depth && depth >= *params_.max_depth)) {
      return make_leaf(mean);
    }

    const Split best = find_split(begin, end, mean);
    if (best.score < 0.0) return make_leaf(mean);

    const auto mid_it = std::stable_partition(
        idx_.begin() + static_cast<std::ptrdiff_t>(begin),
        idx_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t r) {
          return ds_.values()(r, best.feature) <= best.threshold;
        });
    const auto mid = static_cast<std::size_t>(mid_it - idx_.begin());

    const auto self = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({static_cast<std::int32_t>(best.feature), -1, -1, best.threshold});
    const std::int32_t left = grow(begin, mid, depth + 1);
    const std::int32_t right = grow(mid, end, depth + 1);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  std::vector<std::size_t> candidate_features() {
    const std::size_t p = features_.size();
    if (n_candidates_ == p) return features_;
    std::vector<std::size_t> pool = features_;
    for (std::size_t k = 0; k < n_candidates_; ++k) {
      const auto j = k + static_cast<std::size_t>(stream_.index(p - k));
      std::swap(pool[k], pool[j]);
    }
    pool.resize(n_candidates_);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  // Maximises the between-children sum of squares of the centred targets,
  // which is equivalent to minimising the children's summed squared error.
  Split find_split(std::size_t begin, std::size_t end, double mean) {
    Split best;
    const std::size_t count = end - begin;
    for (const std::size_t f : candidate_features()) {
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t r = idx_[begin + k];
        scratch_[k] = {ds_.values()(r, f), y_[r] - mean};
      }
      std::sort(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(count));
      if (scratch_[0].first == scratch_[count - 1].first) continue;
      double total = 0.0;
      for (std::size_t k = 0; k < count; ++k) total += scratch_[k].second;
      double left_sum = 0.0;
      for (std::size_t k = 0; k + 1 < count; ++k) {
        left_sum += scratch_[k].second;
        const double lo = scratch_[k].first;
        const double hi = scratch_[k + 1].first;
        if (!(lo < hi)) continue;
        const auto n_left = static_cast<double>(k + 1);
        const auto n_right = static_cast<double>(count - k - 1);
        const double right_sum = total - left_sum;
        const double score = left_sum * left_sum / n_left + right_sum * right_sum / n_right;
        if (score > best.score) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(threshold < hi)) threshold = lo;
          best = {f, threshold, score};
        }
      }
    }
    return best;
  }

  const Dataset& ds_;
  const std::vector<double>& y_;
  const ForestParams& params_;
  rng::Stream stream_;
  std::vector<std::size_t> features_;
  std::size_t n_candidates_ = 0;
  std::vector<std::size_t> idx_;
  std::vector<std::pair<double, double>> scratch_;
  std::vector<RegressionTree::Node> nodes_;
};

}  // namespace

RegressionTree grow_tree(const Dataset& ds, std::span<const std::size_t> sample,
                         const ForestParams& params, std::uint64_t tree_index) {
  if (sample.empty()) throw DataError("cannot grow a tree on an empty sample");
  TreeBuilder builder(ds, params, tree_index);
  return RegressionTree(builder.build({sample.begin(), sample.end()}));
}

ForestModel::ForestModel(std::vector<RegressionTree> trees, std::size_t n_features,
                         ForestParams params)
    : trees_(std::move(trees)), n_features_(n_features), params_(std::move(params)) {
  if (trees_.empty()) throw ConfigError("forest needs at least one tree");
}

std::vector<double> ForestModel::do_predict(const Matrix& batch) const {
  std::vector<double> acc(batch.rows(), 0.0);
  // Tree-major traversal keeps one tree hot in cache; the per-row summation
  // order is still tree 0, 1, ..., so results match row-at-a-time prediction.
  for (const auto& tree : trees_) {
    for (std::size_t r = 0; r < batch.rows(); ++r) acc[r] += tree.predict(batch.row(r));
  }
  const auto n = static_cast<double>(trees_.size());
  for (auto& v : acc) v /= n;
  return acc;
}

ForestModel fit_random_forest(const Dataset& ds, const ForestParams& params, std::size_t threads) {
  params.validate();
  (void)ds.response();
  if (params.max_features > ds.n_predictors()) {
    throw ConfigError("max_features exceeds the number of predictors (" +
                      std::to_string(ds.n_predictors()) + ")");
  }
  const std::size_t n = ds.n_rows();
  std::vector<std::optional<RegressionTree>> grown(params.n_trees);
  parallel_for(params.n_trees, threads, [&](std::size_t t) {
    std::vector<std::size_t> sample(n);
    if (params.bootstrap) {
      auto stream = rng::Stream::derive(params.seed, rng::Domain::forest, {t, 0});
      for (auto& s : sample) s = static_cast<std::size_t>(stream.index(n));
    } else {
      std::iota(sample.begin(), sample.end(), std::size_t{0});
    }
    grown[t].emplace(grow_tree(ds, sample, params, t));
  });
  std::vector<RegressionTree> trees;
  trees.reserve(grown.size());
  for (auto& t : grown) trees.push_back(std::move(*t));
  return ForestModel(std::move(trees), ds.n_predictors(), params);
}

}  // namespace ira
