#include "osfs/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "osfs/rng.hpp"

namespace osfs {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t state = master + (stream + 1) * 0x9E3779B97F4A7C15ull;
  return splitmix64(state);
}

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double score = -std::numeric_limits<double>::infinity();
};

}  // namespace

ForestModel train_forest(const TraceWindow& window, const SelectedFeatureSet& features,
                         std::uint64_t seed, const ForestConfig& config) {
  if (config.tree_count < 1) {
    throw std::invalid_argument("train_forest: tree_count must be >= 1");
  }
  if (config.min_samples_split < 2) {
    throw std::invalid_argument("train_forest: min_samples_split must be >= 2");
  }
  if (features.k < 1) {
    throw std::invalid_argument("train_forest: feature set is empty");
  }
  if (window.length() < 1) {
    throw std::invalid_argument("train_forest: window is empty");
  }
  if (!window.fully_labeled()) {
    throw std::invalid_argument("train_forest: every training row needs a target");
  }

  const TraceWindow train = window.project(features.members);
  const auto m = static_cast<std::size_t>(train.length());
  const auto f = train.feature_count();

  // feature-major copies so the split scan touches contiguous memory
  std::vector<std::vector<double>> x(f);
  for (std::size_t j = 0; j < f; ++j) {
    const auto col = train.column(j);
    x[j].assign(col.begin(), col.end());
  }
  const std::vector<double> y = train.targets();

  ForestModel model;
  model.feature_names_ = features.members;
  model.target_floor_ = *std::min_element(y.begin(), y.end());
  model.target_ceiling_ = *std::max_element(y.begin(), y.end());
  model.trees_.resize(static_cast<std::size_t>(config.tree_count));

  std::vector<std::size_t> indices(m);
  std::vector<std::size_t> sorted;
  struct Frame {
    std::size_t begin, end;  // range in `indices`
    std::int32_t slot;       // node to fill
  };

  for (int tree = 0; tree < config.tree_count; ++tree) {
    auto& nodes = model.trees_[static_cast<std::size_t>(tree)];
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(tree)));

    if (config.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, m - 1);
      for (auto& idx : indices) idx = pick(rng);
    } else {
      std::iota(indices.begin(), indices.end(), std::size_t{0});
    }

    nodes.clear();
    nodes.emplace_back();
    std::vector<Frame> stack{{0, m, 0}};
    while (!stack.empty()) {
      const Frame fr = stack.back();
      stack.pop_back();
      const std::size_t count = fr.end - fr.begin;

      double sum = 0.0;
      for (std::size_t i = fr.begin; i < fr.end; ++i) sum += y[indices[i]];
      const double mean = sum / static_cast<double>(count);

      bool constant_target = true;
      for (std::size_t i = fr.begin; i < fr.end && constant_target; ++i) {
        constant_target = y[indices[i]] == y[indices[fr.begin]];
      }

      auto& node = nodes[static_cast<std::size_t>(fr.slot)];
      if (count < static_cast<std::size_t>(config.min_samples_split) || constant_target) {
        node.value = mean;
        continue;
      }

      // best split = the one maximizing sum_L^2/n_L + sum_R^2/n_R
      // (equivalent to minimizing child SSE); first feature / first
      // position wins ties, so trees are deterministic.
      SplitChoice best;
      for (std::size_t j = 0; j < f; ++j) {
        sorted.assign(indices.begin() + static_cast<std::ptrdiff_t>(fr.begin),
                      indices.begin() + static_cast<std::ptrdiff_t>(fr.end));
        std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
          if (x[j][a] != x[j][b]) return x[j][a] < x[j][b];
          return a < b;
        });
        double left_sum = 0.0;
        for (std::size_t pos = 1; pos < count; ++pos) {
          left_sum += y[sorted[pos - 1]];
          const double lo = x[j][sorted[pos - 1]];
          const double hi = x[j][sorted[pos]];
          if (lo == hi) continue;  // can't separate equal values
          const double right_sum = sum - left_sum;
          const double score =
              left_sum * left_sum / static_cast<double>(pos) +
              right_sum * right_sum / static_cast<double>(count - pos);
          if (score > best.score) {
            best.score = score;
            best.feature = static_cast<int>(j);
            best.threshold = lo + (hi - lo) / 2.0;
            // for 1-ulp gaps the midpoint can round up to `hi`, which would
            // leave the right side empty; fall back to the exact low value
            if (!(best.threshold < hi)) best.threshold = lo;
          }
        }
      }

      if (best.feature < 0) {  // all rows identical in every feature
        node.value = mean;
        continue;
      }

      // partition `indices[fr.begin, fr.end)` around the threshold, keeping
      // it stable so the layout stays reproducible
      auto mid = std::stable_partition(
          indices.begin() + static_cast<std::ptrdiff_t>(fr.begin),
          indices.begin() + static_cast<std::ptrdiff_t>(fr.end),
          [&](std::size_t idx) { return x[static_cast<std::size_t>(best.feature)][idx] <= best.threshold; });
      const auto split_at = static_cast<std::size_t>(mid - indices.begin());

      // fill in the node before growing the vector: emplace_back may
      // reallocate and would invalidate the `node` reference
      const auto left_slot = static_cast<std::int32_t>(nodes.size());
      const auto right_slot = left_slot + 1;
      node.feature = best.feature;
      node.threshold = best.threshold;
      node.left = left_slot;
      node.right = right_slot;
      nodes.emplace_back();
      nodes.emplace_back();
      stack.push_back({split_at, fr.end, right_slot});
      stack.push_back({fr.begin, split_at, left_slot});
    }
  }
  return model;
}

double ForestModel::predict(std::span<const double> x) const {
  if (trees_.empty()) {
    throw std::logic_error("ForestModel: model is untrained");
  }
  if (x.size() != feature_names_.size()) {
    throw std::invalid_argument("ForestModel::predict: expected " +
                                std::to_string(feature_names_.size()) + " values, got " +
                                std::to_string(x.size()));
  }
  double sum = 0.0;
  for (const auto& nodes : trees_) {
    std::size_t at = 0;
    while (nodes[at].feature >= 0) {
      const auto& nd = nodes[at];
      at = static_cast<std::size_t>(x[static_cast<std::size_t>(nd.feature)] <= nd.threshold
                                        ? nd.left
                                        : nd.right);
    }
    sum += nodes[at].value;
  }
  const double mean = sum / static_cast<double>(trees_.size());
  return std::clamp(mean, target_floor_, target_ceiling_);
}

double nmae(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) {
    throw std::invalid_argument("nmae: length mismatch");
  }
  if (actual.empty()) {
    throw std::invalid_argument("nmae: empty input");
  }
  double mean = 0.0;
  for (double v : actual) mean += v;
  mean /= static_cast<double>(actual.size());
  if (mean == 0.0) {
    throw std::domain_error("nmae: mean of actuals is zero, error is undefined");
  }
  double mae = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) mae += std::abs(actual[i] - predicted[i]);
  mae /= static_cast<double>(actual.size());
  return mae / std::abs(mean);
}

namespace {

EvaluationReport evaluate_split(const TraceWindow& window, const SelectedFeatureSet& features,
                                const std::vector<std::int64_t>& train_rows,
                                const std::vector<std::int64_t>& test_rows, std::uint64_t seed,
                                const ForestConfig& config) {
  const TraceWindow projected = window.project(features.members);
  TraceWindow train(projected.catalog());
  std::int64_t next = 1;
  for (auto r : train_rows) {
    Sample s = projected.row(r);
    s.t = next++;
    train.append(s);
  }
  const ForestModel model = train_forest(train, features, derive_seed(seed, 0x706c616e74ull),
                                         config);

  std::vector<double> actual, predicted;
  actual.reserve(test_rows.size());
  predicted.reserve(test_rows.size());
  for (auto r : test_rows) {
    const Sample s = projected.row(r);
    if (!s.target) {
      throw std::invalid_argument("evaluation: test row " + std::to_string(r) + " lacks a target");
    }
    actual.push_back(*s.target);
    predicted.push_back(model.predict(s.values));
  }

  EvaluationReport rep;
  rep.train_count = static_cast<std::int64_t>(train_rows.size());
  rep.test_count = static_cast<std::int64_t>(test_rows.size());
  rep.nmae = nmae(actual, predicted);
  return rep;
}

}  // namespace

EvaluationReport offline_eval(const TraceWindow& window, const SelectedFeatureSet& features,
                              std::uint64_t seed, const ForestConfig& config) {
  const std::int64_t t = window.length();
  if (t < 2) {
    throw std::invalid_argument("offline_eval: need at least 2 rows");
  }
  std::vector<std::int64_t> rows(static_cast<std::size_t>(t));
  std::iota(rows.begin(), rows.end(), std::int64_t{1});
  std::mt19937_64 rng(derive_seed(seed, 0x7368756666ull));
  std::shuffle(rows.begin(), rows.end(), rng);

  auto train_count = static_cast<std::int64_t>(std::floor(0.7 * static_cast<double>(t)));
  train_count = std::clamp<std::int64_t>(train_count, 1, t - 1);
  std::vector<std::int64_t> train_rows(rows.begin(), rows.begin() + train_count);
  std::vector<std::int64_t> test_rows(rows.begin() + train_count, rows.end());
  return evaluate_split(window, features, train_rows, test_rows, seed, config);
}

EvaluationReport online_eval(const TraceWindow& window, const SelectedFeatureSet& features,
                             std::int64_t t_train, std::uint64_t seed,
                             const ForestConfig& config) {
  if (t_train < 1 || t_train >= window.length()) {
    throw std::invalid_argument("online_eval: t_train must leave a nonempty test tail");
  }
  std::vector<std::int64_t> train_rows(static_cast<std::size_t>(t_train));
  std::iota(train_rows.begin(), train_rows.end(), std::int64_t{1});
  std::vector<std::int64_t> test_rows(static_cast<std::size_t>(window.length() - t_train));
  std::iota(test_rows.begin(), test_rows.end(), t_train + 1);
  return evaluate_split(window, features, train_rows, test_rows, seed, config);
}

}  // namespace osfs
