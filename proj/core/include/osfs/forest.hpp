#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "osfs/types.hpp"

namespace osfs {

struct ForestConfig {
  int tree_count = 100;
  bool bootstrap = true;
  int min_samples_split = 2;
  // depth is unlimited and every feature is considered at every split
};

/// Bagged regression trees with variance-reduction splits and mean leaves.
class ForestModel {
 public:
  /// Mean prediction over all trees; input order must match feature_names().
  double predict(std::span<const double> x) const;

  const std::vector<std::string>& feature_names() const { return feature_names_; }
  int tree_count() const { return static_cast<int>(trees_.size()); }
  double target_floor() const { return target_floor_; }
  double target_ceiling() const { return target_ceiling_; }

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
  };

  friend ForestModel train_forest(const TraceWindow&, const SelectedFeatureSet&, std::uint64_t,
                                  const ForestConfig&);

  std::vector<std::vector<Node>> trees_;
  std::vector<std::string> feature_names_;
  double target_floor_ = 0.0;
  double target_ceiling_ = 0.0;
};

/// Trains on the given window restricted to `features`. Every row must carry
/// a target. Deterministic for a fixed (window, features, seed, config).
ForestModel train_forest(const TraceWindow& window, const SelectedFeatureSet& features,
                         std::uint64_t seed, const ForestConfig& config = {});

/// Mean absolute error normalized by |mean(actual)|. Lengths must match and
/// be nonzero; a zero-mean actual vector is rejected.
double nmae(std::span<const double> actual, std::span<const double> predicted);

struct EvaluationReport {
  double nmae = 0.0;
  std::int64_t train_count = 0;
  std::int64_t test_count = 0;
};

/// Seeded 70/30 shuffle split over the whole window; trains on the 70%.
EvaluationReport offline_eval(const TraceWindow& window, const SelectedFeatureSet& features,
                              std::uint64_t seed, const ForestConfig& config = {});

/// Trains on the first t_train rows, tests on everything after them.
EvaluationReport online_eval(const TraceWindow& window, const SelectedFeatureSet& features,
                             std::int64_t t_train, std::uint64_t seed,
                             const ForestConfig& config = {});

}  // namespace osfs
