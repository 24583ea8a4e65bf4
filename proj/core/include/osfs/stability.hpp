#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "osfs/types.hpp"

namespace osfs {

/// |A ∩ B| / k for two k-subsets (both sets must share the same k > 0).
double set_similarity(const SelectedFeatureSet& a, const SelectedFeatureSet& b);

/// Similarity termination rule: the previous similarity is a strict local
/// maximum above eta (sim_prev > eta and sim_next < sim_prev).
bool similarity_stable(double sim_prev, double sim_next, double eta);

/// 0/1 membership vector of `set` against the catalog order.
std::vector<std::uint8_t> representation_vector(const SelectedFeatureSet& set,
                                                const FeatureCatalog& catalog);

/// Ring of the last r representation vectors (all with the same k).
class SelectionHistory {
 public:
  SelectionHistory(std::size_t feature_count, std::size_t capacity);

  void push(std::vector<std::uint8_t> row);  // evicts the oldest when full
  bool full() const { return rows_.size() == capacity_; }
  std::size_t size() const { return rows_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t feature_count() const { return feature_count_; }
  /// Oldest first.
  const std::deque<std::vector<std::uint8_t>>& rows() const { return rows_; }

 private:
  std::size_t feature_count_;
  std::size_t capacity_;
  std::optional<std::size_t> row_popcount_;  // k, fixed by the first push
  std::deque<std::vector<std::uint8_t>> rows_;
};

/// Sample-variance stability of a full history window:
///   stab = 1 - mean_j s_j^2 / ((k/n)(1 - k/n))
/// with s_j^2 = r/(r-1) * p_j (1 - p_j) and p_j the column mean. Requires a
/// full history, r >= 2 and 0 < k < n. Range [-1/(r-1), 1].
double frequency_stability(const SelectionHistory& history);

/// Streak tracker for the frequency termination rule: fires after w
/// consecutive stability values strictly above eta.
struct StabilityState {
  double eta = 0.9;
  int w = 10;
  int streak = 0;
  std::vector<double> values;  // every stability value seen, for reporting
};

/// Feeds one stability value; returns true once the streak reaches w.
bool frequency_stable(StabilityState& state, double stab);

/// Rolling state for the similarity rule: the last two selected sets at one k
/// and the similarity between them.
struct SimilarityState {
  double eta = 0.5;
  std::optional<SelectedFeatureSet> set_prev;
  std::optional<SelectedFeatureSet> set_cur;
  std::optional<double> sim_prev;
};

}  // namespace osfs
