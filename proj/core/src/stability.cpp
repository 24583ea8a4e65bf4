#include "osfs/stability.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace osfs {

double set_similarity(const SelectedFeatureSet& a, const SelectedFeatureSet& b) {
  if (a.k != b.k) {
    throw std::invalid_argument("set_similarity: sets have different k (" + std::to_string(a.k) +
                                " vs " + std::to_string(b.k) + ")");
  }
  if (a.k <= 0) {
    throw std::invalid_argument("set_similarity: k must be positive");
  }
  // both member lists are sorted, so intersect by merge
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.members.size() && j < b.members.size()) {
    const int cmp = a.members[i].compare(b.members[j]);
    if (cmp == 0) {
      ++common;
      ++i;
      ++j;
    } else if (cmp < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.k);
}

bool similarity_stable(double sim_prev, double sim_next, double eta) {
  return sim_next < sim_prev && sim_prev > eta;
}

std::vector<std::uint8_t> representation_vector(const SelectedFeatureSet& set,
                                                const FeatureCatalog& catalog) {
  std::vector<std::uint8_t> z(catalog.size(), 0);
  for (const auto& name : set.members) {
    auto idx = catalog.index_of(name);
    if (!idx) {
      throw std::invalid_argument("representation_vector: feature not in catalog: " + name);
    }
    z[*idx] = 1;
  }
  return z;
}

SelectionHistory::SelectionHistory(std::size_t feature_count, std::size_t capacity)
    : feature_count_(feature_count), capacity_(capacity) {
  if (capacity_ < 2) {
    throw std::invalid_argument("SelectionHistory: capacity must be >= 2");
  }
  if (feature_count_ == 0) {
    throw std::invalid_argument("SelectionHistory: feature_count must be > 0");
  }
}

void SelectionHistory::push(std::vector<std::uint8_t> row) {
  if (row.size() != feature_count_) {
    throw std::invalid_argument("SelectionHistory: row length mismatch");
  }
  const auto k = static_cast<std::size_t>(std::count(row.begin(), row.end(), std::uint8_t{1}));
  if (row_popcount_ && *row_popcount_ != k) {
    throw std::invalid_argument("SelectionHistory: rows must share the same k");
  }
  row_popcount_ = k;
  if (rows_.size() == capacity_) rows_.pop_front();
  rows_.push_back(std::move(row));
}

double frequency_stability(const SelectionHistory& history) {
  if (!history.full()) {
    throw std::invalid_argument("frequency_stability: history is not full yet");
  }
  const auto r = static_cast<double>(history.capacity());
  const auto n = history.feature_count();
  const auto& rows = history.rows();

  const auto k = static_cast<double>(
      std::accumulate(rows.front().begin(), rows.front().end(), std::size_t{0}));
  if (k <= 0.0 || k >= static_cast<double>(n)) {
    throw std::invalid_argument("frequency_stability: requires 0 < k < n");
  }

  double mean_var = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double p = 0.0;
    for (const auto& row : rows) p += row[j];
    p /= r;
    mean_var += (r / (r - 1.0)) * p * (1.0 - p);
  }
  mean_var /= static_cast<double>(n);

  const double ratio = k / static_cast<double>(n);
  return 1.0 - mean_var / (ratio * (1.0 - ratio));
}

bool frequency_stable(StabilityState& state, double stab) {
  state.values.push_back(stab);
  if (stab > state.eta) {
    ++state.streak;
  } else {
    state.streak = 0;
  }
  return state.streak >= state.w;
}

}  // namespace osfs
