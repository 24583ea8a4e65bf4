#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osfs/types.hpp"

namespace osfs {

enum class RankerKind { kArr, kLs };

/// Ties are broken by catalog order (ascending index); kept explicit so the
/// rule travels with the config.
enum class TieBreak { kCatalogOrder };

struct RankerConfig {
  RankerKind kind = RankerKind::kArr;
  int ls_neighbors = 5;
  double ls_kernel_width = 1.0;
  TieBreak tie_break = TieBreak::kCatalogOrder;
};

/// Full ordering of the catalog at one prefix length. `order` is best-first;
/// `scores` is indexed by catalog position and uses the ranker's native
/// orientation (ARR: higher is better, LS: lower is better).
struct RankedList {
  std::vector<std::string> order;
  std::vector<double> scores;
  std::int64_t t = 0;
};

/// Variance-minus-redundancy ranking. Each column is min-max scaled over the
/// window, relevance is its population variance, redundancy the mean
/// absolute Pearson correlation to every other column (0 when a column is
/// constant), score = relevance - redundancy, descending.
RankedList rank_arr(const TraceWindow& window, const RankerConfig& config = {});

/// Laplacian score ranking, ascending. kNN graph over the samples of the
/// min-max scaled window (self excluded, OR-symmetrized, ties by distance
/// then index), heat-kernel edge weights exp(-d^2 / width). Degenerate
/// columns get a +inf score and sink to the end. Requires
/// window.length() >= ls_neighbors + 1.
RankedList rank_ls(const TraceWindow& window, const RankerConfig& config = {});

/// Dispatch on config.kind.
RankedList rank(const TraceWindow& window, const RankerConfig& config);

/// First k entries of the ranking as a feature set (carries the ranking's t).
SelectedFeatureSet top_k(const RankedList& ranked, int k);

}  // namespace osfs
