#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "osfs/ranking.hpp"
#include "osfs/stability.hpp"
#include "osfs/types.hpp"

namespace osfs {

enum class StabilityCondition { kSimilarity, kFrequency };

/// Walk order over the (k, t) grid: kKSmall finishes a whole k row before
/// moving to the next k, kTSmall sweeps all k at one checkpoint before
/// growing t.
enum class SearchPolicy { kKSmall, kTSmall };

struct OsfsConfig {
  RankerConfig ranker;
  StabilityCondition condition = StabilityCondition::kSimilarity;
  SearchPolicy policy = SearchPolicy::kKSmall;
  SearchSpace space = SearchSpace::similarity_default();
  double eta = 0.5;
  int history_rows = 10;     // r, frequency condition only
  int required_streak = 10;  // w, frequency condition only

  /// Canonical defaults for a (ranker, condition, policy) combination:
  /// doubling checkpoints + eta 0.5 for similarity, linear checkpoints +
  /// eta 0.9 for frequency.
  static OsfsConfig make(RankerKind kind, StabilityCondition condition, SearchPolicy policy);
};

struct OsfsResult {
  SelectedFeatureSet feature_set;
  int k = 0;
  std::int64_t t_k = 0;  // prefix length the reported set was computed from
  std::int64_t samples_consumed = 0;
  bool exhausted_grid = false;  // walked off the grid without stabilizing
};

/// Pull interface over a stream. next() hands out samples in order and
/// returns nullopt once the stream ends.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual const FeatureCatalog& catalog() const = 0;
  virtual std::optional<Sample> next() = 0;
};

/// Replays an in-memory window, optionally from an offset / with a cap.
class WindowSource final : public SampleSource {
 public:
  explicit WindowSource(const TraceWindow& window, std::int64_t start = 1,
                        std::optional<std::int64_t> limit = std::nullopt);

  const FeatureCatalog& catalog() const override;
  std::optional<Sample> next() override;

 private:
  const TraceWindow* window_;
  std::int64_t cursor_;  // next row to hand out (1-based, absolute)
  std::int64_t end_;     // one past the last row to hand out
  std::int64_t emitted_ = 0;
};

/// The stream ended before the search could finish. Carries how many samples
/// were read and, when at least one checkpoint completed, the most recent
/// feature set as a best-effort partial result.
class StreamExhausted : public std::runtime_error {
 public:
  StreamExhausted(std::int64_t consumed, std::optional<OsfsResult> partial);
  std::int64_t consumed;
  std::optional<OsfsResult> partial;
};

GridPoint first_grid_point(SearchPolicy policy, const SearchSpace& space);

/// Successor of `current` in walk order, nullopt when the grid is done.
/// `current` must be a member of the grid.
std::optional<GridPoint> next_grid_point(SearchPolicy policy, const GridPoint& current,
                                         const SearchSpace& space);

using RankingFn = std::function<RankedList(const TraceWindow&)>;

/// Runs the online search: pulls samples lazily (each sample is read exactly
/// once), ranks each visited prefix once (rankings are shared across k), and
/// stops at the first grid point whose stability condition fires. If the
/// whole grid is exhausted the set at the largest (k, t) is returned with
/// exhausted_grid set.
OsfsResult osfs_run(SampleSource& source, const OsfsConfig& config);

/// Same, with an injected ranking function (used for testing the search
/// mechanics in isolation).
OsfsResult osfs_run(SampleSource& source, const OsfsConfig& config, const RankingFn& rank_fn);

/// The canonical instantiation: ARR ranker, similarity rule, k-small walk,
/// default grid.
OsfsResult osfs_arr_sim_ksmall(SampleSource& source);

}  // namespace osfs
