#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "osfs/types.hpp"

namespace osfs {

/// What the cleaning / filtering steps did to the catalog.
struct PreprocessReport {
  std::vector<std::string> dropped_missing;       // missing fraction above the cap
  std::vector<std::string> dropped_low_variance;  // variance below threshold
  std::int64_t interpolated_cells = 0;
  std::size_t kept = 0;
};

struct PreprocessOptions {
  double max_missing_frac = 0.3;
  double variance_threshold = 1e-4;
};

/// Drops features whose missing fraction exceeds `max_missing_frac`
/// (strictly), then fills the remaining gaps: linear interpolation between
/// observations, nearest observation at the edges. Targets pass through
/// untouched.
std::pair<TraceWindow, PreprocessReport> clean_missing(const TraceWindow& window,
                                                       double max_missing_frac = 0.3);

/// Per-column (x - min) / (max - min); constant columns map to all zeros.
/// Input must have no missing cells. Targets pass through untouched.
TraceWindow minmax_scale(const TraceWindow& window);

/// Keeps features whose population variance is >= threshold. Throws if
/// nothing survives.
std::pair<TraceWindow, PreprocessReport> variance_filter(const TraceWindow& window,
                                                         double threshold = 1e-4);

/// clean_missing -> minmax_scale -> variance_filter, reports merged.
std::pair<TraceWindow, PreprocessReport> run_preprocess(const TraceWindow& window,
                                                        const PreprocessOptions& opts = {});

}  // namespace osfs
