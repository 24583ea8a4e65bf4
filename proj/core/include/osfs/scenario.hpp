#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "osfs/forest.hpp"
#include "osfs/search.hpp"
#include "osfs/types.hpp"

namespace osfs {

/// One evaluation scenario: a (ranker, condition, policy) triple run from
/// several stream offsets of the same trace.
struct Scenario {
  std::string dataset;  // label for the report's first column
  RankerKind ranker = RankerKind::kArr;
  StabilityCondition condition = StabilityCondition::kSimilarity;
  SearchPolicy policy = SearchPolicy::kKSmall;
  std::vector<std::int64_t> start_points;  // empty -> default_start_points(seed)
  std::uint64_t seed = 1;
  ForestConfig forest;
};

/// The canonical draw: offset 1 plus nine uniform draws on [2, 10000].
std::vector<std::int64_t> default_start_points(std::uint64_t seed);

struct RunRecord {
  std::int64_t start_point = 0;
  bool skipped = false;  // search window would run past the trace end
  int k = 0;
  std::int64_t t_k = 0;
  double online_fs_error = 0.0;
  double offline_fs_error = 0.0;
};

struct ColumnStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample std over the non-skipped runs
};

struct ScenarioReport {
  std::string dataset;
  std::string method;  // ranker name
  std::string metric;  // stability condition name
  std::string search;  // policy name
  std::vector<RunRecord> runs;
  ColumnStats k_stats, t_k_stats, online_stats, offline_stats;
  std::uint64_t seed = 0;
};

/// Runs OSFS once per start point (in parallel; results are order-stable and
/// seed-deterministic). Per run: online error = offline evaluation of the
/// online-selected set over the whole trace; offline error = same evaluation
/// with the top-k of the full-trace ranking at that run's k, sharing the
/// run's split so the comparison is paired.
ScenarioReport run_scenario(const TraceWindow& trace, const Scenario& scenario);

enum class ReportFormat { kDelimited, kJson };

/// Delimited: header + one aggregate row (mean±std cells), Table-style
/// column order: dataset, method, metric, search, k, t_k, online error,
/// offline error. Json: the full report including per-run rows. Both byte
/// deterministic for a fixed report.
void emit_report(const ScenarioReport& report, ReportFormat format, std::ostream& out);
void emit_report(const ScenarioReport& report, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace osfs
