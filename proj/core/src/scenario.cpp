#include "osfs/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "osfs/ranking.hpp"
#include "osfs/rng.hpp"

namespace osfs {

namespace {

const char* ranker_name(RankerKind kind) {
  return kind == RankerKind::kArr ? "ARR" : "LS";
}
const char* condition_name(StabilityCondition c) {
  return c == StabilityCondition::kSimilarity ? "similarity" : "stability";
}
const char* policy_name(SearchPolicy p) {
  return p == SearchPolicy::kKSmall ? "k-small" : "t-small";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

ColumnStats stats_of(const std::vector<double>& xs) {
  ColumnStats s;
  if (xs.empty()) return s;
  for (double v : xs) s.mean += v;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double acc = 0.0;
    for (double v : xs) acc += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

std::vector<std::int64_t> default_start_points(std::uint64_t seed) {
  std::vector<std::int64_t> starts{1};
  std::mt19937_64 rng(derive_seed(seed, 0x5746u));
  std::uniform_int_distribution<std::int64_t> draw(2, 10000);
  for (int i = 0; i < 9; ++i) starts.push_back(draw(rng));
  return starts;
}

ScenarioReport run_scenario(const TraceWindow& trace, const Scenario& scenario) {
  ScenarioReport report;
  report.dataset = scenario.dataset;
  report.method = ranker_name(scenario.ranker);
  report.metric = condition_name(scenario.condition);
  report.search = policy_name(scenario.policy);
  report.seed = scenario.seed;

  const std::vector<std::int64_t> starts = scenario.start_points.empty()
                                               ? default_start_points(scenario.seed)
                                               : scenario.start_points;
  if (starts.empty()) {
    throw std::invalid_argument("run_scenario: no start points");
  }

  const OsfsConfig osfs_cfg =
      OsfsConfig::make(scenario.ranker, scenario.condition, scenario.policy);
  const std::int64_t window_need = osfs_cfg.space.t_checkpoints.back();

  // the offline reference ranking over the full trace is shared by all runs
  const RankedList full_ranking = rank(trace, osfs_cfg.ranker);

  auto run_one = [&](std::size_t run_idx) {
    const std::int64_t start = starts[run_idx];
    RunRecord rec;
    rec.start_point = start;
    if (start < 1 || start + window_need - 1 > trace.length()) {
      rec.skipped = true;  // search window would run past the trace end
      return rec;
    }
    const std::uint64_t run_seed = derive_seed(scenario.seed, 0x1000 + run_idx);
    WindowSource source(trace, start);
    OsfsResult result;
    try {
      result = osfs_run(source, osfs_cfg);
    } catch (const StreamExhausted&) {
      rec.skipped = true;
      return rec;
    }
    rec.k = result.k;
    rec.t_k = result.t_k;
    rec.online_fs_error =
        offline_eval(trace, result.feature_set, run_seed, scenario.forest).nmae;
    rec.offline_fs_error =
        offline_eval(trace, top_k(full_ranking, result.k), run_seed, scenario.forest).nmae;
    return rec;
  };

  std::vector<std::future<RunRecord>> futures;
  futures.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    futures.push_back(std::async(std::launch::async, run_one, i));
  }
  for (auto& f : futures) report.runs.push_back(f.get());

  std::vector<double> ks, tks, online, offline;
  for (const auto& r : report.runs) {
    if (r.skipped) continue;
    ks.push_back(r.k);
    tks.push_back(static_cast<double>(r.t_k));
    online.push_back(r.online_fs_error);
    offline.push_back(r.offline_fs_error);
  }
  report.k_stats = stats_of(ks);
  report.t_k_stats = stats_of(tks);
  report.online_stats = stats_of(online);
  report.offline_stats = stats_of(offline);
  return report;
}

void emit_report(const ScenarioReport& report, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::kDelimited) {
    out << "dataset,method,metric,search,k,t_k,online_fs_error,offline_fs_error\n";
    const bool any = std::any_of(report.runs.begin(), report.runs.end(),
                                 [](const RunRecord& r) { return !r.skipped; });
    if (!any) return;  // header-only file
    auto cell = [](const ColumnStats& s) {
      return format_number(s.mean) + "±" + format_number(s.stddev);
    };
    out << report.dataset << ',' << report.method << ',' << report.metric << ','
        << report.search << ',' << cell(report.k_stats) << ',' << cell(report.t_k_stats) << ','
        << cell(report.online_stats) << ',' << cell(report.offline_stats) << '\n';
    return;
  }

  nlohmann::ordered_json j;
  j["dataset"] = report.dataset;
  j["method"] = report.method;
  j["metric"] = report.metric;
  j["search"] = report.search;
  j["seed"] = report.seed;
  auto stats = [](const ColumnStats& s) {
    return nlohmann::ordered_json{{"mean", s.mean}, {"stddev", s.stddev}};
  };
  j["k"] = stats(report.k_stats);
  j["t_k"] = stats(report.t_k_stats);
  j["online_fs_error"] = stats(report.online_stats);
  j["offline_fs_error"] = stats(report.offline_stats);
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : report.runs) {
    nlohmann::ordered_json row;
    row["start_point"] = r.start_point;
    row["skipped"] = r.skipped;
    if (!r.skipped) {
      row["k"] = r.k;
      row["t_k"] = r.t_k;
      row["online_fs_error"] = r.online_fs_error;
      row["offline_fs_error"] = r.offline_fs_error;
    }
    j["runs"].push_back(std::move(row));
  }
  out << j.dump(2) << '\n';
}

void emit_report(const ScenarioReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write report: " + path.string());
  }
  emit_report(report, format, out);
  if (!out) {
    throw std::runtime_error("report write failed: " + path.string());
  }
}

}  // namespace osfs
