#include "osfs/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace osfs {

namespace {

TraceWindow rebuild(const TraceWindow& window, const std::vector<std::size_t>& keep,
                    const std::vector<std::vector<double>>* replacement_columns) {
  std::vector<std::string> names;
  names.reserve(keep.size());
  for (auto j : keep) names.push_back(window.catalog().name(j));
  TraceWindow out{FeatureCatalog(std::move(names))};
  for (std::int64_t i = 1; i <= window.length(); ++i) {
    Sample s;
    s.t = i;
    s.values.reserve(keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c) {
      const double v = replacement_columns
                           ? (*replacement_columns)[c][static_cast<std::size_t>(i - 1)]
                           : window.value(i, keep[c]);
      s.values.push_back(v);
    }
    const Sample src = window.row(i);
    s.target = src.target;
    out.append(s);
  }
  return out;
}

}  // namespace

std::pair<TraceWindow, PreprocessReport> clean_missing(const TraceWindow& window,
                                                       double max_missing_frac) {
  if (max_missing_frac < 0.0 || max_missing_frac > 1.0) {
    throw std::invalid_argument("max_missing_frac must lie in [0, 1]");
  }
  PreprocessReport report;
  std::vector<std::size_t> keep;
  std::vector<std::vector<double>> filled;
  const auto n = window.feature_count();
  const auto t = window.length();

  for (std::size_t j = 0; j < n; ++j) {
    const auto col = window.column(j);
    std::int64_t missing = 0;
    for (double v : col) {
      if (std::isnan(v)) ++missing;
    }
    const double frac = t == 0 ? 0.0 : static_cast<double>(missing) / static_cast<double>(t);
    if (frac > max_missing_frac) {
      report.dropped_missing.push_back(window.catalog().name(j));
      continue;
    }
    std::vector<double> out(col.begin(), col.end());
    if (missing > 0) {
      // indices of observed cells, in order
      std::vector<std::int64_t> obs;
      for (std::int64_t i = 0; i < t; ++i) {
        if (!std::isnan(out[static_cast<std::size_t>(i)])) obs.push_back(i);
      }
      for (std::int64_t i = 0; i < t; ++i) {
        auto& cell = out[static_cast<std::size_t>(i)];
        if (!std::isnan(cell)) continue;
        auto next = std::lower_bound(obs.begin(), obs.end(), i);
        if (next == obs.begin()) {
          cell = out[static_cast<std::size_t>(obs.front())];  // before first observation
        } else if (next == obs.end()) {
          cell = out[static_cast<std::size_t>(obs.back())];  // after last observation
        } else {
          const std::int64_t b = *next;
          const std::int64_t a = *(next - 1);
          const double va = out[static_cast<std::size_t>(a)];
          const double vb = out[static_cast<std::size_t>(b)];
          cell = va + (vb - va) * static_cast<double>(i - a) / static_cast<double>(b - a);
        }
        ++report.interpolated_cells;
      }
    }
    keep.push_back(j);
    filled.push_back(std::move(out));
  }

  report.kept = keep.size();
  return {rebuild(window, keep, &filled), std::move(report)};
}

TraceWindow minmax_scale(const TraceWindow& window) {
  const auto n = window.feature_count();
  std::vector<std::vector<double>> scaled(n);
  std::vector<std::size_t> keep(n);
  for (std::size_t j = 0; j < n; ++j) {
    keep[j] = j;
    const auto col = window.column(j);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : col) {
      if (std::isnan(v)) {
        throw std::invalid_argument("minmax_scale: missing value in column " +
                                    window.catalog().name(j));
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    auto& out = scaled[j];
    out.reserve(col.size());
    if (col.empty() || lo == hi) {
      out.assign(col.size(), 0.0);
    } else {
      const double span = hi - lo;
      for (double v : col) out.push_back((v - lo) / span);
    }
  }
  return rebuild(window, keep, &scaled);
}

std::pair<TraceWindow, PreprocessReport> variance_filter(const TraceWindow& window,
                                                         double threshold) {
  PreprocessReport report;
  std::vector<std::size_t> keep;
  const auto n = window.feature_count();
  const auto t = window.length();
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = window.column(j);
    double mean = 0.0;
    for (double v : col) mean += v;
    if (t > 0) mean /= static_cast<double>(t);
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    if (t > 0) var /= static_cast<double>(t);
    if (var >= threshold) {
      keep.push_back(j);
    } else {
      report.dropped_low_variance.push_back(window.catalog().name(j));
    }
  }
  if (keep.empty() && n > 0) {
    throw std::runtime_error("variance_filter: every feature fell below the threshold");
  }
  report.kept = keep.size();
  return {rebuild(window, keep, nullptr), std::move(report)};
}

std::pair<TraceWindow, PreprocessReport> run_preprocess(const TraceWindow& window,
                                                        const PreprocessOptions& opts) {
  auto [cleaned, clean_report] = clean_missing(window, opts.max_missing_frac);
  TraceWindow scaled = minmax_scale(cleaned);
  auto [filtered, var_report] = variance_filter(scaled, opts.variance_threshold);
  PreprocessReport report;
  report.dropped_missing = std::move(clean_report.dropped_missing);
  report.dropped_low_variance = std::move(var_report.dropped_low_variance);
  report.interpolated_cells = clean_report.interpolated_cells;
  report.kept = var_report.kept;
  return {std::move(filtered), std::move(report)};
}

}  // namespace osfs
