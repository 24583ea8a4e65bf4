#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "osfs/preprocess.hpp"

using namespace osfs;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TraceWindow from_columns(const std::vector<std::string>& names,
                         const std::vector<std::vector<double>>& cols,
                         const std::vector<double>& targets = {}) {
  TraceWindow w{FeatureCatalog(names)};
  const auto t = cols.front().size();
  for (std::size_t i = 0; i < t; ++i) {
    Sample s;
    s.t = static_cast<std::int64_t>(i + 1);
    for (const auto& c : cols) s.values.push_back(c[i]);
    if (!targets.empty()) s.target = targets[i];
    w.append(s);
  }
  return w;
}

}  // namespace

TEST_CASE("minmax_scale maps each column onto [0,1]") {
  const auto w = from_columns({"a", "b"}, {{0.0, 5.0, 10.0}, {7.0, 7.0, 7.0}}, {1.0, 2.0, 3.0});
  const TraceWindow scaled = minmax_scale(w);
  CHECK(scaled.value(1, 0) == 0.0);
  CHECK(scaled.value(2, 0) == 0.5);
  CHECK(scaled.value(3, 0) == 1.0);
  // constant column becomes all zeros
  for (std::int64_t i = 1; i <= 3; ++i) CHECK(scaled.value(i, 1) == 0.0);
  // targets pass through untouched
  CHECK(scaled.target(2) == 2.0);
}

TEST_CASE("minmax_scale range property on random data") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::vector<double>> cols(3, std::vector<double>(17));
    for (auto& c : cols) {
      for (auto& v : c) v = u(rng);
    }
    const TraceWindow scaled = minmax_scale(from_columns({"a", "b", "c"}, cols));
    for (std::size_t j = 0; j < 3; ++j) {
      double lo = 1.0, hi = 0.0;
      for (std::int64_t i = 1; i <= 17; ++i) {
        const double v = scaled.value(i, j);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      CHECK(lo == 0.0);  // extremes are hit exactly
      CHECK(hi == 1.0);
    }
  }
}

TEST_CASE("minmax_scale rejects missing cells") {
  const auto w = from_columns({"a"}, {{1.0, kNaN, 3.0}});
  CHECK_THROWS_AS(minmax_scale(w), std::invalid_argument);
}

TEST_CASE("variance_filter keeps columns at or above the threshold") {
  // population variance of {0, 0.02}: mean 0.01, var = 1e-4 -> kept (>=)
  const auto w = from_columns({"edge", "flat", "wide"},
                              {{0.0, 0.02}, {0.5, 0.5}, {0.0, 1.0}});
  auto [filtered, report] = variance_filter(w, 1e-4);
  CHECK(filtered.feature_count() == 2);
  CHECK(filtered.catalog().name(0) == "edge");
  CHECK(filtered.catalog().name(1) == "wide");
  CHECK(report.dropped_low_variance == std::vector<std::string>{"flat"});
  CHECK(report.kept == 2);
}

TEST_CASE("variance_filter rejects an all-constant catalog") {
  const auto w = from_columns({"a", "b"}, {{1.0, 1.0}, {2.0, 2.0}});
  CHECK_THROWS_AS(variance_filter(w, 1e-4), std::runtime_error);
}

TEST_CASE("clean_missing drops sparse columns strictly above the cap") {
  // 10 rows: col a has 3 missing (0.3, kept), col b has 4 missing (0.4, dropped)
  std::vector<double> a{1, kNaN, 3, kNaN, 5, 6, 7, kNaN, 9, 10};
  std::vector<double> b{kNaN, kNaN, kNaN, kNaN, 5, 6, 7, 8, 9, 10};
  auto [cleaned, report] = clean_missing(from_columns({"a", "b"}, {a, b}), 0.3);
  CHECK(cleaned.feature_count() == 1);
  CHECK(cleaned.catalog().name(0) == "a");
  CHECK(report.dropped_missing == std::vector<std::string>{"b"});
  CHECK(report.interpolated_cells == 3);
}

TEST_CASE("clean_missing interpolates interior gaps linearly") {
  std::vector<double> a{1.0, kNaN, 3.0, kNaN, kNaN, 9.0};
  auto [cleaned, report] = clean_missing(from_columns({"a"}, {a}), 0.6);
  CHECK(cleaned.value(2, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cleaned.value(4, 0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(cleaned.value(5, 0) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(report.interpolated_cells == 3);
}

TEST_CASE("clean_missing fills edges with the nearest observation") {
  std::vector<double> a{kNaN, kNaN, 4.0, 5.0, kNaN};
  auto [cleaned, report] = clean_missing(from_columns({"a"}, {a}), 0.7);
  CHECK(cleaned.value(1, 0) == 4.0);
  CHECK(cleaned.value(2, 0) == 4.0);
  CHECK(cleaned.value(5, 0) == 5.0);
  CHECK(report.interpolated_cells == 3);
}

TEST_CASE("run_preprocess chains the three steps and merges reports") {
  std::vector<double> good{0.0, kNaN, 10.0, 20.0};   // one gap, survives
  std::vector<double> sparse{kNaN, kNaN, kNaN, 1.0};  // 75% missing, dropped
  std::vector<double> flat{3.0, 3.0, 3.0, 3.0};       // zero variance, dropped
  auto [out, report] =
      run_preprocess(from_columns({"good", "sparse", "flat"}, {good, sparse, flat},
                                  {1.0, 2.0, 3.0, 4.0}));
  CHECK(out.feature_count() == 1);
  CHECK(out.catalog().name(0) == "good");
  CHECK(report.dropped_missing == std::vector<std::string>{"sparse"});
  CHECK(report.dropped_low_variance == std::vector<std::string>{"flat"});
  CHECK(report.interpolated_cells == 1);
  CHECK(report.kept == 1);
  // scaled output
  CHECK(out.value(1, 0) == 0.0);
  CHECK(out.value(4, 0) == 1.0);
  CHECK(out.target(4) == 4.0);
}
