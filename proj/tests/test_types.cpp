#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "osfs/types.hpp"

using namespace osfs;

namespace {

TraceWindow make_window(std::size_t n, std::int64_t t) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < n; ++j) names.push_back("f" + std::to_string(j));
  TraceWindow w{FeatureCatalog(names)};
  for (std::int64_t i = 1; i <= t; ++i) {
    Sample s;
    s.t = i;
    for (std::size_t j = 0; j < n; ++j) {
      s.values.push_back(static_cast<double>(i) + 0.1 * static_cast<double>(j));
    }
    s.target = static_cast<double>(10 * i);
    w.append(s);
  }
  return w;
}

}  // namespace

TEST_CASE("catalog lookups and duplicate rejection") {
  FeatureCatalog cat({"cpu", "mem", "io"});
  CHECK(cat.size() == 3);
  CHECK(cat.name(1) == "mem");
  CHECK(cat.index_of("io") == std::size_t{2});
  CHECK_FALSE(cat.index_of("net").has_value());
  CHECK_THROWS_AS(cat.name(3), std::out_of_range);
  CHECK_THROWS_AS(FeatureCatalog({"a", "b", "a"}), std::invalid_argument);
}

TEST_CASE("append enforces shape and ordering") {
  TraceWindow w{FeatureCatalog({"a", "b"})};
  Sample ok;
  ok.t = 1;
  ok.values = {1.0, 2.0};
  w.append(ok);
  CHECK(w.length() == 1);

  Sample wrong_shape;
  wrong_shape.t = 2;
  wrong_shape.values = {1.0};
  CHECK_THROWS_AS(w.append(wrong_shape), std::invalid_argument);

  Sample gap;
  gap.t = 5;  // must be length+1
  gap.values = {1.0, 2.0};
  CHECK_THROWS_AS(w.append(gap), std::invalid_argument);

  Sample repeat;
  repeat.t = 1;
  repeat.values = {1.0, 2.0};
  CHECK_THROWS_AS(w.append(repeat), std::invalid_argument);
}

TEST_CASE("prefix returns the leading rows and rejects bad lengths") {
  const TraceWindow w = make_window(3, 10);
  const TraceWindow p = w.prefix(4);
  CHECK(p.length() == 4);
  CHECK(p.catalog() == w.catalog());
  for (std::int64_t i = 1; i <= 4; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(p.value(i, j) == w.value(i, j));
    CHECK(p.target(i) == w.target(i));
  }
  CHECK_THROWS_AS(w.prefix(0), std::out_of_range);
  CHECK_THROWS_AS(w.prefix(11), std::out_of_range);

  // prefix of a prefix equals the direct prefix
  const TraceWindow pp = w.prefix(7).prefix(4);
  for (std::int64_t i = 1; i <= 4; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(pp.value(i, j) == p.value(i, j));
  }
}

TEST_CASE("slice re-indexes rows from 1") {
  const TraceWindow w = make_window(2, 8);
  const TraceWindow s = w.slice(3, 4);
  CHECK(s.length() == 4);
  CHECK(s.value(1, 0) == w.value(3, 0));
  CHECK(s.value(4, 1) == w.value(6, 1));
  CHECK(s.row(2).t == 2);
  CHECK_THROWS_AS(w.slice(6, 4), std::out_of_range);
  CHECK_THROWS_AS(w.slice(0, 2), std::out_of_range);
}

TEST_CASE("project keeps the requested columns in the requested order") {
  const TraceWindow w = make_window(4, 3);
  const TraceWindow p = w.project({"f2", "f0"});
  CHECK(p.feature_count() == 2);
  CHECK(p.catalog().name(0) == "f2");
  CHECK(p.value(2, 0) == w.value(2, 2));
  CHECK(p.value(2, 1) == w.value(2, 0));
  CHECK(p.target(3) == w.target(3));
  CHECK_THROWS_AS(w.project({"nope"}), std::invalid_argument);
}

TEST_CASE("targets and labeling") {
  TraceWindow w{FeatureCatalog({"a"})};
  Sample s1;
  s1.t = 1;
  s1.values = {1.0};
  s1.target = 5.0;
  w.append(s1);
  Sample s2;
  s2.t = 2;
  s2.values = {2.0};
  w.append(s2);

  CHECK(w.has_target(1));
  CHECK_FALSE(w.has_target(2));
  CHECK(w.target(1) == 5.0);
  CHECK_THROWS_AS(w.target(2), std::invalid_argument);
  CHECK_FALSE(w.fully_labeled());
  CHECK_THROWS_AS(w.targets(), std::invalid_argument);

  const TraceWindow labeled = make_window(1, 3);
  CHECK(labeled.fully_labeled());
  CHECK(labeled.targets() == std::vector<double>{10.0, 20.0, 30.0});
}

TEST_CASE("make_feature_set sorts, counts and rejects duplicates") {
  const SelectedFeatureSet set = make_feature_set({"z", "m", "a"}, 42);
  CHECK(set.k == 3);
  CHECK(set.t == 42);
  CHECK(set.members == std::vector<std::string>{"a", "m", "z"});
  CHECK(set.contains("m"));
  CHECK_FALSE(set.contains("q"));
  CHECK_THROWS_AS(make_feature_set({"a", "a"}, 1), std::invalid_argument);
}

TEST_CASE("search space defaults") {
  const SearchSpace sim = SearchSpace::similarity_default();
  CHECK(sim.k_values == std::vector<int>{4, 16, 64, 256});
  CHECK(sim.t_checkpoints ==
        std::vector<std::int64_t>{8, 16, 32, 64, 128, 256, 512, 1024});
  sim.validate();

  const SearchSpace freq = SearchSpace::frequency_default();
  CHECK(freq.t_checkpoints.size() == 91);
  CHECK(freq.t_checkpoints.front() == 100);
  CHECK(freq.t_checkpoints.back() == 1000);
  CHECK(freq.t_checkpoints[1] - freq.t_checkpoints[0] == 10);
  freq.validate();
}

TEST_CASE("search space validation") {
  SearchSpace s;
  s.k_values = {4, 4};
  s.t_checkpoints = {8, 16};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.k_values = {4, 8};
  s.t_checkpoints = {};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.t_checkpoints = {8, 4};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.t_checkpoints = {0, 4};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
