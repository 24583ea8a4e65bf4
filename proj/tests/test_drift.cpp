#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "osfs/drift.hpp"

using namespace osfs;

namespace {

// Two-feature stream: `a` drives a sharp step in the target, `b` is filler.
// After `squeeze_at`, `a` concentrates in the narrow band around the step,
// where a teacher/student pair trained on broad data genuinely disagrees.
TraceWindow band_stream(std::int64_t length, std::int64_t squeeze_at, std::uint64_t seed,
                        std::optional<std::int64_t> drop_targets_from = std::nullopt) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TraceWindow w{FeatureCatalog({"a", "b"})};
  for (std::int64_t t = 1; t <= length; ++t) {
    Sample s;
    s.t = t;
    const double a = t <= squeeze_at ? u(rng) : 0.48 + 0.04 * u(rng);
    const double b = u(rng);
    s.values = {a, b};
    if (!drop_targets_from || t < *drop_targets_from) {
      s.target = 2.0 + (a > 0.5 ? 5.0 : 0.0);
    }
    w.append(s);
  }
  return w;
}

DriftConfig small_config(AdaptationMode mode) {
  DriftConfig cfg;
  cfg.osfs = OsfsConfig::make(RankerKind::kArr, StabilityCondition::kSimilarity,
                              SearchPolicy::kKSmall);
  cfg.osfs.space.k_values = {2};
  cfg.osfs.space.t_checkpoints = {8, 16, 32};
  cfg.mode = mode;
  cfg.n_init = 100;
  cfg.ph.delta = 0.01;  // the squeeze lifts the mean discrepancy to ~0.07
  cfg.ph.lambda = 1.0;  // pre-squeeze excursions top out around 0.24
  cfg.ph.min_instances = 30;
  cfg.forest.tree_count = 20;
  cfg.seed = 77;
  return cfg;
}

}  // namespace

TEST_CASE("page_hinkley on a constant stream never moves off its floor") {
  PageHinkleyState ph;
  for (int i = 0; i < 100000; ++i) {
    CHECK_FALSE(page_hinkley_update(ph, 0.3));
    CHECK(ph.cumulative - ph.floor == 0.0);  // statistic keeps sinking onto the floor
  }
  CHECK(ph.count == 100000);
}

TEST_CASE("page_hinkley flags a mean shift on the first big sample") {
  PageHinkleyState ph;  // delta 0.05, lambda 50, min_instances 30
  for (int i = 0; i < 100; ++i) {
    CHECK_FALSE(page_hinkley_update(ph, 0.0));
  }
  // first post-shift value: increment is 100 - 100/101 - 0.05, way past lambda
  CHECK(page_hinkley_update(ph, 100.0));
  CHECK(ph.count == 101);
}

TEST_CASE("page_hinkley holds alarms until min_instances") {
  PageHinkleyState ph;
  for (int i = 0; i < 10; ++i) {
    CHECK_FALSE(page_hinkley_update(ph, 0.0));
  }
  // the statistic is far beyond lambda from here on, but the gate holds
  // until the 30th observation
  for (int count = 11; count < 30; ++count) {
    CHECK_FALSE(page_hinkley_update(ph, 100.0));
  }
  CHECK(page_hinkley_update(ph, 100.0));
}

TEST_CASE("page_hinkley never resets itself") {
  PageHinkleyState ph;
  ph.lambda = -1.0;  // alarms on every update once counting starts
  ph.min_instances = 1;
  for (int i = 1; i <= 40; ++i) {
    CHECK(page_hinkley_update(ph, 1.0));
    CHECK(ph.count == i);  // counters keep accumulating through alarms
  }
  ph.reset();
  CHECK(ph.count == 0);
  CHECK(ph.mean == 0.0);
  CHECK(ph.cumulative == 0.0);
  CHECK(std::isinf(ph.floor));
  CHECK(ph.lambda == -1.0);  // parameters survive a reset
}

TEST_CASE("page_hinkley replay reproduces the state exactly") {
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> ex(4.0);
  std::vector<double> values;
  for (int i = 0; i < 5000; ++i) values.push_back(ex(rng));

  PageHinkleyState once, split;
  for (double v : values) page_hinkley_update(once, v);
  for (int i = 0; i < 1200; ++i) page_hinkley_update(split, values[static_cast<std::size_t>(i)]);
  for (std::size_t i = 1200; i < values.size(); ++i) page_hinkley_update(split, values[i]);
  CHECK(once.count == split.count);
  CHECK(once.mean == split.mean);
  CHECK(once.cumulative == split.cumulative);
  CHECK(once.floor == split.floor);
}

TEST_CASE("page_hinkley rejects invalid discrepancies") {
  PageHinkleyState ph;
  CHECK_THROWS_AS(page_hinkley_update(ph, -0.001), std::invalid_argument);
  CHECK_THROWS_AS(page_hinkley_update(ph, std::nan("")), std::invalid_argument);
  CHECK(ph.count == 0);  // failed updates leave no trace
}

TEST_CASE("teacher and student agree perfectly on a constant target") {
  TraceWindow w{FeatureCatalog({"x"})};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 1; t <= 60; ++t) {
    Sample s;
    s.t = t;
    s.values = {u(rng)};
    s.target = 4.0;
    w.append(s);
  }
  auto fs = make_feature_set({"x"}, 1);
  DriftDetector det = train_teacher_student(w, fs, 60, 9);
  for (int i = 0; i < 500; ++i) {
    CHECK_FALSE(det.observe(std::vector<double>{u(rng)}));
  }
  CHECK(det.ph().cumulative - det.ph().floor == 0.0);
}

TEST_CASE("train_teacher_student is deterministic and validates n_init") {
  const TraceWindow w = band_stream(120, 120, 8);
  auto fs = make_feature_set({"a", "b"}, 1);
  DriftDetector d1 = train_teacher_student(w, fs, 100, 5);
  DriftDetector d2 = train_teacher_student(w, fs, 100, 5);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> probe = {u(rng), u(rng)};
    CHECK(d1.teacher().predict(probe) == d2.teacher().predict(probe));
    CHECK(d1.student().predict(probe) == d2.student().predict(probe));
  }
  CHECK_THROWS_AS(train_teacher_student(w, fs, 0, 5), std::out_of_range);
  CHECK_THROWS_AS(train_teacher_student(w, fs, 121, 5), std::out_of_range);

  PageHinkleyState tpl;
  tpl.lambda = 7.5;
  tpl.count = 99;  // stale counters in the template must not leak through
  DriftDetector d3 = train_teacher_student(w, fs, 100, 5, tpl);
  CHECK(d3.ph().lambda == 7.5);
  CHECK(d3.ph().count == 0);
}

TEST_CASE("an alarm resets the detector's test") {
  const TraceWindow w = band_stream(120, 120, 8);
  auto fs = make_feature_set({"a", "b"}, 1);
  PageHinkleyState tpl;
  tpl.lambda = -1.0;  // force an alarm on the first observation
  tpl.min_instances = 1;
  DriftDetector det = train_teacher_student(w, fs, 100, 5, tpl);
  CHECK(det.observe(std::vector<double>{0.5, 0.5}));
  CHECK(det.ph().count == 0);
}

TEST_CASE("a stationary stream yields one untouched segment") {
  const TraceWindow w = band_stream(400, 400, 21);  // never squeezed
  WindowSource src(w);
  DriftConfig cfg = small_config(AdaptationMode::kRetrain);
  cfg.ph.lambda = 1e9;  // nothing can trip this
  const DriftTimeline tl = drift_pipeline(src, cfg);
  CHECK_FALSE(tl.truncated);
  CHECK(tl.init_ready_at == 100);
  CHECK(tl.initial_feature_set.members == std::vector<std::string>{"a", "b"});
  CHECK(tl.events.empty());
  REQUIRE(tl.segments.size() == 1);
  CHECK(tl.segments[0].t_begin == 101);
  CHECK(tl.segments[0].t_end == 400);
  CHECK(tl.segments[0].count == 300);
  CHECK(tl.segments[0].nmae == tl.overall_nmae);
  CHECK(tl.overall_nmae >= 0.0);
  REQUIRE(tl.prediction_t.size() == 300);
  CHECK(tl.prediction_t.front() == 101);
  CHECK(tl.prediction_t.back() == 400);
}

TEST_CASE("a long selection pushes readiness past n_init") {
  const TraceWindow w = band_stream(200, 200, 22);
  WindowSource src(w);
  DriftConfig cfg = small_config(AdaptationMode::kRetrain);
  cfg.ph.lambda = 1e9;
  cfg.n_init = 20;  // the selection reads 32 samples, which dominates
  const DriftTimeline tl = drift_pipeline(src, cfg);
  CHECK(tl.init_ready_at == 32);
  REQUIRE(!tl.prediction_t.empty());
  CHECK(tl.prediction_t.front() == 33);
  CHECK(tl.prediction_t.back() == 200);
}

TEST_CASE("retrain mode replaces the model but keeps the feature set") {
  const TraceWindow w = band_stream(800, 300, 31);
  WindowSource src(w);
  const DriftConfig cfg = small_config(AdaptationMode::kRetrain);
  const DriftTimeline tl = drift_pipeline(src, cfg);
  CHECK_FALSE(tl.truncated);
  CHECK(tl.init_ready_at == 100);
  REQUIRE(!tl.events.empty());

  std::int64_t prev_ready = tl.init_ready_at;
  int id = 0;
  for (const auto& ev : tl.events) {
    CHECK(ev.t_detect > prev_ready);            // no detection while re-initializing
    CHECK(ev.t_detect > 300);                   // nothing fires before the squeeze
    CHECK(ev.t_featureset_ready == ev.t_detect + cfg.n_init - 1);
    CHECK(ev.feature_set.members == tl.initial_feature_set.members);
    CHECK(ev.model_id == ++id);                 // every alarm swaps the model in
    prev_ready = ev.t_featureset_ready;
  }
  CHECK(tl.events.front().t_detect < 450);      // the squeeze is caught promptly

  // segments tile [init_ready+1, end] and split exactly at readiness points
  REQUIRE(!tl.segments.empty());
  CHECK(tl.segments.front().t_begin == 101);
  for (std::size_t i = 1; i < tl.segments.size(); ++i) {
    CHECK(tl.segments[i].t_begin == tl.segments[i - 1].t_end + 1);
  }
  CHECK(tl.segments.back().t_end == 800);
  for (std::size_t i = 0; i < tl.events.size(); ++i) {
    REQUIRE(i < tl.segments.size());
    CHECK(tl.segments[i].t_end == tl.events[i].t_featureset_ready);
  }

  // one prediction per monitored sample, in order, no holes
  REQUIRE(tl.prediction_t.size() == 700);
  for (std::size_t i = 0; i < tl.prediction_t.size(); ++i) {
    CHECK(tl.prediction_t[i] == 101 + static_cast<std::int64_t>(i));
  }
}

TEST_CASE("online_train mode records alarms without ever retraining") {
  const TraceWindow w = band_stream(800, 300, 31);
  WindowSource src(w);
  const DriftConfig cfg = small_config(AdaptationMode::kOnlineTrain);
  const DriftTimeline tl = drift_pipeline(src, cfg);
  REQUIRE(!tl.events.empty());
  for (const auto& ev : tl.events) {
    CHECK(ev.model_id == 0);  // the predictor from t=0 stays in force
    CHECK(ev.feature_set.members == tl.initial_feature_set.members);
  }
}

TEST_CASE("recompute mode reruns the selection on the drifted stream") {
  const TraceWindow w = band_stream(800, 300, 31);
  WindowSource src(w);
  const DriftConfig cfg = small_config(AdaptationMode::kRetrainRecompute);
  const DriftTimeline tl = drift_pipeline(src, cfg);
  REQUIRE(!tl.events.empty());
  int id = 0;
  for (const auto& ev : tl.events) {
    // the rerun consumes 32 samples, so n_init still dominates the interval
    CHECK(ev.t_featureset_ready == ev.t_detect + cfg.n_init - 1);
    CHECK(ev.model_id == ++id);
    CHECK(ev.feature_set.k == 2);  // a two-feature catalog can only select both
  }
}

TEST_CASE("a stream that dies mid-interval marks the timeline truncated") {
  const TraceWindow w = band_stream(360, 300, 31);
  WindowSource src(w);
  const DriftConfig cfg = small_config(AdaptationMode::kRetrain);
  const DriftTimeline tl = drift_pipeline(src, cfg);
  // detection lands after 300, so t_detect + 99 overruns the 360 samples
  CHECK(tl.truncated);
  CHECK(tl.events.empty());  // the interval never completed
  REQUIRE(!tl.segments.empty());
  CHECK(tl.segments.back().t_end == 360);  // stale predictions ran to the end
  CHECK(tl.prediction_t.back() == 360);
}

TEST_CASE("a stream shorter than the first checkpoint is truncated immediately") {
  const TraceWindow w = band_stream(5, 5, 31);
  WindowSource src(w);
  const DriftConfig cfg = small_config(AdaptationMode::kRetrain);
  const DriftTimeline tl = drift_pipeline(src, cfg);
  CHECK(tl.truncated);
  CHECK(tl.initial_feature_set.k == 0);
  CHECK(tl.init_ready_at == 0);
  CHECK(tl.segments.empty());
  CHECK(tl.prediction_t.empty());
}

TEST_CASE("offline mode evaluates one shuffled split over everything") {
  const TraceWindow w = band_stream(400, 400, 12);
  WindowSource src(w);
  const DriftConfig cfg = small_config(AdaptationMode::kOfflineTrain);
  const DriftTimeline tl = drift_pipeline(src, cfg);
  CHECK_FALSE(tl.truncated);
  CHECK(tl.events.empty());
  REQUIRE(tl.segments.size() == 1);
  CHECK(tl.segments[0].t_begin == 1);
  CHECK(tl.segments[0].t_end == 400);
  CHECK(tl.segments[0].count == 120);  // the held-out 30%
  CHECK(tl.segments[0].nmae == tl.overall_nmae);
  CHECK(tl.prediction_t.empty());  // no streaming predictions in this mode
}

TEST_CASE("monitored samples must carry targets") {
  const TraceWindow w = band_stream(200, 200, 13, /*drop_targets_from=*/150);
  WindowSource src(w);
  const DriftConfig cfg = small_config(AdaptationMode::kRetrain);
  CHECK_THROWS_AS(drift_pipeline(src, cfg), std::invalid_argument);
}

TEST_CASE("the pipeline is deterministic end to end") {
  const DriftConfig cfg = small_config(AdaptationMode::kRetrainRecompute);
  auto run = [&]() {
    const TraceWindow w = band_stream(800, 300, 31);
    WindowSource src(w);
    return drift_pipeline(src, cfg);
  };
  const DriftTimeline a = run();
  const DriftTimeline b = run();
  CHECK(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].t_detect == b.events[i].t_detect);
    CHECK(a.events[i].t_featureset_ready == b.events[i].t_featureset_ready);
  }
  CHECK(a.overall_nmae == b.overall_nmae);
  CHECK(a.predictions == b.predictions);
}
