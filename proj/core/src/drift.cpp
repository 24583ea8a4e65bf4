#include "osfs/drift.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "osfs/rng.hpp"

namespace osfs {

void PageHinkleyState::reset() {
  count = 0;
  mean = 0.0;
  cumulative = 0.0;
  floor = std::numeric_limits<double>::infinity();
}

bool page_hinkley_update(PageHinkleyState& state, double value) {
  if (value < 0.0 || std::isnan(value)) {
    throw std::invalid_argument("page_hinkley_update: value must be a nonnegative number");
  }
  state.count += 1;
  state.mean += (value - state.mean) / static_cast<double>(state.count);
  state.cumulative += value - state.mean - state.delta;
  state.floor = std::min(state.floor, state.cumulative);
  return state.count >= state.min_instances && state.cumulative - state.floor > state.lambda;
}

DriftDetector::DriftDetector(ForestModel teacher, ForestModel student, PageHinkleyState ph,
                             std::int64_t n_init)
    : teacher_(std::move(teacher)), student_(std::move(student)), ph_(ph), n_init_(n_init) {}

bool DriftDetector::observe(std::span<const double> x) {
  const double d = std::abs(teacher_.predict(x) - student_.predict(x));
  const bool alarm = page_hinkley_update(ph_, d);
  if (alarm) ph_.reset();
  return alarm;
}

DriftDetector train_teacher_student(const TraceWindow& window, const SelectedFeatureSet& features,
                                    std::int64_t n_init, std::uint64_t seed,
                                    const PageHinkleyState& ph_template,
                                    const ForestConfig& forest) {
  if (n_init < 1 || n_init > window.length()) {
    throw std::out_of_range("train_teacher_student: n_init=" + std::to_string(n_init) +
                            " outside window of length " + std::to_string(window.length()));
  }
  const TraceWindow init = window.prefix(n_init).project(features.members);
  ForestModel teacher = train_forest(init, features, derive_seed(seed, 1), forest);

  // student labels are the teacher's own outputs, never the true targets
  TraceWindow student_train(init.catalog());
  for (std::int64_t i = 1; i <= init.length(); ++i) {
    Sample s = init.row(i);
    s.target = teacher.predict(s.values);
    student_train.append(s);
  }
  ForestModel student = train_forest(student_train, features, derive_seed(seed, 2), forest);

  PageHinkleyState ph = ph_template;
  ph.reset();
  return DriftDetector(std::move(teacher), std::move(student), ph, n_init);
}

namespace {

// SampleSource view over a growing cache; reads past the cached end pull
// fresh samples from the underlying stream. Hands out rows re-indexed from
// its offset so OSFS sees a stream starting at t=1.
class CacheSource final : public SampleSource {
 public:
  CacheSource(TraceWindow& cache, const std::function<bool()>& pull, std::int64_t offset)
      : cache_(cache), pull_(pull), cursor_(offset) {}

  const FeatureCatalog& catalog() const override { return cache_.catalog(); }

  std::optional<Sample> next() override {
    while (cursor_ > cache_.length()) {
      if (!pull_()) return std::nullopt;
    }
    Sample s = cache_.row(cursor_);
    s.t = ++emitted_;
    ++cursor_;
    return s;
  }

 private:
  TraceWindow& cache_;
  const std::function<bool()>& pull_;
  std::int64_t cursor_;
  std::int64_t emitted_ = 0;
};

double checked_target(const TraceWindow& cache, std::int64_t t) {
  if (!cache.has_target(t)) {
    throw std::invalid_argument("drift_pipeline: sample " + std::to_string(t) +
                                " lacks a target; the stream must be labeled throughout");
  }
  return cache.target(t);
}

std::vector<std::size_t> member_indices(const FeatureCatalog& catalog,
                                        const SelectedFeatureSet& set) {
  std::vector<std::size_t> idx;
  idx.reserve(set.members.size());
  for (const auto& name : set.members) {
    auto at = catalog.index_of(name);
    if (!at) {
      throw std::invalid_argument("drift_pipeline: selected feature missing from catalog: " +
                                  name);
    }
    idx.push_back(*at);
  }
  return idx;
}

}  // namespace

DriftTimeline drift_pipeline(SampleSource& source, const DriftConfig& config) {
  if (config.n_init < 1) {
    throw std::invalid_argument("drift_pipeline: n_init must be >= 1");
  }
  DriftTimeline timeline;
  TraceWindow cache(source.catalog());
  auto pull = std::function<bool()>([&]() {
    auto s = source.next();
    if (!s) return false;
    s->t = cache.length() + 1;
    cache.append(*s);
    return true;
  });

  // pulls until the cache holds `upto` rows; false when the stream dries up
  auto ensure = [&](std::int64_t upto) {
    while (cache.length() < upto) {
      if (!pull()) return false;
    }
    return true;
  };

  // --- initial selection ----------------------------------------------------
  OsfsResult selection;
  {
    CacheSource init_source(cache, pull, 1);
    try {
      selection = osfs_run(init_source, config.osfs);
    } catch (const StreamExhausted&) {
      timeline.truncated = true;
      return timeline;
    }
  }
  timeline.initial_feature_set = selection.feature_set;

  const std::int64_t init_len = std::max(selection.samples_consumed, config.n_init);
  if (!ensure(init_len)) {
    timeline.truncated = true;
    return timeline;
  }
  timeline.init_ready_at = init_len;

  SelectedFeatureSet features = selection.feature_set;
  std::vector<std::size_t> feature_idx = member_indices(cache.catalog(), features);
  int model_id = 0;
  std::uint64_t generation = 0;

  // --- offline mode: one offline split over the whole stream -----------------
  if (config.mode == AdaptationMode::kOfflineTrain) {
    while (pull()) {
    }
    const EvaluationReport rep =
        offline_eval(cache, features, derive_seed(config.seed, 0xEFF), config.forest);
    SegmentReport seg;
    seg.t_begin = 1;
    seg.t_end = cache.length();
    seg.count = rep.test_count;
    seg.nmae = rep.nmae;
    timeline.segments.push_back(seg);
    timeline.overall_nmae = rep.nmae;
    return timeline;
  }

  // --- monitored modes --------------------------------------------------------
  auto train_window = cache.slice(1, init_len);
  ForestModel model = train_forest(train_window, features, derive_seed(config.seed, 100),
                                   config.forest);
  DriftDetector detector =
      train_teacher_student(train_window, features, train_window.length(),
                            derive_seed(config.seed, 200 + generation), config.ph, config.forest);

  std::vector<double> x_sel(feature_idx.size());
  auto project = [&](std::int64_t t) {
    const Sample s = cache.row(t);
    for (std::size_t j = 0; j < feature_idx.size(); ++j) x_sel[j] = s.values[feature_idx[j]];
  };
  auto record = [&](std::int64_t t, const ForestModel& m) {
    project(t);
    timeline.prediction_t.push_back(t);
    timeline.actuals.push_back(checked_target(cache, t));
    timeline.predictions.push_back(m.predict(x_sel));
  };

  std::int64_t seg_begin = init_len + 1;
  std::int64_t at = init_len;  // last consumed sample

  auto close_segment = [&](std::int64_t seg_end) {
    if (seg_end < seg_begin) return;
    SegmentReport seg;
    seg.t_begin = seg_begin;
    seg.t_end = seg_end;
    std::vector<double> a, p;
    for (std::size_t i = 0; i < timeline.prediction_t.size(); ++i) {
      const auto t = timeline.prediction_t[i];
      if (t >= seg_begin && t <= seg_end) {
        a.push_back(timeline.actuals[i]);
        p.push_back(timeline.predictions[i]);
      }
    }
    seg.count = static_cast<std::int64_t>(a.size());
    if (!a.empty()) seg.nmae = nmae(a, p);
    timeline.segments.push_back(seg);
    seg_begin = seg_end + 1;
  };

  while (true) {
    if (!ensure(at + 1)) break;  // stream finished cleanly
    ++at;
    record(at, model);
    const bool alarm = detector.observe(x_sel);
    if (!alarm) continue;

    DriftEvent event;
    event.t_detect = at;

    // collect the re-initialization interval [at, ready]; in recompute mode
    // OSFS decides (part of) its length
    SelectedFeatureSet next_features = features;
    std::int64_t consumed = 0;
    if (config.mode == AdaptationMode::kRetrainRecompute) {
      CacheSource re_source(cache, pull, at);
      try {
        OsfsResult rerun = osfs_run(re_source, config.osfs);
        next_features = rerun.feature_set;
        consumed = rerun.samples_consumed;
      } catch (const StreamExhausted&) {
        timeline.truncated = true;
        break;
      }
    }
    const std::int64_t interval = std::max(consumed, config.n_init);
    const std::int64_t ready = at + interval - 1;
    const bool complete = ensure(ready);

    // stale model keeps predicting while the interval fills
    const std::int64_t stale_until = std::min(ready, cache.length());
    for (std::int64_t t = at + 1; t <= stale_until; ++t) record(t, model);
    at = stale_until;
    if (!complete) {
      timeline.truncated = true;
      break;
    }

    ++generation;
    auto interval_window = cache.slice(event.t_detect, interval);
    if (config.mode != AdaptationMode::kOnlineTrain) {
      if (config.mode == AdaptationMode::kRetrainRecompute) {
        features = next_features;
        feature_idx = member_indices(cache.catalog(), features);
        x_sel.assign(feature_idx.size(), 0.0);
      }
      ++model_id;
      model = train_forest(interval_window, features,
                           derive_seed(config.seed, 100 + generation), config.forest);
    }
    detector = train_teacher_student(interval_window, features, interval_window.length(),
                                     derive_seed(config.seed, 200 + generation), config.ph,
                                     config.forest);

    event.t_featureset_ready = ready;
    event.feature_set = features;
    event.model_id = model_id;
    timeline.events.push_back(event);
    close_segment(ready);
  }

  close_segment(at);
  if (!timeline.actuals.empty()) {
    timeline.overall_nmae = nmae(timeline.actuals, timeline.predictions);
  }
  return timeline;
}

}  // namespace osfs
