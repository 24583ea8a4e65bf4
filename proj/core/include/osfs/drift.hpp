#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "osfs/forest.hpp"
#include "osfs/search.hpp"
#include "osfs/types.hpp"

namespace osfs {

/// One-sided (increasing mean) Page-Hinkley test over a nonnegative
/// discrepancy stream. The cumulative statistic and its running minimum
/// never reset on their own; reset() starts a fresh window.
struct PageHinkleyState {
  double delta = 0.05;
  double lambda = 50.0;
  int min_instances = 30;

  std::int64_t count = 0;
  double mean = 0.0;
  double cumulative = 0.0;                                     // m_t
  double floor = std::numeric_limits<double>::infinity();      // M_t = min m_s

  void reset();  // clears the counters, keeps the parameters
};

/// Feeds one value: updates the running mean, then m_t += value - mean -
/// delta and M_t = min(M_t, m_t). Alarms iff count >= min_instances and
/// m_t - M_t > lambda. Rejects negative values.
bool page_hinkley_update(PageHinkleyState& state, double value);

/// Teacher/student pair over a fixed feature set. The student is trained on
/// the teacher's outputs, never on true targets, so monitoring the
/// teacher-student discrepancy needs no labels.
class DriftDetector {
 public:
  DriftDetector(ForestModel teacher, ForestModel student, PageHinkleyState ph,
                std::int64_t n_init);

  /// Feeds |teacher(x) - student(x)| to the PH test; true on alarm. An alarm
  /// resets the PH counters.
  bool observe(std::span<const double> x);

  const ForestModel& teacher() const { return teacher_; }
  const ForestModel& student() const { return student_; }
  const PageHinkleyState& ph() const { return ph_; }
  std::int64_t n_init() const { return n_init_; }

 private:
  ForestModel teacher_;
  ForestModel student_;
  PageHinkleyState ph_;
  std::int64_t n_init_;
};

/// Trains the teacher on (X, y) of the first n_init rows (restricted to
/// `features`) and the student on (X, teacher(X)) over the same rows.
DriftDetector train_teacher_student(const TraceWindow& window, const SelectedFeatureSet& features,
                                    std::int64_t n_init, std::uint64_t seed,
                                    const PageHinkleyState& ph_template = {},
                                    const ForestConfig& forest = {});

enum class AdaptationMode { kOfflineTrain, kOnlineTrain, kRetrain, kRetrainRecompute };

struct DriftConfig {
  OsfsConfig osfs;  // used for the initial selection and for every rerun
  AdaptationMode mode = AdaptationMode::kRetrainRecompute;
  std::int64_t n_init = 1000;
  PageHinkleyState ph;  // parameter template; counters ignored
  ForestConfig forest;
  std::uint64_t seed = 1;
};

struct DriftEvent {
  std::int64_t t_detect = 0;
  std::int64_t t_featureset_ready = 0;  // last sample of the re-init interval
  SelectedFeatureSet feature_set;       // set in force after readiness
  int model_id = 0;                     // increments when the predictor is replaced
};

struct SegmentReport {
  std::int64_t t_begin = 0;
  std::int64_t t_end = 0;
  std::int64_t count = 0;
  double nmae = 0.0;
};

struct DriftTimeline {
  SelectedFeatureSet initial_feature_set;
  std::int64_t init_ready_at = 0;  // t_0'
  std::vector<DriftEvent> events;
  std::vector<SegmentReport> segments;
  double overall_nmae = std::numeric_limits<double>::quiet_NaN();
  bool truncated = false;  // stream ended mid-recompute

  // per-sample record so callers can re-slice the error any way they need
  std::vector<std::int64_t> prediction_t;
  std::vector<double> actuals;
  std::vector<double> predictions;
};

/// Runs the full loop: initial OSFS selection, predictor + detector training
/// on the init interval, then monitor/predict until an alarm, collect a
/// fresh interval (rerunning OSFS first in retrain_recompute mode), retrain
/// according to the mode, and repeat until the stream ends. Predictions keep
/// flowing from the stale model while an interval is being collected.
DriftTimeline drift_pipeline(SampleSource& source, const DriftConfig& config);

}  // namespace osfs
