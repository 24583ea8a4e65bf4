#include "osfs/search.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace osfs {

namespace {

std::size_t index_of_k(const std::vector<int>& ks, int k) {
  return static_cast<std::size_t>(std::find(ks.begin(), ks.end(), k) - ks.begin());
}

std::size_t index_of_t(const std::vector<std::int64_t>& ts, std::int64_t t) {
  return static_cast<std::size_t>(std::find(ts.begin(), ts.end(), t) - ts.begin());
}

}  // namespace

OsfsConfig OsfsConfig::make(RankerKind kind, StabilityCondition condition, SearchPolicy policy) {
  OsfsConfig cfg;
  cfg.ranker.kind = kind;
  cfg.condition = condition;
  cfg.policy = policy;
  if (condition == StabilityCondition::kSimilarity) {
    cfg.space = SearchSpace::similarity_default();
    cfg.eta = 0.5;
  } else {
    cfg.space = SearchSpace::frequency_default();
    cfg.eta = 0.9;
  }
  return cfg;
}

WindowSource::WindowSource(const TraceWindow& window, std::int64_t start,
                           std::optional<std::int64_t> limit)
    : window_(&window), cursor_(start) {
  if (start < 1 || start > window.length() + 1) {
    throw std::out_of_range("WindowSource: start outside window");
  }
  end_ = window.length() + 1;
  if (limit) {
    if (*limit < 0) throw std::invalid_argument("WindowSource: negative limit");
    end_ = std::min(end_, start + *limit);
  }
}

const FeatureCatalog& WindowSource::catalog() const { return window_->catalog(); }

std::optional<Sample> WindowSource::next() {
  if (cursor_ >= end_) return std::nullopt;
  Sample s = window_->row(cursor_);
  ++cursor_;
  s.t = ++emitted_;  // re-index so consumers see a stream starting at 1
  return s;
}

StreamExhausted::StreamExhausted(std::int64_t consumed_in, std::optional<OsfsResult> partial_in)
    : std::runtime_error("stream ended after " + std::to_string(consumed_in) +
                         " samples, before the search terminated"),
      consumed(consumed_in),
      partial(std::move(partial_in)) {}

GridPoint first_grid_point(SearchPolicy policy, const SearchSpace& space) {
  space.validate();
  (void)policy;  // both orders start at the smallest k and t
  return GridPoint{space.k_values.front(), space.t_checkpoints.front()};
}

std::optional<GridPoint> next_grid_point(SearchPolicy policy, const GridPoint& current,
                                         const SearchSpace& space) {
  const auto ki = index_of_k(space.k_values, current.k);
  const auto ti = index_of_t(space.t_checkpoints, current.t);
  if (ki >= space.k_values.size() || ti >= space.t_checkpoints.size()) {
    throw std::invalid_argument("next_grid_point: current point not on the grid");
  }
  if (policy == SearchPolicy::kKSmall) {
    if (ti + 1 < space.t_checkpoints.size()) {
      return GridPoint{current.k, space.t_checkpoints[ti + 1]};
    }
    if (ki + 1 < space.k_values.size()) {
      return GridPoint{space.k_values[ki + 1], space.t_checkpoints.front()};
    }
    return std::nullopt;
  }
  if (ki + 1 < space.k_values.size()) {
    return GridPoint{space.k_values[ki + 1], current.t};
  }
  if (ti + 1 < space.t_checkpoints.size()) {
    return GridPoint{space.k_values.front(), space.t_checkpoints[ti + 1]};
  }
  return std::nullopt;
}

namespace {

// Per-k bookkeeping carried across the walk. Which members are used depends
// on the configured condition.
struct RowState {
  SimilarityState sim;
  std::optional<SelectionHistory> history;
  StabilityState streak;
};

struct Runner {
  SampleSource& source;
  const OsfsConfig& config;
  const RankingFn& rank_fn;

  TraceWindow buffer;
  std::map<std::int64_t, RankedList> rankings;  // one ranking per prefix length
  std::map<int, RowState> rows;
  std::optional<SelectedFeatureSet> last_set;
  int last_k = 0;

  explicit Runner(SampleSource& src, const OsfsConfig& cfg, const RankingFn& fn)
      : source(src), config(cfg), rank_fn(fn), buffer(src.catalog()) {}

  std::optional<OsfsResult> partial() const {
    if (!last_set) return std::nullopt;
    OsfsResult r;
    r.feature_set = *last_set;
    r.k = last_k;
    r.t_k = last_set->t;
    r.samples_consumed = buffer.length();
    return r;
  }

  // Reads forward until the buffer holds t samples. Each stream sample is
  // pulled exactly once; later checkpoints reuse the prefix.
  void ensure(std::int64_t t) {
    while (buffer.length() < t) {
      auto s = source.next();
      if (!s) throw StreamExhausted(buffer.length(), partial());
      buffer.append(*s);
    }
  }

  const RankedList& ranking_at(std::int64_t t) {
    auto it = rankings.find(t);
    if (it != rankings.end()) return it->second;
    ensure(t);
    auto [ins, ok] = rankings.emplace(t, rank_fn(buffer.prefix(t)));
    (void)ok;
    return ins->second;
  }

  // Visits one grid point; returns a result when its row's condition fires.
  std::optional<OsfsResult> visit(const GridPoint& gp, bool is_last_t) {
    SelectedFeatureSet set = top_k(ranking_at(gp.t), gp.k);
    last_set = set;
    last_k = gp.k;

    auto result = [&](const SelectedFeatureSet& chosen) {
      OsfsResult r;
      r.feature_set = chosen;
      r.k = gp.k;
      r.t_k = chosen.t;
      r.samples_consumed = buffer.length();
      return r;
    };

    if (config.condition == StabilityCondition::kSimilarity) {
      auto& st = rows[gp.k].sim;
      st.eta = config.eta;
      if (!st.set_prev) {
        st.set_prev = std::move(set);
        return std::nullopt;
      }
      if (!st.set_cur) {
        st.sim_prev = set_similarity(*st.set_prev, set);
        st.set_cur = std::move(set);
        return std::nullopt;
      }
      const double sim_t = set_similarity(*st.set_cur, set);
      if (similarity_stable(*st.sim_prev, sim_t, st.eta)) {
        return result(*st.set_prev);  // the local maximum, two checkpoints back
      }
      if (is_last_t && sim_t > st.eta) {
        return result(*st.set_cur);  // still agreeing at the end of the row
      }
      st.set_prev = std::move(*st.set_cur);
      st.set_cur = std::move(set);
      st.sim_prev = sim_t;
      return std::nullopt;
    }

    auto& row = rows[gp.k];
    if (!row.history) {
      row.history.emplace(buffer.feature_count(), static_cast<std::size_t>(config.history_rows));
      row.streak.eta = config.eta;
      row.streak.w = config.required_streak;
    }
    row.history->push(representation_vector(set, buffer.catalog()));
    if (row.history->full()) {
      // k == n would make the normalizer vanish; every vector is identical
      // then, so the window is perfectly stable by definition.
      const double stab = static_cast<std::size_t>(gp.k) == buffer.feature_count()
                              ? 1.0
                              : frequency_stability(*row.history);
      if (frequency_stable(row.streak, stab)) {
        return result(set);
      }
    }
    return std::nullopt;
  }
};

}  // namespace

OsfsResult osfs_run(SampleSource& source, const OsfsConfig& config, const RankingFn& rank_fn) {
  if (source.catalog().empty()) {
    throw std::invalid_argument("osfs_run: source catalog is empty");
  }
  config.space.validate();
  if (config.condition == StabilityCondition::kFrequency) {
    if (config.history_rows < 2) {
      throw std::invalid_argument("osfs_run: history_rows must be >= 2");
    }
    if (config.required_streak < 1) {
      throw std::invalid_argument("osfs_run: required_streak must be >= 1");
    }
  }

  // Clip k to the catalog size; if nothing survives, fall back to all
  // features so small catalogs still search.
  const auto n = static_cast<int>(source.catalog().size());
  SearchSpace space = config.space;
  std::erase_if(space.k_values, [n](int k) { return k > n; });
  if (space.k_values.empty()) space.k_values = {n};

  OsfsConfig effective = config;
  effective.space = space;

  Runner runner(source, effective, rank_fn);
  const std::int64_t t_last = space.t_checkpoints.back();

  std::optional<GridPoint> gp = first_grid_point(effective.policy, space);
  while (gp) {
    auto done = runner.visit(*gp, gp->t == t_last);
    if (done) return *done;
    gp = next_grid_point(effective.policy, *gp, space);
  }

  // Grid exhausted: report the set at the largest (k, t), which is exactly
  // the last cell both walk orders visit.
  OsfsResult r;
  r.feature_set = *runner.last_set;
  r.k = space.k_values.back();
  r.t_k = t_last;
  r.samples_consumed = runner.buffer.length();
  r.exhausted_grid = true;
  return r;
}

OsfsResult osfs_run(SampleSource& source, const OsfsConfig& config) {
  RankerConfig rc = config.ranker;
  return osfs_run(source, config, [rc](const TraceWindow& w) { return rank(w, rc); });
}

OsfsResult osfs_arr_sim_ksmall(SampleSource& source) {
  return osfs_run(source,
                  OsfsConfig::make(RankerKind::kArr, StabilityCondition::kSimilarity,
                                   SearchPolicy::kKSmall));
}

}  // namespace osfs
