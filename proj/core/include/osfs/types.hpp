#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace osfs {

/// Immutable, ordered list of feature names. The catalog order is the
/// canonical column order everywhere else (windows, rankings, bit vectors).
class FeatureCatalog {
 public:
  FeatureCatalog() = default;
  explicit FeatureCatalog(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t index) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const FeatureCatalog& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// One observation of the stream: a full feature vector plus an optional
/// target. `t` is the 1-based position within the stream; NaN marks a
/// missing cell.
struct Sample {
  std::int64_t t = 0;
  std::vector<double> values;
  std::optional<double> target;
};

/// Contiguous slice X_1..X_t of a stream, stored column-major so rankers can
/// pull whole feature columns without copying.
class TraceWindow {
 public:
  TraceWindow() = default;
  explicit TraceWindow(FeatureCatalog catalog);

  const FeatureCatalog& catalog() const { return catalog_; }
  std::size_t feature_count() const { return catalog_.size(); }
  std::int64_t length() const { return length_; }
  bool empty() const { return length_ == 0; }

  /// Appends the next sample. The sample must have exactly one value per
  /// catalog entry and t == length()+1 (windows never have gaps).
  void append(const Sample& sample);

  /// First `t` rows as a new window (1 <= t <= length()).
  TraceWindow prefix(std::int64_t t) const;

  /// Rows [start, start+count) re-indexed from 1; `start` is 1-based.
  TraceWindow slice(std::int64_t start, std::int64_t count) const;

  /// New window keeping only the named columns, in the order given.
  TraceWindow project(const std::vector<std::string>& names) const;

  std::span<const double> column(std::size_t index) const;
  double value(std::int64_t row, std::size_t col) const;  // row is 1-based
  Sample row(std::int64_t row) const;

  bool has_target(std::int64_t row) const;
  double target(std::int64_t row) const;
  /// True when every row carries a target.
  bool fully_labeled() const;
  std::vector<double> targets() const;  // requires fully_labeled()

 private:
  FeatureCatalog catalog_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::optional<double>> targets_;
  std::int64_t length_ = 0;
};

/// Output of a selection step: the chosen feature names (sorted, unique)
/// together with the prefix length they were computed from.
struct SelectedFeatureSet {
  std::vector<std::string> members;
  int k = 0;
  std::int64_t t = 0;

  bool contains(std::string_view name) const;
};

/// Builds a set from raw names: sorts, rejects duplicates, fills k.
SelectedFeatureSet make_feature_set(std::vector<std::string> members, std::int64_t t);

/// One cell of the search grid.
struct GridPoint {
  int k = 0;
  std::int64_t t = 0;
  bool operator==(const GridPoint&) const = default;
};

/// The grid the search walks over. k_values and t_checkpoints are strictly
/// increasing and positive.
struct SearchSpace {
  std::vector<int> k_values;
  std::vector<std::int64_t> t_checkpoints;

  /// Doubling checkpoints 8..1024 with k in {4,16,64,256}.
  static SearchSpace similarity_default();
  /// Linear checkpoints 100,110,...,1000 (same k values).
  static SearchSpace frequency_default();

  void validate() const;  // throws std::invalid_argument on bad shape
};

}  // namespace osfs
