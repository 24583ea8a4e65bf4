#include "osfs/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace osfs {

FeatureCatalog::FeatureCatalog(std::vector<std::string> names) : names_(std::move(names)) {
  index_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    auto [it, inserted] = index_.emplace(names_[i], i);
    (void)it;
    if (!inserted) {
      throw std::invalid_argument("duplicate feature name in catalog: " + names_[i]);
    }
  }
}

const std::string& FeatureCatalog::name(std::size_t index) const {
  if (index >= names_.size()) {
    throw std::out_of_range("feature index out of range");
  }
  return names_[index];
}

std::optional<std::size_t> FeatureCatalog::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TraceWindow::TraceWindow(FeatureCatalog catalog)
    : catalog_(std::move(catalog)), columns_(catalog_.size()) {}

void TraceWindow::append(const Sample& sample) {
  if (sample.values.size() != catalog_.size()) {
    throw std::invalid_argument("sample has " + std::to_string(sample.values.size()) +
                                " values, catalog has " + std::to_string(catalog_.size()));
  }
  if (sample.t != length_ + 1) {
    throw std::invalid_argument("sample t=" + std::to_string(sample.t) +
                                " does not extend window of length " + std::to_string(length_));
  }
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    columns_[j].push_back(sample.values[j]);
  }
  targets_.push_back(sample.target);
  ++length_;
}

TraceWindow TraceWindow::prefix(std::int64_t t) const {
  if (t < 1 || t > length_) {
    throw std::out_of_range("prefix length " + std::to_string(t) + " outside [1, " +
                            std::to_string(length_) + "]");
  }
  return slice(1, t);
}

TraceWindow TraceWindow::slice(std::int64_t start, std::int64_t count) const {
  if (start < 1 || count < 0 || start + count - 1 > length_) {
    throw std::out_of_range("slice [" + std::to_string(start) + ", +" + std::to_string(count) +
                            ") outside window of length " + std::to_string(length_));
  }
  TraceWindow out(catalog_);
  const auto begin = static_cast<std::size_t>(start - 1);
  const auto n = static_cast<std::size_t>(count);
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    out.columns_[j].assign(columns_[j].begin() + begin, columns_[j].begin() + begin + n);
  }
  out.targets_.assign(targets_.begin() + begin, targets_.begin() + begin + n);
  out.length_ = count;
  return out;
}

TraceWindow TraceWindow::project(const std::vector<std::string>& names) const {
  std::vector<std::string> kept;
  kept.reserve(names.size());
  std::vector<std::size_t> src;
  src.reserve(names.size());
  for (const auto& n : names) {
    auto idx = catalog_.index_of(n);
    if (!idx) throw std::invalid_argument("unknown feature: " + n);
    kept.push_back(n);
    src.push_back(*idx);
  }
  TraceWindow out{FeatureCatalog(std::move(kept))};
  out.columns_.clear();
  for (auto j : src) out.columns_.push_back(columns_[j]);
  out.targets_ = targets_;
  out.length_ = length_;
  return out;
}

std::span<const double> TraceWindow::column(std::size_t index) const {
  if (index >= columns_.size()) {
    throw std::out_of_range("column index out of range");
  }
  return columns_[index];
}

double TraceWindow::value(std::int64_t row, std::size_t col) const {
  if (row < 1 || row > length_) {
    throw std::out_of_range("row out of range");
  }
  return column(col)[static_cast<std::size_t>(row - 1)];
}

Sample TraceWindow::row(std::int64_t row) const {
  if (row < 1 || row > length_) {
    throw std::out_of_range("row out of range");
  }
  Sample s;
  s.t = row;
  s.values.reserve(columns_.size());
  for (const auto& c : columns_) s.values.push_back(c[static_cast<std::size_t>(row - 1)]);
  s.target = targets_[static_cast<std::size_t>(row - 1)];
  return s;
}

bool TraceWindow::has_target(std::int64_t row) const {
  if (row < 1 || row > length_) {
    throw std::out_of_range("row out of range");
  }
  return targets_[static_cast<std::size_t>(row - 1)].has_value();
}

double TraceWindow::target(std::int64_t row) const {
  if (!has_target(row)) {
    throw std::invalid_argument("row " + std::to_string(row) + " has no target");
  }
  return *targets_[static_cast<std::size_t>(row - 1)];
}

bool TraceWindow::fully_labeled() const {
  return std::all_of(targets_.begin(), targets_.end(),
                     [](const std::optional<double>& t) { return t.has_value(); });
}

std::vector<double> TraceWindow::targets() const {
  std::vector<double> out;
  out.reserve(targets_.size());
  for (const auto& t : targets_) {
    if (!t) throw std::invalid_argument("window is not fully labeled");
    out.push_back(*t);
  }
  return out;
}

bool SelectedFeatureSet::contains(std::string_view name) const {
  return std::binary_search(members.begin(), members.end(), name);
}

SelectedFeatureSet make_feature_set(std::vector<std::string> members, std::int64_t t) {
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw std::invalid_argument("feature set contains duplicates");
  }
  SelectedFeatureSet set;
  set.k = static_cast<int>(members.size());
  set.members = std::move(members);
  set.t = t;
  return set;
}

SearchSpace SearchSpace::similarity_default() {
  SearchSpace s;
  s.k_values = {4, 16, 64, 256};
  for (std::int64_t t = 8; t <= 1024; t *= 2) s.t_checkpoints.push_back(t);
  return s;
}

SearchSpace SearchSpace::frequency_default() {
  SearchSpace s;
  s.k_values = {4, 16, 64, 256};
  for (std::int64_t t = 100; t <= 1000; t += 10) s.t_checkpoints.push_back(t);
  return s;
}

void SearchSpace::validate() const {
  auto strictly_increasing = [](const auto& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] <= v[i - 1]) return false;
    }
    return !v.empty() && v.front() > 0;
  };
  if (!strictly_increasing(k_values)) {
    throw std::invalid_argument("k_values must be non-empty, positive, strictly increasing");
  }
  if (!strictly_increasing(t_checkpoints)) {
    throw std::invalid_argument("t_checkpoints must be non-empty, positive, strictly increasing");
  }
}

}  // namespace osfs
