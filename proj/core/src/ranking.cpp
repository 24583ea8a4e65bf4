#include "osfs/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace osfs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-max scales every column over the given window. Rankers always work on
// this local scaling, so a ranking is a pure function of the window content
// and does not change if the caller already scaled the full trace.
std::vector<std::vector<double>> scaled_columns(const TraceWindow& window) {
  const auto n = window.feature_count();
  std::vector<std::vector<double>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = window.column(j);
    double lo = kInf, hi = -kInf;
    for (double v : col) {
      if (std::isnan(v)) {
        throw std::invalid_argument("ranking: missing value in column " +
                                    window.catalog().name(j));
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    auto& out = cols[j];
    if (col.empty() || lo == hi) {
      out.assign(col.size(), 0.0);
    } else {
      out.reserve(col.size());
      const double span = hi - lo;
      for (double v : col) out.push_back((v - lo) / span);
    }
  }
  return cols;
}

// Orders catalog indices by score; `ascending` picks the ranker orientation.
// Equal scores keep catalog order.
std::vector<std::string> order_by_score(const FeatureCatalog& catalog,
                                        const std::vector<double>& scores, bool ascending) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] == scores[b]) return false;
    return ascending ? scores[a] < scores[b] : scores[a] > scores[b];
  });
  std::vector<std::string> order;
  order.reserve(idx.size());
  for (auto i : idx) order.push_back(catalog.name(i));
  return order;
}

}  // namespace

RankedList rank_arr(const TraceWindow& window, const RankerConfig& /*config*/) {
  if (window.length() < 1) {
    throw std::invalid_argument("rank_arr: window is empty");
  }
  const auto n = window.feature_count();
  const auto t = static_cast<std::size_t>(window.length());
  const auto cols = scaled_columns(window);

  std::vector<double> mean(n, 0.0), var(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (double v : cols[j]) mean[j] += v;
    mean[j] /= static_cast<double>(t);
    for (double v : cols[j]) var[j] += (v - mean[j]) * (v - mean[j]);
    var[j] /= static_cast<double>(t);
  }

  // Pairwise |Pearson|; a constant column correlates 0 with everything.
  std::vector<double> redundancy(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      double corr = 0.0;
      if (var[a] > 0.0 && var[b] > 0.0) {
        double cov = 0.0;
        for (std::size_t i = 0; i < t; ++i) {
          cov += (cols[a][i] - mean[a]) * (cols[b][i] - mean[b]);
        }
        cov /= static_cast<double>(t);
        corr = cov / std::sqrt(var[a] * var[b]);
        // guard tiny fp excursions past +-1
        corr = std::clamp(corr, -1.0, 1.0);
      }
      redundancy[a] += std::abs(corr);
      redundancy[b] += std::abs(corr);
    }
  }

  RankedList out;
  out.t = window.length();
  out.scores.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double mean_abs_corr = n > 1 ? redundancy[j] / static_cast<double>(n - 1) : 0.0;
    out.scores[j] = var[j] - mean_abs_corr;
  }
  out.order = order_by_score(window.catalog(), out.scores, /*ascending=*/false);
  return out;
}

RankedList rank_ls(const TraceWindow& window, const RankerConfig& config) {
  const auto n = window.feature_count();
  const auto t = static_cast<std::size_t>(window.length());
  if (config.ls_neighbors < 1) {
    throw std::invalid_argument("rank_ls: ls_neighbors must be >= 1");
  }
  if (config.ls_kernel_width <= 0.0) {
    throw std::invalid_argument("rank_ls: ls_kernel_width must be > 0");
  }
  if (window.length() < config.ls_neighbors + 1) {
    throw std::invalid_argument("rank_ls: need at least ls_neighbors + 1 samples, have " +
                                std::to_string(window.length()));
  }
  const auto cols = scaled_columns(window);

  // Squared distances between samples, sample-major for the kNN pass.
  std::vector<double> d2(t * t, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& c = cols[j];
    for (std::size_t a = 0; a < t; ++a) {
      for (std::size_t b = a + 1; b < t; ++b) {
        const double d = c[a] - c[b];
        d2[a * t + b] += d * d;
      }
    }
  }
  for (std::size_t a = 0; a < t; ++a) {
    for (std::size_t b = a + 1; b < t; ++b) d2[b * t + a] = d2[a * t + b];
  }

  // kNN with OR symmetrization; edge weight exp(-d^2 / width).
  const auto kn = static_cast<std::size_t>(config.ls_neighbors);
  std::vector<double> weight(t * t, 0.0);
  std::vector<std::size_t> cand(t);
  for (std::size_t a = 0; a < t; ++a) {
    cand.clear();
    for (std::size_t b = 0; b < t; ++b) {
      if (b != a) cand.push_back(b);
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(kn), cand.end(),
                      [&](std::size_t x, std::size_t y) {
                        const double dx = d2[a * t + x], dy = d2[a * t + y];
                        if (dx != dy) return dx < dy;
                        return x < y;
                      });
    for (std::size_t r = 0; r < kn; ++r) {
      const std::size_t b = cand[r];
      const double w = std::exp(-d2[a * t + b] / config.ls_kernel_width);
      weight[a * t + b] = w;
      weight[b * t + a] = w;
    }
  }

  std::vector<double> degree(t, 0.0);
  double total_degree = 0.0;
  for (std::size_t a = 0; a < t; ++a) {
    for (std::size_t b = 0; b < t; ++b) degree[a] += weight[a * t + b];
    total_degree += degree[a];
  }

  // Edge list (a < b) so each feature pass is O(edges + t).
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(t * kn);
  for (std::size_t a = 0; a < t; ++a) {
    for (std::size_t b = a + 1; b < t; ++b) {
      if (weight[a * t + b] > 0.0) edges.emplace_back(a, b);
    }
  }

  RankedList out;
  out.t = window.length();
  out.scores.assign(n, kInf);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& f = cols[j];
    if (total_degree <= 0.0) continue;  // no usable graph, leave sentinel
    double mu = 0.0;
    for (std::size_t a = 0; a < t; ++a) mu += degree[a] * f[a];
    mu /= total_degree;
    double num = 0.0;
    for (const auto& [a, b] : edges) {
      const double d = f[a] - f[b];
      num += weight[a * t + b] * d * d;
    }
    double den = 0.0;
    for (std::size_t a = 0; a < t; ++a) {
      const double c = f[a] - mu;
      den += degree[a] * c * c;
    }
    if (den > 0.0) out.scores[j] = num / den;
  }
  out.order = order_by_score(window.catalog(), out.scores, /*ascending=*/true);
  return out;
}

RankedList rank(const TraceWindow& window, const RankerConfig& config) {
  switch (config.kind) {
    case RankerKind::kArr:
      return rank_arr(window, config);
    case RankerKind::kLs:
      return rank_ls(window, config);
  }
  throw std::invalid_argument("rank: unknown ranker kind");
}

SelectedFeatureSet top_k(const RankedList& ranked, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > ranked.order.size()) {
    throw std::invalid_argument("top_k: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(ranked.order.size()) + "]");
  }
  std::vector<std::string> members(ranked.order.begin(), ranked.order.begin() + k);
  return make_feature_set(std::move(members), ranked.t);
}

}  // namespace osfs
