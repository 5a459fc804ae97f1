#include "attncrop/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "attncrop/error.hpp"

namespace attncrop {

namespace {

struct WeightedValues {
  std::vector<double> value;
  std::vector<double> weight;
};

WeightedValues distinct_sorted(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  WeightedValues out;
  for (double v : sorted) {
    if (!out.value.empty() && out.value.back() == v) {
      out.weight.back() += 1.0;
    } else {
      out.value.push_back(v);
      out.weight.push_back(1.0);
    }
  }
  return out;
}

// Weighted sum of squared deviations of a run of distinct values, from
// prefix sums of centred data.
class RunCost {
 public:
  explicit RunCost(const WeightedValues& data) {
    const std::size_t n = data.value.size();
    double total_w = 0.0;
    double total_wx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total_w += data.weight[i];
      total_wx += data.weight[i] * data.value[i];
    }
    const double shift = total_wx / total_w;
    w_.assign(n + 1, 0.0);
    wx_.assign(n + 1, 0.0);
    wxx_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = data.value[i] - shift;
      w_[i + 1] = w_[i] + data.weight[i];
      wx_[i + 1] = wx_[i] + data.weight[i] * x;
      wxx_[i + 1] = wxx_[i] + data.weight[i] * x * x;
    }
  }

  // Cost of distinct values [begin, end).
  [[nodiscard]] double operator()(std::size_t begin, std::size_t end) const {
    const double w = w_[end] - w_[begin];
    const double sx = wx_[end] - wx_[begin];
    const double sxx = wxx_[end] - wxx_[begin];
    return std::max(0.0, sxx - sx * sx / w);
  }

 private:
  std::vector<double> w_;
  std::vector<double> wx_;
  std::vector<double> wxx_;
};

// Optimal split of n distinct values into k contiguous non-empty runs.
// Layered DP; the optimal split point is monotone in the prefix length,
// which the divide-and-conquer recursion exploits. Returns run starts.
std::vector<std::size_t> optimal_runs(const WeightedValues& data, int k) {
  const std::size_t n = data.value.size();
  const RunCost cost(data);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // best[j] = min cost of splitting the first j values into the current number of runs.
  std::vector<double> prev(n + 1, kInf);
  for (std::size_t j = 1; j <= n; ++j) prev[j] = cost(0, j);
  std::vector<std::vector<std::size_t>> split(static_cast<std::size_t>(k));

  for (int layer = 1; layer < k; ++layer) {
    std::vector<double> cur(n + 1, kInf);
    auto& arg = split[static_cast<std::size_t>(layer)];
    arg.assign(n + 1, 0);
    const auto lo_j = static_cast<std::size_t>(layer) + 1;

    auto solve = [&](auto&& self, std::size_t j_lo, std::size_t j_hi, std::size_t s_lo, std::size_t s_hi) -> void {
      if (j_lo > j_hi) return;
      const std::size_t j = j_lo + (j_hi - j_lo) / 2;
      double best = kInf;
      std::size_t best_s = s_lo;
      const std::size_t upper = std::min(s_hi, j - 1);
      for (std::size_t s = s_lo; s <= upper; ++s) {
        const double c = prev[s] + cost(s, j);
        if (c < best) {
          best = c;
          best_s = s;
        }
      }
      cur[j] = best;
      arg[j] = best_s;
      if (j > j_lo) self(self, j_lo, j - 1, s_lo, best_s);
      self(self, j + 1, j_hi, best_s, s_hi);
    };
    if (lo_j <= n) solve(solve, lo_j, n, static_cast<std::size_t>(layer), n - 1);
    prev = std::move(cur);
  }

  std::vector<std::size_t> starts(static_cast<std::size_t>(k), 0);
  std::size_t end = n;
  for (int layer = k - 1; layer >= 1; --layer) {
    end = split[static_cast<std::size_t>(layer)][end];
    starts[static_cast<std::size_t>(layer)] = end;
  }
  return starts;
}

// Nearest centroid; centroids ascending, ties go to the lower index.
int nearest(std::span<const double> centroids, double x) {
  int best = 0;
  double best_d = std::abs(x - centroids[0]);
  for (std::size_t i = 1; i < centroids.size(); ++i) {
    const double d = std::abs(x - centroids[i]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

double recompute_wcss(std::span<const double> values, const ClusterModel& model) {
  if (values.size() != model.assignments.size()) throw InvalidInput("recompute_wcss: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - model.centroids[static_cast<std::size_t>(model.assignments[i])];
    total += d * d;
  }
  return total;
}

ClusterModel kmeans_1d(std::span<const double> values, int k, const KMeansOptions& options) {
  if (values.empty()) throw InvalidInput("kmeans_1d: no values");
  if (k <= 0) throw InvalidInput("kmeans_1d: k must be >= 1");
  if (options.max_iter < 1) throw InvalidInput("kmeans_1d: max_iter must be >= 1");
  if (!(options.tol >= 0.0)) throw InvalidInput("kmeans_1d: tol must be >= 0");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidInput("kmeans_1d: non-finite value");

  ClusterModel model;
  model.requested_k = k;
  model.seed = options.seed;

  const WeightedValues distinct = distinct_sorted(values);
  int effective_k = k;
  if (distinct.value.size() < static_cast<std::size_t>(k)) {
    effective_k = static_cast<int>(distinct.value.size());
    model.degenerate = true;
  }

  // Seed centroids from the optimal contiguous runs.
  const auto starts = optimal_runs(distinct, effective_k);
  std::vector<double> centroids(static_cast<std::size_t>(effective_k));
  for (int c = 0; c < effective_k; ++c) {
    const std::size_t begin = starts[static_cast<std::size_t>(c)];
    const std::size_t end = c + 1 < effective_k ? starts[static_cast<std::size_t>(c) + 1] : distinct.value.size();
    double w = 0.0;
    double wx = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      w += distinct.weight[i];
      wx += distinct.weight[i] * distinct.value[i];
    }
    centroids[static_cast<std::size_t>(c)] = wx / w;
  }

  std::vector<int> assignment(values.size());
  std::vector<double> sum(centroids.size());
  std::vector<double> count(centroids.size());
  auto assign = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      assignment[i] = nearest(centroids, values[i]);
      const double d = values[i] - centroids[static_cast<std::size_t>(assignment[i])];
      total += d * d;
    }
    return total;
  };

  model.wcss_history.push_back(assign());
  for (int iter = 0; iter < options.max_iter; ++iter) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(count.begin(), count.end(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      sum[static_cast<std::size_t>(assignment[i])] += values[i];
      count[static_cast<std::size_t>(assignment[i])] += 1.0;
    }
    const std::vector<double> previous_centroids = centroids;
    const std::vector<int> previous_assignment = assignment;
    double movement = 0.0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      if (count[c] == 0.0) continue;  // empty cluster keeps its centroid
      const double updated = sum[c] / count[c];
      movement = std::max(movement, std::abs(updated - centroids[c]));
      centroids[c] = updated;
    }
    model.iterations = iter + 1;
    const double wcss = assign();
    // Exact Lloyd steps never increase the objective; a rise is rounding
    // noise at a fixed point, so keep the previous state and stop.
    if (wcss > model.wcss_history.back()) {
      centroids = previous_centroids;
      assignment = previous_assignment;
      model.converged = true;
      break;
    }
    model.wcss_history.push_back(wcss);
    if (movement < options.tol || movement == 0.0) {
      model.converged = true;
      break;
    }
  }

  // Drop clusters that ended up empty so every rank is populated.
  std::vector<int> remap(centroids.size(), -1);
  std::fill(count.begin(), count.end(), 0.0);
  for (int a : assignment) count[static_cast<std::size_t>(a)] += 1.0;
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (count[c] == 0.0) {
      model.degenerate = true;
      continue;
    }
    remap[c] = static_cast<int>(model.centroids.size());
    model.centroids.push_back(centroids[c]);
  }
  model.assignments.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    model.assignments[i] = remap[static_cast<std::size_t>(assignment[i])];
  model.wcss = recompute_wcss(values, model);
  return model;
}

LabelRaster rank_labels(const ClusterModel& model, int height, int width) {
  if (height <= 0 || width <= 0) throw InvalidInput("rank_labels: dimensions must be positive");
  if (model.assignments.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
    throw InvalidInput("rank_labels: assignments do not cover the raster");
  const std::size_t k = model.centroids.size();
  if (k == 0) throw InvalidInput("rank_labels: model has no centroids");

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return model.centroids[a] < model.centroids[b]; });
  std::vector<int> rank(k);
  for (std::size_t r = 0; r < k; ++r) rank[order[r]] = static_cast<int>(r) + 1;

  LabelRaster out{Raster<int>(height, width), static_cast<int>(k), model.degenerate};
  auto labels = out.labels.values();
  std::vector<bool> seen(k, false);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int a = model.assignments[i];
    if (a < 0 || static_cast<std::size_t>(a) >= k) throw InvalidInput("rank_labels: assignment out of range");
    labels[i] = rank[static_cast<std::size_t>(a)];
    seen[static_cast<std::size_t>(a)] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) out.degenerate = true;
  return out;
}

}  // namespace attncrop
