#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "attncrop/raster.hpp"

namespace attncrop {

struct ClusterModel {
  /// Strictly ascending for models produced by kmeans_1d.
  std::vector<double> centroids;
  /// Cluster index per input value, in input order.
  std::vector<int> assignments;
  double wcss = 0.0;
  /// WCSS after each assignment step, first entry is the seeding partition.
  std::vector<double> wcss_history;
  int iterations = 0;
  bool converged = false;
  /// Fewer distinct values than requested clusters; k was reduced.
  bool degenerate = false;
  int requested_k = 0;
  std::uint64_t seed = 0;
};

struct KMeansOptions {
  int max_iter = 100;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

/// One-dimensional k-means minimising the within-cluster sum of squares.
///
/// Seeding is deterministic: the globally optimal partition of the sorted
/// values into contiguous runs is found by dynamic programming over the
/// distinct values, and Lloyd iterations then run from its centroids until
/// the largest centroid move is below `tol` or `max_iter` is reached. In one
/// dimension an optimal clustering is always contiguous in sorted order, so
/// the result is the exact minimiser. `seed` is recorded but does not affect
/// the result.
ClusterModel kmeans_1d(std::span<const double> values, int k, const KMeansOptions& options = {});

/// WCSS of `values` against the model's centroids and assignments.
double recompute_wcss(std::span<const double> values, const ClusterModel& model);

struct LabelRaster {
  /// 1 = lowest-centroid cluster, cluster_count = highest.
  Raster<int> labels;
  int cluster_count = 0;
  bool degenerate = false;
};

/// Re-maps cluster indices to saliency ranks and shapes them as height x width.
LabelRaster rank_labels(const ClusterModel& model, int height, int width);

}  // namespace attncrop
