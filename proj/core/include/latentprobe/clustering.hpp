#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latentprobe/metric.hpp"

namespace latentprobe {

struct EmbeddingSet;

struct ClusterResult {
  std::vector<std::int32_t> assignments;  // -1 marks noise
  std::size_t n_clusters = 0;
  double nmi = 0.0;
  double ari = 0.0;
  double eps = 0.0;
  std::size_t min_pts = 0;
  Metric metric = Metric::euclidean;
};

// Count of noise assignments (-1 entries).
std::size_t count_noise(const ClusterResult& result);

// Density clustering: a point is core iff it has at least min_pts neighbors
// within eps (itself included). Clusters are connected components of core
// points; border points attach to the first cluster that reaches them under
// an ascending-id scan. Cluster numbers are assigned in order of each
// cluster's smallest member id. Euclidean mode expects the corpus scaled
// into the unit hypersphere.
ClusterResult dbscan(const EmbeddingSet& corpus, double eps,
                     std::size_t min_pts, Metric metric);

// Normalized mutual information with arithmetic-mean normalization:
// I(a;b) / ((H(a)+H(b))/2). Zero when either marginal entropy is zero.
double nmi(std::span<const std::int32_t> a, std::span<const std::int32_t> b);

// Adjusted Rand index by pair counting. A degenerate zero denominator
// (both partitions trivial) yields 1.0.
double ari(std::span<const std::int32_t> a, std::span<const std::int32_t> b);

// Noise handling when scoring assignments against reference labels.
enum class NoisePolicy {
  shared_label,  // all noise points become one extra cluster
  exclude,       // noise points are dropped from both vectors
};

// Fills in nmi/ari of `result` against the reference labels under the given
// noise policy.
void score_against_labels(ClusterResult& result,
                          std::span<const std::int32_t> labels,
                          NoisePolicy policy = NoisePolicy::shared_label);

}  // namespace latentprobe
