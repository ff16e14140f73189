#pragma once

#include <cstdint>
#include <span>

#include "latentprobe/embedding_set.hpp"
#include "latentprobe/exact_knn.hpp"

namespace latentprobe {

// Global geometry statistics of one corpus.
struct GeometryReport {
  double anisotropy = 0.0;        // lambda_max(Sigma) / Tr(Sigma), in (0, 1]
  double skewness = 0.0;          // bias-adjusted skewness of the N_k counts
  std::int64_t worst_case_hub = 0;  // max_j N_k(j)
  std::size_t hub_k = 10;         // neighborhood size used for N_k
};

struct AnisotropyResult {
  double ratio = 0.0;
  double lambda_max = 0.0;
  double trace = 0.0;
  std::size_t iterations = 0;
};

// Fraction of total variance carried by the leading principal direction.
// lambda_max comes from seeded power iteration run matrix-free in the
// smaller of the row/column spaces (relative tolerance 1e-8, at most 1000
// iterations); the covariance uses the (N-1) denominator. Throws
// ComputeError when all rows are identical (zero trace).
AnisotropyResult anisotropy_full(const EmbeddingSet& e,
                                 std::uint64_t seed = 0x51d5ca7eULL);
double anisotropy(const EmbeddingSet& e);

// Bias-adjusted standardized third central moment of the occurrence
// counts: [n/((n-1)(n-2))] * sum(((N_k(j) - mean)/sd)^3) with the sample
// (n-1) standard deviation. Needs n >= 3 and nonzero spread.
double nk_skewness(std::span<const std::int64_t> counts);

std::int64_t worst_case_hub(std::span<const std::int64_t> counts);

// Full pipeline: exact k-NN (self excluded) -> N_k -> skewness and worst
// hub, plus anisotropy of the vectors. The seed only picks the power
// iteration start vector; the converged ratio does not depend on it.
GeometryReport geometry_report(const EmbeddingSet& e, std::size_t hub_k = 10,
                               Metric metric = Metric::euclidean,
                               std::uint64_t seed = 0x51d5ca7eULL);

}  // namespace latentprobe
