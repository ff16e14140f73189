#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "latentprobe/metric.hpp"

namespace latentprobe {

struct EmbeddingSet;

struct PurityCurve {
  std::vector<std::size_t> k_values;  // 1..k_max
  std::vector<double> purity;        // mean same-class fraction per k
  Metric metric = Metric::euclidean;
  std::size_t n_queries = 0;
};

// Mean fraction of same-class items among each item's k nearest neighbors
// (self excluded), for every k up to k_max. Computed from a single k_max
// neighbor table by prefix counting.
PurityCurve local_purity_curve(const EmbeddingSet& corpus, std::size_t k_max,
                               Metric metric = Metric::euclidean);

// Two columns: k, purity.
void write_csv(const PurityCurve& curve, std::ostream& out);

}  // namespace latentprobe
