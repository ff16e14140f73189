#include "latentprobe/purity.hpp"

#include <numeric>
#include <ostream>

#include "latentprobe/embedding_set.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/exact_knn.hpp"
#include "latentprobe/parallel.hpp"

namespace latentprobe {

PurityCurve local_purity_curve(const EmbeddingSet& corpus, std::size_t k_max,
                               Metric metric) {
  const std::size_t n = corpus.size();
  if (k_max < 1 || k_max > n - 1) {
    throw InputError("local_purity_curve: k_max must lie in [1, N-1], got " +
                     std::to_string(k_max));
  }

  const NeighborTable table = exact_knn(corpus, k_max, metric, true);

  // same_prefix[q * k_max + (k-1)] = same-class count among q's k nearest.
  std::vector<std::uint32_t> same_prefix(n * k_max, 0);
  parallel_for(n, [&](std::size_t q) {
    const auto ids = table.row_ids(q);
    std::uint32_t same = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (corpus.labels[ids[k]] == corpus.labels[q]) ++same;
      same_prefix[q * k_max + k] = same;
    }
  });

  PurityCurve curve;
  curve.metric = metric;
  curve.n_queries = n;
  curve.k_values.resize(k_max);
  std::iota(curve.k_values.begin(), curve.k_values.end(), std::size_t{1});
  curve.purity.resize(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) {
    double sum = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      sum += static_cast<double>(same_prefix[q * k_max + (k - 1)]) /
             static_cast<double>(k);
    }
    curve.purity[k - 1] = sum / static_cast<double>(n);
  }
  return curve;
}

void write_csv(const PurityCurve& curve, std::ostream& out) {
  out << "k,purity\n";
  for (std::size_t i = 0; i < curve.k_values.size(); ++i) {
    out << curve.k_values[i] << ',' << curve.purity[i] << '\n';
  }
}

}  // namespace latentprobe
