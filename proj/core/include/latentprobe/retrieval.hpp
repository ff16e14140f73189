#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "latentprobe/ann/index.hpp"

namespace latentprobe {

struct EmbeddingSet;

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n-1 denominator)
};

struct RetrievalReport {
  IndexKind index_kind = IndexKind::exact;
  std::size_t cutoff = 10;
  MeanStd p_at_k;
  MeanStd r_at_k;
  MeanStd map_at_k;
  MeanStd mrr;
  std::size_t n_queries = 0;
  std::size_t n_skipped = 0;  // queries whose class has no other member
  std::map<std::string, std::string> config;
};

// Top-k hit ratio with k in the denominator even when fewer than k items
// were retrieved.
double precision_at_k(std::span<const std::uint32_t> retrieved,
                      const std::vector<std::uint32_t>& relevant,
                      std::size_t k);

// |top-k hits| / |relevant|. Throws when the relevant set is empty.
double recall_at_k(std::span<const std::uint32_t> retrieved,
                   const std::vector<std::uint32_t>& relevant, std::size_t k);

// Sum of precisions at relevant ranks within the top k, divided by
// min(|relevant|, k).
double average_precision_at_k(std::span<const std::uint32_t> retrieved,
                              const std::vector<std::uint32_t>& relevant,
                              std::size_t k);

// 1/rank of the first relevant item; 0 when none was retrieved.
double reciprocal_rank(std::span<const std::uint32_t> retrieved,
                       const std::vector<std::uint32_t>& relevant);

// Queries the index with every corpus item. Relevant = items sharing the
// query's label (minus the query itself when exclude_self). Queries whose
// class has no other member are skipped and counted.
RetrievalReport evaluate_index(const EmbeddingSet& corpus,
                               const AnnIndex& index, std::size_t k = 10,
                               bool exclude_self = true);

struct KnnClassifyResult {
  double top1 = 0.0;
  double top5 = 0.0;
};

// Majority-vote classification from the k exact nearest neighbors (self
// excluded). Vote ties break toward the smaller class id; top-5 counts a hit
// when the true class is among the 5 most-voted classes.
KnnClassifyResult knn_classify_accuracy(const EmbeddingSet& corpus,
                                        std::size_t k,
                                        Metric metric = Metric::euclidean);

}  // namespace latentprobe
