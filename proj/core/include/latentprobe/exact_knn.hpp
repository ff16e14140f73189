#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "latentprobe/embedding_set.hpp"
#include "latentprobe/metric.hpp"

namespace latentprobe {

// Ranked neighbor lists for a batch of queries, exact or index-produced.
// Rows are stored CSR-style so index searches that return fewer than k
// hits (IVF with a small probed cell) fit without padding; exact tables
// always have k entries per row.
struct NeighborTable {
  std::size_t k = 0;
  Metric metric = Metric::euclidean;
  bool self_excluded = false;
  std::vector<std::uint32_t> query_ids;
  std::vector<std::size_t> row_offsets;     // size query_ids.size() + 1
  std::vector<std::uint32_t> neighbor_ids;  // concatenated ranked rows
  std::vector<double> distances;            // parallel to neighbor_ids

  std::size_t n_queries() const { return query_ids.size(); }
  std::size_t row_length(std::size_t q) const {
    return row_offsets[q + 1] - row_offsets[q];
  }
  std::span<const std::uint32_t> row_ids(std::size_t q) const {
    return {neighbor_ids.data() + row_offsets[q], row_length(q)};
  }
  std::span<const double> row_distances(std::size_t q) const {
    return {distances.data() + row_offsets[q], row_length(q)};
  }

  // Checks ordering (non-decreasing distances, or non-increasing for
  // inner_product_desc), in-row uniqueness, and self-exclusion. Throws
  // ComputeError on violation; used by tests and debug paths.
  void check_invariants() const;
};

// True k nearest neighbors of every corpus item under the metric, ties
// broken by ascending item id. Queries run in parallel; output matches a
// sequential run.
NeighborTable exact_knn(const EmbeddingSet& e, std::size_t k, Metric metric,
                        bool exclude_self);

// N_k vector: how many query rows contain each item. Sums to the total
// entry count of the table.
std::vector<std::int64_t> occurrence_counts(const NeighborTable& t,
                                            std::size_t n_items);

// Debug dump: query_id,rank,neighbor_id,distance.
void write_csv(const NeighborTable& t, std::ostream& out);

}  // namespace latentprobe
