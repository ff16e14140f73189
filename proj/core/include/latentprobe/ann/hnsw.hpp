#pragma once

#include <cstdint>
#include <vector>

#include "latentprobe/ann/index.hpp"

namespace latentprobe {

struct HnswConfig {
  std::size_t m = 16;
  std::size_t ef_construction = 40;
  std::size_t ef_search = 16;
  std::uint64_t seed = 0;
};

// Hierarchical navigable small-world graph over unit-norm vectors, ranked by
// inner product (descending). Node levels follow floor(-ln(U) * mL) with
// mL = 1/ln(m). Degree caps: 2m at layer 0, m above. Neighbor lists within
// the cap are kept whole; only overflowing lists are shrunk with the
// keep-if-closer-to-target-than-to-any-kept heuristic.
class HnswIndex final : public AnnIndex {
 public:
  HnswIndex(const EmbeddingSet& corpus, const HnswConfig& config);

  std::vector<SearchHit> search(std::span<const double> query,
                                std::size_t k) const override;
  // Beam width override; results are truncated to min(k, ef_search) hits.
  std::vector<SearchHit> search(std::span<const double> query, std::size_t k,
                                std::size_t ef_search) const;
  std::size_t size() const override { return ids_.size(); }
  std::size_t dim() const override { return dim_; }
  IndexKind kind() const override { return IndexKind::hnsw; }
  Metric metric() const override { return Metric::inner_product_desc; }
  void save(std::ostream& out) const override;

  const HnswConfig& config() const { return config_; }
  int max_level() const { return max_level_; }
  int node_level(std::size_t node) const { return levels_[node]; }
  const std::vector<std::uint32_t>& neighbors(std::size_t node,
                                              int level) const {
    return links_[node][level];
  }

 private:
  friend std::unique_ptr<AnnIndex> load_index(std::istream&);
  HnswIndex() = default;

  double sim(std::size_t node, std::span<const double> query) const;
  std::vector<std::pair<double, std::uint32_t>> search_layer(
      std::span<const double> query, std::uint32_t entry, int level,
      std::size_t ef) const;
  void insert(std::size_t node);
  void link(std::uint32_t from, std::uint32_t to, int level);
  std::vector<std::uint32_t> select_neighbors(
      std::span<const double> target,
      std::vector<std::pair<double, std::uint32_t>> candidates,
      std::size_t cap) const;

  HnswConfig config_;
  std::size_t dim_ = 0;
  std::vector<double> vectors_;
  std::vector<std::uint32_t> ids_;
  std::vector<int> levels_;
  // links_[node][level] = neighbor node indexes, best-first insertion order.
  std::vector<std::vector<std::vector<std::uint32_t>>> links_;
  std::uint32_t entry_point_ = 0;
  int max_level_ = -1;
};

}  // namespace latentprobe
