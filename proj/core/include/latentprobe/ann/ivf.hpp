#pragma once

#include <cstdint>
#include <vector>

#include "latentprobe/ann/index.hpp"

namespace latentprobe {

struct IvfConfig {
  std::size_t nlist = 100;
  std::size_t nprobe = 1;
  std::size_t kmeans_iters = 25;
  std::uint64_t seed = 0;
};

// Inverted-file index: a k-means coarse quantizer partitions the corpus into
// nlist cells; a query scans only the nprobe cells with the nearest centroids.
class IvfIndex final : public AnnIndex {
 public:
  IvfIndex(const EmbeddingSet& corpus, const IvfConfig& config);

  std::vector<SearchHit> search(std::span<const double> query,
                                std::size_t k) const override;
  // Probes the given number of cells instead of the configured nprobe.
  std::vector<SearchHit> search(std::span<const double> query, std::size_t k,
                                std::size_t nprobe) const;
  std::size_t size() const override;
  std::size_t dim() const override { return dim_; }
  IndexKind kind() const override { return IndexKind::ivf; }
  Metric metric() const override { return Metric::euclidean; }
  void save(std::ostream& out) const override;

  const IvfConfig& config() const { return config_; }
  std::size_t nlist() const { return config_.nlist; }
  const std::vector<std::uint32_t>& list(std::size_t cell) const {
    return lists_[cell];
  }
  std::span<const double> centroid(std::size_t cell) const {
    return {centroids_.data() + cell * dim_, dim_};
  }

 private:
  friend std::unique_ptr<AnnIndex> load_index(std::istream&);
  IvfIndex() = default;

  IvfConfig config_;
  std::size_t dim_ = 0;
  std::vector<double> centroids_;                   // nlist x dim
  std::vector<std::vector<std::uint32_t>> lists_;   // member ids per cell
  std::vector<double> vectors_;                     // copies, corpus order
  std::vector<std::uint32_t> ids_;
  std::vector<std::size_t> id_to_row_;
};

}  // namespace latentprobe
