#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "latentprobe/metric.hpp"

namespace latentprobe {

struct EmbeddingSet;

enum class IndexKind : std::uint8_t { exact = 0, ivf = 1, hnsw = 2, lsh = 3 };

std::string to_string(IndexKind kind);
IndexKind index_kind_from_string(const std::string& name);

struct SearchHit {
  std::uint32_t id = 0;
  double score = 0.0;  // distance for ascending metrics, similarity otherwise
};

// Approximate nearest neighbor index over a fixed corpus. Search results are
// ordered best-first; ties break toward the smaller id. Implementations may
// return fewer than k hits when their candidate set runs dry.
class AnnIndex {
 public:
  virtual ~AnnIndex() = default;

  virtual std::vector<SearchHit> search(std::span<const double> query,
                                        std::size_t k) const = 0;
  virtual std::size_t size() const = 0;
  virtual std::size_t dim() const = 0;
  virtual IndexKind kind() const = 0;
  virtual Metric metric() const = 0;
  virtual void save(std::ostream& out) const = 0;
};

std::unique_ptr<AnnIndex> load_index(std::istream& in);
std::unique_ptr<AnnIndex> load_index_file(const std::string& path);
void save_index_file(const AnnIndex& index, const std::string& path);

// Brute-force scan; the reference point the approximate indexes are judged
// against.
class FlatExactIndex final : public AnnIndex {
 public:
  FlatExactIndex(const EmbeddingSet& corpus, Metric metric);
  FlatExactIndex(std::size_t dim, Metric metric, std::vector<double> vectors,
                 std::vector<std::uint32_t> ids);

  std::vector<SearchHit> search(std::span<const double> query,
                                std::size_t k) const override;
  std::size_t size() const override { return ids_.size(); }
  std::size_t dim() const override { return dim_; }
  IndexKind kind() const override { return IndexKind::exact; }
  Metric metric() const override { return metric_; }
  void save(std::ostream& out) const override;

 private:
  std::size_t dim_ = 0;
  Metric metric_ = Metric::euclidean;
  std::vector<double> vectors_;
  std::vector<std::uint32_t> ids_;
};

}  // namespace latentprobe
