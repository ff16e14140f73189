#pragma once

#include <cstdint>
#include <vector>

#include "latentprobe/ann/index.hpp"

namespace latentprobe {

struct LshConfig {
  std::size_t nbits = 128;
  std::uint64_t seed = 0;
  // Subtract the corpus mean before projecting. Off by default: plain
  // sign-hash thresholds raw projections at zero.
  bool center = false;
};

struct LshBucketStats {
  std::size_t nbits = 0;
  std::size_t unique_buckets = 0;
  double entropy_bits = 0.0;
  double max_bucket_fraction = 0.0;
};

// Random-hyperplane sign hash: bit i of a code is 1 iff w_i . x >= 0 for a
// seeded standard-Gaussian hyperplane w_i. Search is an exhaustive Hamming
// scan over the stored codes.
class LshIndex final : public AnnIndex {
 public:
  LshIndex(const EmbeddingSet& corpus, const LshConfig& config);

  std::vector<SearchHit> search(std::span<const double> query,
                                std::size_t k) const override;
  std::size_t size() const override { return n_; }
  std::size_t dim() const override { return dim_; }
  IndexKind kind() const override { return IndexKind::lsh; }
  Metric metric() const override { return Metric::hamming; }
  void save(std::ostream& out) const override;

  const LshConfig& config() const { return config_; }
  std::vector<std::uint64_t> encode(std::span<const double> vector) const;
  std::span<const std::uint64_t> code(std::size_t row) const {
    return {codes_.data() + row * words_, words_};
  }
  std::size_t words_per_code() const { return words_; }

 private:
  friend std::unique_ptr<AnnIndex> load_index(std::istream&);
  LshIndex() = default;

  LshConfig config_;
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  std::size_t words_ = 0;                // 64-bit words per code
  std::vector<double> hyperplanes_;      // nbits x dim
  std::vector<double> mean_;             // empty unless centering
  std::vector<std::uint64_t> codes_;     // n x words
  std::vector<std::uint32_t> ids_;
};

LshBucketStats lsh_bucket_stats(const LshIndex& index);

}  // namespace latentprobe
