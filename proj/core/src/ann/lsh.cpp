#include "latentprobe/ann/lsh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "latentprobe/embedding_set.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/parallel.hpp"
#include "latentprobe/rng.hpp"

namespace latentprobe {

LshIndex::LshIndex(const EmbeddingSet& corpus, const LshConfig& config)
    : config_(config), dim_(corpus.dim), n_(corpus.size()) {
  if (config_.nbits < 1) throw InputError("lsh: nbits must be at least 1");
  words_ = (config_.nbits + 63) / 64;

  Rng rng(config_.seed);
  hyperplanes_.resize(config_.nbits * dim_);
  for (double& w : hyperplanes_) w = rng.gaussian();

  if (config_.center) {
    mean_.assign(dim_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const double* row = corpus.row(i).data();
      for (std::size_t d = 0; d < dim_; ++d) mean_[d] += row[d];
    }
    for (double& m : mean_) m /= static_cast<double>(n_);
  }

  ids_ = corpus.ids.empty() ? default_ids(corpus.size()) : corpus.ids;
  codes_.assign(n_ * words_, 0);
  parallel_for(n_, [&](std::size_t i) {
    const auto code = encode(corpus.row(i));
    std::copy(code.begin(), code.end(), codes_.begin() + i * words_);
  });
}

std::vector<std::uint64_t> LshIndex::encode(
    std::span<const double> vector) const {
  if (vector.size() != dim_) {
    throw InputError("lsh encode: vector dimension " +
                     std::to_string(vector.size()) +
                     " does not match index (" + std::to_string(dim_) + ")");
  }
  std::vector<std::uint64_t> code(words_, 0);
  for (std::size_t b = 0; b < config_.nbits; ++b) {
    const double* w = hyperplanes_.data() + b * dim_;
    double dot = 0.0;
    if (mean_.empty()) {
      for (std::size_t d = 0; d < dim_; ++d) dot += w[d] * vector[d];
    } else {
      for (std::size_t d = 0; d < dim_; ++d)
        dot += w[d] * (vector[d] - mean_[d]);
    }
    if (dot >= 0.0) code[b / 64] |= std::uint64_t{1} << (b % 64);
  }
  return code;
}

std::vector<SearchHit> LshIndex::search(std::span<const double> query,
                                        std::size_t k) const {
  if (n_ == 0) throw ComputeError("lsh search: empty index");
  const auto qcode = encode(query);
  std::vector<SearchHit> hits(n_);
  parallel_for(n_, [&](std::size_t i) {
    const std::uint64_t* c = codes_.data() + i * words_;
    int dist = 0;
    for (std::size_t w = 0; w < words_; ++w)
      dist += std::popcount(c[w] ^ qcode[w]);
    hits[i] = {ids_[i], static_cast<double>(dist)};
  });
  const std::size_t keep = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + keep, hits.end(),
                    [](const SearchHit& a, const SearchHit& b) {
                      if (a.score != b.score) return a.score < b.score;
                      return a.id < b.id;
                    });
  hits.resize(keep);
  return hits;
}

LshBucketStats lsh_bucket_stats(const LshIndex& index) {
  std::map<std::vector<std::uint64_t>, std::size_t> buckets;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto code = index.code(i);
    ++buckets[std::vector<std::uint64_t>(code.begin(), code.end())];
  }

  LshBucketStats stats;
  stats.nbits = index.config().nbits;
  stats.unique_buckets = buckets.size();
  const double n = static_cast<double>(index.size());
  std::size_t max_count = 0;
  double entropy = 0.0;
  for (const auto& [code, count] : buckets) {
    max_count = std::max(max_count, count);
    const double p = static_cast<double>(count) / n;
    entropy -= p * std::log2(p);
  }
  stats.entropy_bits = std::max(entropy, 0.0);
  stats.max_bucket_fraction = static_cast<double>(max_count) / n;
  return stats;
}

}  // namespace latentprobe
