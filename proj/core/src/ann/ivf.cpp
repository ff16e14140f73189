#include "latentprobe/ann/ivf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "latentprobe/embedding_set.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/parallel.hpp"
#include "latentprobe/rng.hpp"

namespace latentprobe {

namespace {

// Nearest centroid by squared L2, ties toward the smaller cell id.
std::size_t nearest_centroid(std::span<const double> point,
                             const std::vector<double>& centroids,
                             std::size_t nlist, std::size_t dim) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < nlist; ++c) {
    const double d =
        squared_l2(point, {centroids.data() + c * dim, dim});
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

IvfIndex::IvfIndex(const EmbeddingSet& corpus, const IvfConfig& config)
    : config_(config), dim_(corpus.dim) {
  const std::size_t n = corpus.size();
  if (config_.nlist < 1) throw InputError("ivf: nlist must be at least 1");
  if (config_.nlist > n) {
    throw InputError("ivf: nlist (" + std::to_string(config_.nlist) +
                     ") exceeds corpus size (" + std::to_string(n) + ")");
  }
  if (config_.nprobe < 1 || config_.nprobe > config_.nlist) {
    throw InputError("ivf: nprobe must satisfy 1 <= nprobe <= nlist");
  }

  vectors_ = corpus.vectors;
  ids_ = corpus.ids.empty() ? default_ids(corpus.size()) : corpus.ids;
  id_to_row_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) id_to_row_[ids_[i]] = i;

  const std::size_t nlist = config_.nlist;
  const std::size_t dim = dim_;
  Rng rng(config_.seed);

  // k-means++ seeding: first center uniform, then proportional to squared
  // distance from the nearest chosen center.
  centroids_.assign(nlist * dim, 0.0);
  std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
  {
    const std::size_t first = rng.uniform_index(n);
    std::copy_n(corpus.row(first).data(), dim, centroids_.begin());
    for (std::size_t i = 0; i < n; ++i) {
      min_sq[i] = squared_l2(corpus.row(i), {centroids_.data(), dim});
    }
  }
  for (std::size_t c = 1; c < nlist; ++c) {
    double total = std::accumulate(min_sq.begin(), min_sq.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cum = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cum += min_sq[i];
        if (cum >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.uniform_index(n);  // all points already coincide with centers
    }
    double* dst = centroids_.data() + c * dim;
    std::copy_n(corpus.row(pick).data(), dim, dst);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = squared_l2(corpus.row(i), {dst, dim});
      if (d < min_sq[i]) min_sq[i] = d;
    }
  }

  std::vector<std::size_t> assign(n, 0);
  for (std::size_t iter = 0; iter < config_.kmeans_iters; ++iter) {
    parallel_for(n, [&](std::size_t i) {
      assign[i] = nearest_centroid(corpus.row(i), centroids_, nlist, dim);
    });

    std::vector<double> sums(nlist * dim, 0.0);
    std::vector<std::size_t> counts(nlist, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = assign[i];
      ++counts[c];
      const double* src = corpus.row(i).data();
      double* dst = sums.data() + c * dim;
      for (std::size_t d = 0; d < dim; ++d) dst[d] += src[d];
    }
    for (std::size_t c = 0; c < nlist; ++c) {
      if (counts[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (std::size_t d = 0; d < dim; ++d)
        centroids_[c * dim + d] = sums[c * dim + d] * inv;
    }

    // Re-seed each empty cell from the point farthest from its centroid in
    // the currently largest cell.
    for (std::size_t c = 0; c < nlist; ++c) {
      if (counts[c] != 0) continue;
      std::size_t largest = 0;
      for (std::size_t o = 1; o < nlist; ++o)
        if (counts[o] > counts[largest]) largest = o;
      if (counts[largest] <= 1) continue;
      std::size_t far_i = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] != largest) continue;
        const double d = squared_l2(
            corpus.row(i), {centroids_.data() + largest * dim, dim});
        if (d > far_d) {
          far_d = d;
          far_i = i;
        }
      }
      std::copy_n(corpus.row(far_i).data(), dim, centroids_.begin() + c * dim);
      assign[far_i] = c;
      counts[c] = 1;
      --counts[largest];
    }
  }

  parallel_for(n, [&](std::size_t i) {
    assign[i] = nearest_centroid(corpus.row(i), centroids_, nlist, dim);
  });
  lists_.assign(nlist, {});
  for (std::size_t i = 0; i < n; ++i)
    lists_[assign[i]].push_back(ids_[i]);
}

std::size_t IvfIndex::size() const { return ids_.size(); }

std::vector<SearchHit> IvfIndex::search(std::span<const double> query,
                                        std::size_t k) const {
  return search(query, k, config_.nprobe);
}

std::vector<SearchHit> IvfIndex::search(std::span<const double> query,
                                        std::size_t k,
                                        std::size_t nprobe) const {
  if (query.size() != dim_) {
    throw InputError("ivf search: query dimension " +
                     std::to_string(query.size()) + " does not match index (" +
                     std::to_string(dim_) + ")");
  }
  if (nprobe < 1 || nprobe > config_.nlist) {
    throw InputError("ivf search: nprobe must satisfy 1 <= nprobe <= nlist");
  }

  const std::size_t nlist = config_.nlist;
  std::vector<std::pair<double, std::size_t>> cells(nlist);
  for (std::size_t c = 0; c < nlist; ++c) {
    cells[c] = {squared_l2(query, {centroids_.data() + c * dim_, dim_}), c};
  }
  std::partial_sort(cells.begin(), cells.begin() + nprobe, cells.end());

  std::vector<SearchHit> hits;
  for (std::size_t p = 0; p < nprobe; ++p) {
    for (std::uint32_t id : lists_[cells[p].second]) {
      const std::size_t row = id_to_row_[id];
      const double d =
          l2_distance(query, {vectors_.data() + row * dim_, dim_});
      hits.push_back({id, d});
    }
  }
  const std::size_t keep = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + keep, hits.end(),
                    [](const SearchHit& a, const SearchHit& b) {
                      if (a.score != b.score) return a.score < b.score;
                      return a.id < b.id;
                    });
  hits.resize(keep);
  return hits;
}

}  // namespace latentprobe
