#include "latentprobe/exact_knn.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

#include "latentprobe/error.hpp"
#include "latentprobe/parallel.hpp"

namespace latentprobe {

namespace {

struct Candidate {
  double dist;
  std::uint32_t id;
};

// Ranking order: by distance, ties by ascending id. For descending
// metrics the caller negates before comparing.
bool better(const Candidate& a, const Candidate& b) {
  if (a.dist != b.dist) return a.dist < b.dist;
  return a.id < b.id;
}

}  // namespace

void NeighborTable::check_invariants() const {
  const bool desc = is_descending(metric);
  for (std::size_t q = 0; q < n_queries(); ++q) {
    const auto ids = row_ids(q);
    const auto dist = row_distances(q);
    std::unordered_set<std::uint32_t> seen;
    for (std::size_t r = 0; r < ids.size(); ++r) {
      if (self_excluded && ids[r] == query_ids[q]) {
        throw ComputeError("self id present in self-excluded row " + std::to_string(q));
      }
      if (!seen.insert(ids[r]).second) {
        throw ComputeError("duplicate neighbor id in row " + std::to_string(q));
      }
      if (r > 0) {
        const bool ordered = desc ? dist[r] <= dist[r - 1] : dist[r] >= dist[r - 1];
        if (!ordered) {
          throw ComputeError("distances out of order in row " + std::to_string(q));
        }
      }
    }
  }
}

NeighborTable exact_knn(const EmbeddingSet& e, std::size_t k, Metric metric,
                        bool exclude_self) {
  const std::size_t n = e.size();
  const std::size_t max_k = n - (exclude_self ? 1 : 0);
  if (k < 1 || k > max_k) {
    throw InputError("k=" + std::to_string(k) + " out of range; corpus holds " +
                     std::to_string(n) + " items" +
                     (exclude_self ? " (self excluded)" : ""));
  }
  if (metric == Metric::hamming) {
    throw InputError("hamming applies to binary codes, not raw embeddings");
  }

  NeighborTable t;
  t.k = k;
  t.metric = metric;
  t.self_excluded = exclude_self;
  t.query_ids.resize(n);
  t.row_offsets.resize(n + 1);
  for (std::size_t q = 0; q <= n; ++q) t.row_offsets[q] = q * k;
  t.neighbor_ids.resize(n * k);
  t.distances.resize(n * k);

  const bool desc = is_descending(metric);
  parallel_for(n, [&](std::size_t q) {
    t.query_ids[q] = static_cast<std::uint32_t>(q);
    const auto query = e.row(q);
    std::vector<Candidate> cand;
    cand.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (exclude_self && j == q) continue;
      double d;
      switch (metric) {
        case Metric::euclidean: d = l2_distance(query, e.row(j)); break;
        case Metric::cosine_distance: d = cosine_distance(query, e.row(j)); break;
        default: d = -inner_product(query, e.row(j)); break;
      }
      cand.push_back({d, static_cast<std::uint32_t>(j)});
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k),
                      cand.end(), better);
    for (std::size_t r = 0; r < k; ++r) {
      t.neighbor_ids[q * k + r] = cand[r].id;
      t.distances[q * k + r] = desc ? -cand[r].dist : cand[r].dist;
    }
  });
  return t;
}

std::vector<std::int64_t> occurrence_counts(const NeighborTable& t,
                                            std::size_t n_items) {
  std::vector<std::int64_t> counts(n_items, 0);
  for (auto id : t.neighbor_ids) {
    if (id >= n_items) {
      throw InputError("neighbor id " + std::to_string(id) +
                       " out of range for n_items=" + std::to_string(n_items));
    }
    ++counts[id];
  }
  return counts;
}

void write_csv(const NeighborTable& t, std::ostream& out) {
  out << "query_id,rank,neighbor_id,distance\n";
  for (std::size_t q = 0; q < t.n_queries(); ++q) {
    const auto ids = t.row_ids(q);
    const auto dist = t.row_distances(q);
    for (std::size_t r = 0; r < ids.size(); ++r) {
      out << t.query_ids[q] << ',' << r + 1 << ',' << ids[r] << ',' << dist[r]
          << '\n';
    }
  }
}

}  // namespace latentprobe
