#include "latentprobe/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "latentprobe/embedding_set.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/parallel.hpp"

namespace latentprobe {

std::size_t count_noise(const ClusterResult& result) {
  return static_cast<std::size_t>(std::count(
      result.assignments.begin(), result.assignments.end(), -1));
}

ClusterResult dbscan(const EmbeddingSet& corpus, double eps,
                     std::size_t min_pts, Metric metric) {
  if (eps <= 0.0) throw InputError("dbscan: eps must be positive");
  if (min_pts < 1) throw InputError("dbscan: min_pts must be at least 1");
  if (metric != Metric::euclidean && metric != Metric::cosine_distance) {
    throw InputError("dbscan: metric must be euclidean or cosine");
  }
  const std::size_t n = corpus.size();
  if (metric == Metric::euclidean) {
    double max_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      max_norm = std::max(max_norm, l2_norm(corpus.row(i)));
    if (max_norm > 1.0 + 1e-6) {
      throw InputError(
          "dbscan euclidean: corpus extends outside the unit hypersphere "
          "(max norm " + std::to_string(max_norm) +
          "); rescale with hypersphere normalization");
    }
  }

  // Full neighbor lists; a point always neighbors itself.
  std::vector<std::vector<std::uint32_t>> neighbors(n);
  parallel_for(n, [&](std::size_t i) {
    const auto row_i = corpus.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = metric == Metric::euclidean
                           ? l2_distance(row_i, corpus.row(j))
                           : cosine_distance(row_i, corpus.row(j));
      if (d <= eps) neighbors[i].push_back(static_cast<std::uint32_t>(j));
    }
  });

  constexpr std::int32_t kUnvisited = -2;
  constexpr std::int32_t kNoise = -1;
  std::vector<std::int32_t> assign(n, kUnvisited);
  std::int32_t next_cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (assign[i] != kUnvisited) continue;
    if (neighbors[i].size() < min_pts) {
      assign[i] = kNoise;
      continue;
    }
    const std::int32_t cluster = next_cluster++;
    assign[i] = cluster;
    std::deque<std::uint32_t> frontier(neighbors[i].begin(),
                                       neighbors[i].end());
    while (!frontier.empty()) {
      const std::uint32_t j = frontier.front();
      frontier.pop_front();
      if (assign[j] == kNoise) assign[j] = cluster;  // border point
      if (assign[j] != kUnvisited) continue;
      assign[j] = cluster;
      if (neighbors[j].size() >= min_pts) {
        frontier.insert(frontier.end(), neighbors[j].begin(),
                        neighbors[j].end());
      }
    }
  }

  // Renumber clusters by their smallest member id so the labeling does not
  // depend on which core point happened to seed each component.
  std::vector<std::uint32_t> first_member(
      static_cast<std::size_t>(next_cluster),
      static_cast<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (assign[i] < 0) continue;
    auto& first = first_member[static_cast<std::size_t>(assign[i])];
    first = std::min(first, static_cast<std::uint32_t>(i));
  }
  std::vector<std::int32_t> order(next_cluster);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    return first_member[static_cast<std::size_t>(a)] <
           first_member[static_cast<std::size_t>(b)];
  });
  std::vector<std::int32_t> remap(next_cluster);
  for (std::int32_t rank = 0; rank < next_cluster; ++rank)
    remap[static_cast<std::size_t>(order[rank])] = rank;
  for (auto& a : assign)
    if (a >= 0) a = remap[static_cast<std::size_t>(a)];

  ClusterResult result;
  result.assignments = std::move(assign);
  result.n_clusters = static_cast<std::size_t>(next_cluster);
  result.eps = eps;
  result.min_pts = min_pts;
  result.metric = metric;
  return result;
}

namespace {

struct Contingency {
  std::map<std::int32_t, std::size_t> row_sums;
  std::map<std::int32_t, std::size_t> col_sums;
  std::map<std::pair<std::int32_t, std::int32_t>, std::size_t> cells;
  std::size_t n = 0;
};

Contingency contingency(std::span<const std::int32_t> a,
                        std::span<const std::int32_t> b) {
  if (a.size() != b.size()) {
    throw InputError("partition lengths differ (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
  }
  Contingency c;
  c.n = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++c.row_sums[a[i]];
    ++c.col_sums[b[i]];
    ++c.cells[{a[i], b[i]}];
  }
  return c;
}

double entropy_nats(const std::map<std::int32_t, std::size_t>& counts,
                    std::size_t n) {
  double h = 0.0;
  for (const auto& [label, count] : counts) {
    const double p = static_cast<double>(count) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

double pairs(std::size_t count) {
  return 0.5 * static_cast<double>(count) * static_cast<double>(count - 1);
}

}  // namespace

double nmi(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  if (a.empty()) throw InputError("nmi: empty partitions");
  const Contingency c = contingency(a, b);
  const double ha = entropy_nats(c.row_sums, c.n);
  const double hb = entropy_nats(c.col_sums, c.n);
  if (ha == 0.0 || hb == 0.0) return 0.0;

  double mi = 0.0;
  const double n = static_cast<double>(c.n);
  for (const auto& [cell, count] : c.cells) {
    const double pij = static_cast<double>(count) / n;
    const double pi = static_cast<double>(c.row_sums.at(cell.first)) / n;
    const double pj = static_cast<double>(c.col_sums.at(cell.second)) / n;
    mi += pij * std::log(pij / (pi * pj));
  }
  return mi / (0.5 * (ha + hb));
}

double ari(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  if (a.size() < 2) throw InputError("ari: need at least 2 points");
  const Contingency c = contingency(a, b);

  double index = 0.0;
  for (const auto& [cell, count] : c.cells) index += pairs(count);
  double sum_a = 0.0;
  for (const auto& [label, count] : c.row_sums) sum_a += pairs(count);
  double sum_b = 0.0;
  for (const auto& [label, count] : c.col_sums) sum_b += pairs(count);

  const double total = pairs(c.n);
  const double expected = sum_a * sum_b / total;
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return 1.0;  // both partitions trivial
  return (index - expected) / denom;
}

void score_against_labels(ClusterResult& result,
                          std::span<const std::int32_t> labels,
                          NoisePolicy policy) {
  if (labels.size() != result.assignments.size()) {
    throw InputError("score_against_labels: label count does not match");
  }
  if (policy == NoisePolicy::shared_label) {
    // Noise keeps its -1 marker, acting as one extra cluster.
    result.nmi = nmi(result.assignments, labels);
    result.ari = ari(result.assignments, labels);
    return;
  }
  std::vector<std::int32_t> fa, fb;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (result.assignments[i] == -1) continue;
    fa.push_back(result.assignments[i]);
    fb.push_back(labels[i]);
  }
  if (fa.size() < 2) {
    throw ComputeError(
        "score_against_labels: fewer than 2 non-noise points remain");
  }
  result.nmi = nmi(fa, fb);
  result.ari = ari(fa, fb);
}

}  // namespace latentprobe
