#include "latentprobe/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "latentprobe/embedding_set.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/exact_knn.hpp"
#include "latentprobe/parallel.hpp"
#include "latentprobe/version.hpp"

namespace latentprobe {

namespace {

std::unordered_set<std::uint32_t> to_set(
    const std::vector<std::uint32_t>& relevant) {
  return {relevant.begin(), relevant.end()};
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) {
      const double d = v - out.mean;
      ss += d * d;
    }
    out.std = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return out;
}

}  // namespace

double precision_at_k(std::span<const std::uint32_t> retrieved,
                      const std::vector<std::uint32_t>& relevant,
                      std::size_t k) {
  if (k < 1) throw InputError("precision_at_k: k must be at least 1");
  const auto rel = to_set(relevant);
  const std::size_t top = std::min(k, retrieved.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < top; ++i)
    if (rel.count(retrieved[i])) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

double recall_at_k(std::span<const std::uint32_t> retrieved,
                   const std::vector<std::uint32_t>& relevant, std::size_t k) {
  if (relevant.empty()) {
    throw ComputeError("recall_at_k: query class has no other members");
  }
  const auto rel = to_set(relevant);
  const std::size_t top = std::min(k, retrieved.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < top; ++i)
    if (rel.count(retrieved[i])) ++hits;
  return static_cast<double>(hits) / static_cast<double>(rel.size());
}

double average_precision_at_k(std::span<const std::uint32_t> retrieved,
                              const std::vector<std::uint32_t>& relevant,
                              std::size_t k) {
  if (relevant.empty()) {
    throw ComputeError(
        "average_precision_at_k: query class has no other members");
  }
  const auto rel = to_set(relevant);
  const std::size_t top = std::min(k, retrieved.size());
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < top; ++i) {
    if (rel.count(retrieved[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  const double denom = static_cast<double>(std::min(rel.size(), k));
  return sum / denom;
}

double reciprocal_rank(std::span<const std::uint32_t> retrieved,
                       const std::vector<std::uint32_t>& relevant) {
  const auto rel = to_set(relevant);
  for (std::size_t i = 0; i < retrieved.size(); ++i)
    if (rel.count(retrieved[i])) return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

RetrievalReport evaluate_index(const EmbeddingSet& corpus,
                               const AnnIndex& index, std::size_t k,
                               bool exclude_self) {
  if (k < 1) throw InputError("evaluate_index: cutoff must be at least 1");
  if (index.dim() != corpus.dim) {
    throw InputError("evaluate_index: index dimension " +
                     std::to_string(index.dim()) +
                     " does not match corpus (" + std::to_string(corpus.dim) +
                     ")");
  }
  const std::size_t n = corpus.size();
  const std::vector<std::uint32_t> ids =
      corpus.ids.empty() ? default_ids(n) : corpus.ids;

  std::vector<std::vector<std::uint32_t>> by_class;
  for (std::size_t i = 0; i < n; ++i) {
    const auto label = static_cast<std::size_t>(corpus.labels[i]);
    if (label >= by_class.size()) by_class.resize(label + 1);
    by_class[label].push_back(ids[i]);
  }

  std::vector<double> p(n, -1.0), r(n, -1.0), ap(n, -1.0), rr(n, -1.0);
  parallel_for(n, [&](std::size_t q) {
    const std::uint32_t self = ids[q];
    std::vector<std::uint32_t> relevant =
        by_class[static_cast<std::size_t>(corpus.labels[q])];
    if (exclude_self) {
      std::erase(relevant, self);
      if (relevant.empty()) return;  // skipped query
    }

    // Fetch one extra hit so removing the query itself still leaves k.
    const std::size_t fetch = exclude_self ? k + 1 : k;
    const auto hits = index.search(corpus.row(q), fetch);
    std::vector<std::uint32_t> retrieved;
    retrieved.reserve(k);
    for (const SearchHit& h : hits) {
      if (exclude_self && h.id == self) continue;
      retrieved.push_back(h.id);
      if (retrieved.size() == k) break;
    }

    p[q] = precision_at_k(retrieved, relevant, k);
    r[q] = recall_at_k(retrieved, relevant, k);
    ap[q] = average_precision_at_k(retrieved, relevant, k);
    rr[q] = reciprocal_rank(retrieved, relevant);
  });

  std::vector<double> pv, rv, apv, rrv;
  pv.reserve(n);
  std::size_t skipped = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (p[q] < 0.0) {
      ++skipped;
      continue;
    }
    pv.push_back(p[q]);
    rv.push_back(r[q]);
    apv.push_back(ap[q]);
    rrv.push_back(rr[q]);
  }

  RetrievalReport report;
  report.index_kind = index.kind();
  report.cutoff = k;
  report.p_at_k = mean_std(pv);
  report.r_at_k = mean_std(rv);
  report.map_at_k = mean_std(apv);
  report.mrr = mean_std(rrv);
  report.n_queries = pv.size();
  report.n_skipped = skipped;
  report.config["metric"] = to_string(index.metric());
  report.config["exclude_self"] = exclude_self ? "true" : "false";
  report.config["ap_denominator"] = "min(n_relevant,k)";
  report.config["std_convention"] = "sample";
  report.config["tool_version"] = kToolVersion;
  return report;
}

KnnClassifyResult knn_classify_accuracy(const EmbeddingSet& corpus,
                                        std::size_t k, Metric metric) {
  const std::size_t n = corpus.size();
  if (k > n - 1) {
    throw InputError("knn_classify: k (" + std::to_string(k) +
                     ") exceeds N-1 (" + std::to_string(n - 1) + ")");
  }
  const NeighborTable table = exact_knn(corpus, k, metric, true);

  std::vector<char> top1_hit(n, 0), top5_hit(n, 0);
  parallel_for(n, [&](std::size_t q) {
    std::map<std::int32_t, std::size_t> votes;
    for (std::uint32_t nb : table.row_ids(q)) ++votes[corpus.labels[nb]];
    std::vector<std::pair<std::int32_t, std::size_t>> ranked(votes.begin(),
                                                             votes.end());
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    const std::int32_t truth = corpus.labels[q];
    if (!ranked.empty() && ranked[0].first == truth) top1_hit[q] = 1;
    const std::size_t top = std::min<std::size_t>(5, ranked.size());
    for (std::size_t i = 0; i < top; ++i) {
      if (ranked[i].first == truth) {
        top5_hit[q] = 1;
        break;
      }
    }
  });

  KnnClassifyResult result;
  std::size_t t1 = 0, t5 = 0;
  for (std::size_t q = 0; q < n; ++q) {
    t1 += top1_hit[q];
    t5 += top5_hit[q];
  }
  result.top1 = static_cast<double>(t1) / static_cast<double>(n);
  result.top5 = static_cast<double>(t5) / static_cast<double>(n);
  return result;
}

}  // namespace latentprobe
