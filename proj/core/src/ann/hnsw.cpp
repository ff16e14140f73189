#include "latentprobe/ann/hnsw.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "latentprobe/embedding_set.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/rng.hpp"

namespace latentprobe {

namespace {

struct Entry {
  double sim;
  std::uint32_t node;
};

// Total order: higher similarity first, then smaller node index.
bool better(const Entry& a, const Entry& b) {
  if (a.sim != b.sim) return a.sim > b.sim;
  return a.node < b.node;
}

// priority_queue surfaces the maximum under its comparator, so ranking
// better entries as "smaller" floats the worst one to the top.
struct WorseOnTop {
  bool operator()(const Entry& a, const Entry& b) const {
    return better(a, b);
  }
};
struct BetterOnTop {
  bool operator()(const Entry& a, const Entry& b) const {
    return better(b, a);
  }
};

}  // namespace

HnswIndex::HnswIndex(const EmbeddingSet& corpus, const HnswConfig& config)
    : config_(config), dim_(corpus.dim) {
  if (config_.m < 2) throw InputError("hnsw: m must be at least 2");
  if (config_.ef_construction < 1 || config_.ef_search < 1) {
    throw InputError("hnsw: ef_construction and ef_search must be positive");
  }
  const std::size_t n = corpus.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double norm = l2_norm(corpus.row(i));
    if (std::abs(norm - 1.0) > 1e-4) {
      throw InputError("hnsw: row " + std::to_string(i) + " has norm " +
                       std::to_string(norm) +
                       "; the index requires unit-norm rows (l2 normalization)");
    }
  }

  vectors_ = corpus.vectors;
  ids_ = corpus.ids.empty() ? default_ids(corpus.size()) : corpus.ids;
  levels_.assign(n, 0);
  links_.resize(n);

  Rng rng(config_.seed);
  const double ml = 1.0 / std::log(static_cast<double>(config_.m));
  for (std::size_t i = 0; i < n; ++i) {
    levels_[i] =
        static_cast<int>(std::floor(-std::log(rng.uniform_open0()) * ml));
  }
  for (std::size_t i = 0; i < n; ++i) insert(i);
}

double HnswIndex::sim(std::size_t node, std::span<const double> query) const {
  return inner_product({vectors_.data() + node * dim_, dim_}, query);
}

std::vector<std::pair<double, std::uint32_t>> HnswIndex::search_layer(
    std::span<const double> query, std::uint32_t entry, int level,
    std::size_t ef) const {
  std::vector<char> visited(links_.size(), 0);
  std::priority_queue<Entry, std::vector<Entry>, BetterOnTop> candidates;
  std::priority_queue<Entry, std::vector<Entry>, WorseOnTop> results;

  const Entry start{sim(entry, query), entry};
  visited[entry] = 1;
  candidates.push(start);
  results.push(start);

  while (!candidates.empty()) {
    const Entry cur = candidates.top();
    candidates.pop();
    if (results.size() >= ef && better(results.top(), cur)) break;
    for (std::uint32_t nb : links_[cur.node][level]) {
      if (visited[nb]) continue;
      visited[nb] = 1;
      const Entry e{sim(nb, query), nb};
      if (results.size() < ef || better(e, results.top())) {
        candidates.push(e);
        results.push(e);
        if (results.size() > ef) results.pop();
      }
    }
  }

  std::vector<std::pair<double, std::uint32_t>> out;
  out.reserve(results.size());
  while (!results.empty()) {
    out.emplace_back(results.top().sim, results.top().node);
    results.pop();
  }
  std::reverse(out.begin(), out.end());  // best first
  return out;
}

std::vector<std::uint32_t> HnswIndex::select_neighbors(
    std::span<const double> target,
    std::vector<std::pair<double, std::uint32_t>> candidates,
    std::size_t cap) const {
  std::vector<std::uint32_t> out;
  if (candidates.size() <= cap) {
    for (const auto& [s, node] : candidates) out.push_back(node);
    return out;
  }
  // Overflow: keep a candidate only when it is more similar to the target
  // than to every neighbor already kept.
  for (const auto& [s, node] : candidates) {
    if (out.size() == cap) break;
    bool keep = true;
    std::span<const double> cand{vectors_.data() + node * dim_, dim_};
    for (std::uint32_t kept : out) {
      if (sim(kept, cand) > s) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(node);
  }
  return out;
}

void HnswIndex::link(std::uint32_t from, std::uint32_t to, int level) {
  auto& list = links_[from][level];
  list.push_back(to);
  const std::size_t cap = level == 0 ? 2 * config_.m : config_.m;
  if (list.size() <= cap) return;
  std::span<const double> target{vectors_.data() + from * dim_, dim_};
  std::vector<std::pair<double, std::uint32_t>> cands;
  cands.reserve(list.size());
  for (std::uint32_t node : list) cands.emplace_back(sim(node, target), node);
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    return better({a.first, a.second}, {b.first, b.second});
  });
  list = select_neighbors(target, std::move(cands), cap);
}

void HnswIndex::insert(std::size_t node) {
  const int level = levels_[node];
  links_[node].resize(level + 1);
  if (max_level_ < 0) {
    entry_point_ = static_cast<std::uint32_t>(node);
    max_level_ = level;
    return;
  }

  std::span<const double> vec{vectors_.data() + node * dim_, dim_};
  std::uint32_t cur = entry_point_;
  // Greedy descent through layers above the node's level.
  for (int l = max_level_; l > level; --l) {
    bool moved = true;
    double cur_sim = sim(cur, vec);
    while (moved) {
      moved = false;
      for (std::uint32_t nb : links_[cur][l]) {
        const double s = sim(nb, vec);
        if (s > cur_sim) {
          cur_sim = s;
          cur = nb;
          moved = true;
        }
      }
    }
  }

  for (int l = std::min(level, max_level_); l >= 0; --l) {
    auto found =
        search_layer(vec, cur, l, config_.ef_construction);
    const std::size_t cap = l == 0 ? 2 * config_.m : config_.m;
    links_[node][l] = select_neighbors(vec, found, cap);
    for (std::uint32_t nb : links_[node][l])
      link(nb, static_cast<std::uint32_t>(node), l);
    cur = found.front().second;
  }

  if (level > max_level_) {
    entry_point_ = static_cast<std::uint32_t>(node);
    max_level_ = level;
  }
}

std::vector<SearchHit> HnswIndex::search(std::span<const double> query,
                                         std::size_t k) const {
  return search(query, k, config_.ef_search);
}

std::vector<SearchHit> HnswIndex::search(std::span<const double> query,
                                         std::size_t k,
                                         std::size_t ef_search) const {
  if (query.size() != dim_) {
    throw InputError("hnsw search: query dimension " +
                     std::to_string(query.size()) + " does not match index (" +
                     std::to_string(dim_) + ")");
  }
  if (ids_.empty()) throw ComputeError("hnsw search: empty index");
  if (ef_search < 1) throw InputError("hnsw search: ef_search must be positive");

  std::uint32_t cur = entry_point_;
  for (int l = max_level_; l >= 1; --l) {
    bool moved = true;
    double cur_sim = sim(cur, query);
    while (moved) {
      moved = false;
      for (std::uint32_t nb : links_[cur][l]) {
        const double s = sim(nb, query);
        if (s > cur_sim) {
          cur_sim = s;
          cur = nb;
          moved = true;
        }
      }
    }
  }

  auto found = search_layer(query, cur, 0, ef_search);
  const std::size_t keep = std::min(k, found.size());
  std::vector<SearchHit> hits;
  hits.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i)
    hits.push_back({ids_[found[i].second], found[i].first});
  return hits;
}

}  // namespace latentprobe
