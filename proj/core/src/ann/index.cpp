#include "latentprobe/ann/index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "latentprobe/ann/hnsw.hpp"
#include "latentprobe/ann/ivf.hpp"
#include "latentprobe/ann/lsh.hpp"
#include "latentprobe/embedding_set.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/parallel.hpp"

namespace latentprobe {

std::string to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::exact: return "exact";
    case IndexKind::ivf: return "ivf";
    case IndexKind::hnsw: return "hnsw";
    case IndexKind::lsh: return "lsh";
  }
  return "unknown";
}

IndexKind index_kind_from_string(const std::string& name) {
  if (name == "exact") return IndexKind::exact;
  if (name == "ivf") return IndexKind::ivf;
  if (name == "hnsw") return IndexKind::hnsw;
  if (name == "lsh") return IndexKind::lsh;
  throw InputError("unknown index kind '" + name +
                   "' (expected exact, ivf, hnsw, or lsh)");
}

namespace {

constexpr char kMagic[4] = {'L', 'P', 'I', 'X'};
constexpr std::uint32_t kFormatVersion = 1;

void put_bytes(std::ostream& out, const void* data, std::size_t len) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
}

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  put_bytes(out, &value, sizeof(T));
}

template <typename T>
void put_vec(std::ostream& out, const std::vector<T>& v) {
  static_assert(std::is_trivially_copyable_v<T>);
  put<std::uint64_t>(out, v.size());
  if (!v.empty()) put_bytes(out, v.data(), v.size() * sizeof(T));
}

void get_bytes(std::istream& in, void* data, std::size_t len) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(in.gcount()) != len) {
    throw InputError("index file truncated");
  }
}

template <typename T>
T get(std::istream& in) {
  static_assert(std::is_trivially_copyable_v<T>);
  T value;
  get_bytes(in, &value, sizeof(T));
  return value;
}

template <typename T>
std::vector<T> get_vec(std::istream& in) {
  const auto size = get<std::uint64_t>(in);
  std::vector<T> v(size);
  if (size) get_bytes(in, v.data(), size * sizeof(T));
  return v;
}

}  // namespace

FlatExactIndex::FlatExactIndex(const EmbeddingSet& corpus, Metric metric)
    : dim_(corpus.dim),
      metric_(metric),
      vectors_(corpus.vectors),
      ids_(corpus.ids.empty() ? default_ids(corpus.size()) : corpus.ids) {
  if (metric == Metric::hamming) {
    throw InputError("exact index: hamming applies to binary codes only");
  }
}

FlatExactIndex::FlatExactIndex(std::size_t dim, Metric metric,
                               std::vector<double> vectors,
                               std::vector<std::uint32_t> ids)
    : dim_(dim), metric_(metric), vectors_(std::move(vectors)),
      ids_(std::move(ids)) {}

std::vector<SearchHit> FlatExactIndex::search(std::span<const double> query,
                                              std::size_t k) const {
  if (query.size() != dim_) {
    throw InputError("exact search: query dimension " +
                     std::to_string(query.size()) +
                     " does not match index (" + std::to_string(dim_) + ")");
  }
  const bool desc = is_descending(metric_);
  const std::size_t n = ids_.size();
  std::vector<SearchHit> hits(n);
  parallel_for(n, [&](std::size_t i) {
    std::span<const double> row{vectors_.data() + i * dim_, dim_};
    double score = 0.0;
    switch (metric_) {
      case Metric::euclidean: score = l2_distance(query, row); break;
      case Metric::cosine_distance: score = cosine_distance(query, row); break;
      case Metric::inner_product_desc: score = inner_product(query, row); break;
      case Metric::hamming: break;
    }
    hits[i] = {ids_[i], score};
  });
  const std::size_t keep = std::min(k, n);
  std::partial_sort(hits.begin(), hits.begin() + keep, hits.end(),
                    [desc](const SearchHit& a, const SearchHit& b) {
                      if (a.score != b.score)
                        return desc ? a.score > b.score : a.score < b.score;
                      return a.id < b.id;
                    });
  hits.resize(keep);
  return hits;
}

void FlatExactIndex::save(std::ostream& out) const {
  put_bytes(out, kMagic, 4);
  put(out, kFormatVersion);
  put(out, static_cast<std::uint8_t>(IndexKind::exact));
  put(out, static_cast<std::uint8_t>(metric_));
  put<std::uint64_t>(out, dim_);
  put_vec(out, ids_);
  put_vec(out, vectors_);
}

void IvfIndex::save(std::ostream& out) const {
  put_bytes(out, kMagic, 4);
  put(out, kFormatVersion);
  put(out, static_cast<std::uint8_t>(IndexKind::ivf));
  put<std::uint64_t>(out, config_.nlist);
  put<std::uint64_t>(out, config_.nprobe);
  put<std::uint64_t>(out, config_.kmeans_iters);
  put<std::uint64_t>(out, config_.seed);
  put<std::uint64_t>(out, dim_);
  put_vec(out, centroids_);
  put<std::uint64_t>(out, lists_.size());
  for (const auto& list : lists_) put_vec(out, list);
  put_vec(out, vectors_);
  put_vec(out, ids_);
}

void HnswIndex::save(std::ostream& out) const {
  put_bytes(out, kMagic, 4);
  put(out, kFormatVersion);
  put(out, static_cast<std::uint8_t>(IndexKind::hnsw));
  put<std::uint64_t>(out, config_.m);
  put<std::uint64_t>(out, config_.ef_construction);
  put<std::uint64_t>(out, config_.ef_search);
  put<std::uint64_t>(out, config_.seed);
  put<std::uint64_t>(out, dim_);
  put<std::uint32_t>(out, entry_point_);
  put<std::int32_t>(out, max_level_);
  put_vec(out, std::vector<std::int32_t>(levels_.begin(), levels_.end()));
  put<std::uint64_t>(out, links_.size());
  for (const auto& node : links_) {
    put<std::uint64_t>(out, node.size());
    for (const auto& level : node) put_vec(out, level);
  }
  put_vec(out, vectors_);
  put_vec(out, ids_);
}

void LshIndex::save(std::ostream& out) const {
  put_bytes(out, kMagic, 4);
  put(out, kFormatVersion);
  put(out, static_cast<std::uint8_t>(IndexKind::lsh));
  put<std::uint64_t>(out, config_.nbits);
  put<std::uint64_t>(out, config_.seed);
  put<std::uint8_t>(out, config_.center ? 1 : 0);
  put<std::uint64_t>(out, dim_);
  put<std::uint64_t>(out, n_);
  put_vec(out, hyperplanes_);
  put_vec(out, mean_);
  put_vec(out, codes_);
  put_vec(out, ids_);
}

std::unique_ptr<AnnIndex> load_index(std::istream& in) {
  char magic[4];
  get_bytes(in, magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw InputError("not an index file (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kFormatVersion) {
    throw InputError("unsupported index format version " +
                     std::to_string(version));
  }
  const auto kind = static_cast<IndexKind>(get<std::uint8_t>(in));
  switch (kind) {
    case IndexKind::exact: {
      const auto metric = static_cast<Metric>(get<std::uint8_t>(in));
      const auto dim = get<std::uint64_t>(in);
      auto ids = get_vec<std::uint32_t>(in);
      auto vectors = get_vec<double>(in);
      return std::make_unique<FlatExactIndex>(dim, metric, std::move(vectors),
                                              std::move(ids));
    }
    case IndexKind::ivf: {
      auto idx = std::unique_ptr<IvfIndex>(new IvfIndex());
      idx->config_.nlist = get<std::uint64_t>(in);
      idx->config_.nprobe = get<std::uint64_t>(in);
      idx->config_.kmeans_iters = get<std::uint64_t>(in);
      idx->config_.seed = get<std::uint64_t>(in);
      idx->dim_ = get<std::uint64_t>(in);
      idx->centroids_ = get_vec<double>(in);
      const auto nlists = get<std::uint64_t>(in);
      idx->lists_.resize(nlists);
      for (auto& list : idx->lists_) list = get_vec<std::uint32_t>(in);
      idx->vectors_ = get_vec<double>(in);
      idx->ids_ = get_vec<std::uint32_t>(in);
      idx->id_to_row_.assign(idx->ids_.size(), 0);
      for (std::size_t i = 0; i < idx->ids_.size(); ++i)
        idx->id_to_row_[idx->ids_[i]] = i;
      return idx;
    }
    case IndexKind::hnsw: {
      auto idx = std::unique_ptr<HnswIndex>(new HnswIndex());
      idx->config_.m = get<std::uint64_t>(in);
      idx->config_.ef_construction = get<std::uint64_t>(in);
      idx->config_.ef_search = get<std::uint64_t>(in);
      idx->config_.seed = get<std::uint64_t>(in);
      idx->dim_ = get<std::uint64_t>(in);
      idx->entry_point_ = get<std::uint32_t>(in);
      idx->max_level_ = get<std::int32_t>(in);
      const auto levels = get_vec<std::int32_t>(in);
      idx->levels_.assign(levels.begin(), levels.end());
      const auto n_nodes = get<std::uint64_t>(in);
      idx->links_.resize(n_nodes);
      for (auto& node : idx->links_) {
        node.resize(get<std::uint64_t>(in));
        for (auto& level : node) level = get_vec<std::uint32_t>(in);
      }
      idx->vectors_ = get_vec<double>(in);
      idx->ids_ = get_vec<std::uint32_t>(in);
      return idx;
    }
    case IndexKind::lsh: {
      auto idx = std::unique_ptr<LshIndex>(new LshIndex());
      idx->config_.nbits = get<std::uint64_t>(in);
      idx->config_.seed = get<std::uint64_t>(in);
      idx->config_.center = get<std::uint8_t>(in) != 0;
      idx->dim_ = get<std::uint64_t>(in);
      idx->n_ = get<std::uint64_t>(in);
      idx->words_ = (idx->config_.nbits + 63) / 64;
      idx->hyperplanes_ = get_vec<double>(in);
      idx->mean_ = get_vec<double>(in);
      idx->codes_ = get_vec<std::uint64_t>(in);
      idx->ids_ = get_vec<std::uint32_t>(in);
      return idx;
    }
  }
  throw InputError("index file has unknown kind byte");
}

std::unique_ptr<AnnIndex> load_index_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open index file: " + path);
  return load_index(in);
}

void save_index_file(const AnnIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write index file: " + path);
  index.save(out);
  out.flush();
  if (!out) throw ComputeError("failed writing index file: " + path);
}

}  // namespace latentprobe
