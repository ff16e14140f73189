#include "latentprobe/embedding_set.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latentprobe/error.hpp"
#include "latentprobe/metric.hpp"

namespace latentprobe {

namespace {

std::string sidecar_path(const std::string& data_path) {
  return data_path + ".json";
}

std::vector<std::int32_t> read_labels_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open labels file: " + path);
  std::vector<std::int32_t> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(line, &pos);
    } catch (const std::exception&) {
      throw InputError("labels file " + path + ": line " +
                       std::to_string(lineno) + " is not an integer");
    }
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos != line.size()) {
      throw InputError("labels file " + path + ": trailing characters on line " +
                       std::to_string(lineno));
    }
    if (v < 0) {
      throw InputError("labels file " + path + ": negative class id on line " +
                       std::to_string(lineno));
    }
    labels.push_back(static_cast<std::int32_t>(v));
  }
  return labels;
}

EmbeddingSet load_raw_f32(const std::string& data_path, const std::string& labels_path) {
  std::ifstream side(sidecar_path(data_path));
  if (!side) throw InputError("cannot open sidecar: " + sidecar_path(data_path));
  nlohmann::json meta;
  try {
    side >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed sidecar " + sidecar_path(data_path) + ": " + e.what());
  }
  if (!meta.contains("count") || !meta.contains("dim")) {
    throw InputError("sidecar " + sidecar_path(data_path) + " missing count/dim");
  }
  if (meta.value("dtype", "f32le") != "f32le") {
    throw InputError("sidecar declares unsupported dtype: " +
                     meta["dtype"].get<std::string>());
  }
  const std::size_t count = meta["count"].get<std::size_t>();
  const std::size_t dim = meta["dim"].get<std::size_t>();

  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw InputError("cannot open data file: " + data_path);
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  if (bytes != count * dim * sizeof(float)) {
    throw InputError("byte-length mismatch: " + data_path + " holds " +
                     std::to_string(bytes) + " bytes, sidecar declares " +
                     std::to_string(count) + "x" + std::to_string(dim) +
                     " f32 (" + std::to_string(count * dim * sizeof(float)) + ")");
  }
  std::vector<float> raw(count * dim);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw InputError("short read on data file: " + data_path);

  EmbeddingSet e;
  e.dim = dim;
  e.vectors.assign(raw.begin(), raw.end());
  e.labels = read_labels_file(labels_path);
  return e;
}

EmbeddingSet load_csv(const std::string& data_path, const std::string& labels_path) {
  std::ifstream in(data_path);
  if (!in) throw InputError("cannot open data file: " + data_path);
  const bool labels_inline = labels_path.empty();

  EmbeddingSet e;
  std::string line;
  std::size_t lineno = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InputError(data_path + ": line " + std::to_string(lineno) +
                         " has non-numeric cell '" + cell + "'");
      }
    }
    if (columns == 0) {
      columns = values.size();
      if (columns < (labels_inline ? 2u : 1u)) {
        throw InputError(data_path + ": too few columns");
      }
      e.dim = labels_inline ? columns - 1 : columns;
    } else if (values.size() != columns) {
      throw InputError(data_path + ": line " + std::to_string(lineno) +
                       " has " + std::to_string(values.size()) +
                       " columns, expected " + std::to_string(columns));
    }
    if (labels_inline) {
      const double lab = values.back();
      values.pop_back();
      if (lab < 0 || lab != std::floor(lab)) {
        throw InputError(data_path + ": line " + std::to_string(lineno) +
                         " label must be a nonnegative integer");
      }
      e.labels.push_back(static_cast<std::int32_t>(lab));
    }
    e.vectors.insert(e.vectors.end(), values.begin(), values.end());
  }
  if (!labels_inline) e.labels = read_labels_file(labels_path);
  return e;
}

}  // namespace

void EmbeddingSet::validate() const {
  if (dim == 0) throw InputError("corpus dimension must be >= 1");
  if (vectors.empty()) throw InputError("corpus must contain at least one row");
  if (vectors.size() % dim != 0) {
    throw InputError("vector buffer is not a multiple of dim");
  }
  const std::size_t n = size();
  if (labels.size() != n) {
    throw InputError("label count " + std::to_string(labels.size()) +
                     " does not match row count " + std::to_string(n));
  }
  if (!ids.empty() && ids.size() != n) {
    throw InputError("id count does not match row count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0) {
      throw InputError("row " + std::to_string(i) + ": negative class id");
    }
    for (std::size_t j = 0; j < dim; ++j) {
      if (!std::isfinite(vectors[i * dim + j])) {
        throw InputError("row " + std::to_string(i) + ": non-finite value at column " +
                         std::to_string(j));
      }
    }
  }
}

std::vector<std::uint32_t> default_ids(std::size_t n) {
  std::vector<std::uint32_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::uint32_t>(i);
  return ids;
}

std::string to_string(NormalizationMode m) {
  switch (m) {
    case NormalizationMode::none: return "none";
    case NormalizationMode::l2_rows: return "l2_rows";
    case NormalizationMode::unit_hypersphere_scale: return "unit_hypersphere_scale";
  }
  return "?";
}

NormalizationMode normalization_from_string(const std::string& s) {
  if (s == "none") return NormalizationMode::none;
  if (s == "l2" || s == "l2_rows") return NormalizationMode::l2_rows;
  if (s == "hypersphere" || s == "unit_hypersphere_scale") {
    return NormalizationMode::unit_hypersphere_scale;
  }
  throw InputError("unknown normalization mode: " + s);
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::cosine_distance: return "cosine_distance";
    case Metric::inner_product_desc: return "inner_product_desc";
    case Metric::hamming: return "hamming";
  }
  return "?";
}

Metric metric_from_string(const std::string& s) {
  if (s == "euclidean" || s == "l2") return Metric::euclidean;
  if (s == "cosine" || s == "cosine_distance") return Metric::cosine_distance;
  if (s == "ip" || s == "inner_product" || s == "inner_product_desc") {
    return Metric::inner_product_desc;
  }
  if (s == "hamming") return Metric::hamming;
  throw InputError("unknown metric: " + s);
}

EmbeddingSet load_embeddings(const std::string& data_path,
                             const std::string& labels_path,
                             StorageFormat format) {
  EmbeddingSet e = format == StorageFormat::raw_f32
                       ? load_raw_f32(data_path, labels_path)
                       : load_csv(data_path, labels_path);
  e.name = data_path;
  e.ids = default_ids(e.size());
  e.validate();
  return e;
}

void save_embeddings(const EmbeddingSet& e, const std::string& data_path,
                     const std::string& labels_path) {
  {
    std::ofstream out(data_path, std::ios::binary);
    if (!out) throw InputError("cannot write data file: " + data_path);
    std::vector<float> raw(e.vectors.begin(), e.vectors.end());
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(float)));
    if (!out) throw InputError("write failed: " + data_path);
  }
  {
    nlohmann::json meta{{"count", e.size()}, {"dim", e.dim}, {"dtype", "f32le"}};
    std::ofstream side(sidecar_path(data_path));
    if (!side) throw InputError("cannot write sidecar: " + sidecar_path(data_path));
    side << meta.dump(2) << "\n";
  }
  {
    std::ofstream lab(labels_path);
    if (!lab) throw InputError("cannot write labels file: " + labels_path);
    for (auto l : e.labels) lab << l << "\n";
  }
}

EmbeddingSet normalize(const EmbeddingSet& e, NormalizationMode mode) {
  if (mode == NormalizationMode::none) return e;
  EmbeddingSet out = e;
  const std::size_t n = e.size();
  if (mode == NormalizationMode::l2_rows) {
    for (std::size_t i = 0; i < n; ++i) {
      const double norm = l2_norm(e.row(i));
      if (norm == 0.0) {
        throw ComputeError("row " + std::to_string(i) +
                           " has zero norm; cannot l2-normalize");
      }
      for (std::size_t j = 0; j < e.dim; ++j) out.vectors[i * e.dim + j] /= norm;
    }
  } else {
    double max_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_norm = std::max(max_norm, l2_norm(e.row(i)));
    if (max_norm == 0.0) {
      throw ComputeError("all rows have zero norm; cannot scale to unit hypersphere");
    }
    for (auto& v : out.vectors) v /= max_norm;
  }
  return out;
}

void quantize_to_f32(EmbeddingSet& e) {
  for (auto& v : e.vectors) v = static_cast<double>(static_cast<float>(v));
}

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file for hashing: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const auto got = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + hex;
}

}  // namespace latentprobe
