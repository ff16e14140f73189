#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace latentprobe {

// A labeled embedding corpus: N rows of D 64-bit coordinates plus one
// nonnegative class id per row. Immutable after load; share freely across
// workers.
struct EmbeddingSet {
  std::string name;
  std::size_t dim = 0;
  std::vector<double> vectors;       // row-major, size() == size * dim
  std::vector<std::int32_t> labels;  // class ids, one per row
  std::vector<std::uint32_t> ids;    // stable item ids, 0..N-1 by default

  std::size_t size() const { return dim == 0 ? 0 : vectors.size() / dim; }

  std::span<const double> row(std::size_t i) const {
    return {vectors.data() + i * dim, dim};
  }

  // Throws InputError if any structural invariant is violated
  // (empty corpus, ragged data, non-finite coordinate, negative label).
  void validate() const;
};

// The identity id assignment 0..n-1 used whenever a corpus carries no
// explicit ids.
std::vector<std::uint32_t> default_ids(std::size_t n);

enum class NormalizationMode { none, l2_rows, unit_hypersphere_scale };

std::string to_string(NormalizationMode m);
NormalizationMode normalization_from_string(const std::string& s);

enum class StorageFormat { raw_f32, csv };

// Loads a corpus. raw_f32 reads packed little-endian IEEE floats described
// by a JSON sidecar at data_path + ".json" ({"count":N,"dim":D,
// "dtype":"f32le"}) plus a labels file of one decimal integer per line.
// csv reads one row per line; when labels_path is empty the last column is
// the integer label, otherwise every column is data and labels come from
// the file.
EmbeddingSet load_embeddings(const std::string& data_path,
                             const std::string& labels_path,
                             StorageFormat format = StorageFormat::raw_f32);

// Writes the raw_f32 format: data file, JSON sidecar, labels file.
void save_embeddings(const EmbeddingSet& e, const std::string& data_path,
                     const std::string& labels_path);

// l2_rows scales every row to unit norm (zero rows rejected);
// unit_hypersphere_scale divides all rows by the maximum row norm so the
// longest row lands on the unit sphere. Labels and ids pass through.
EmbeddingSet normalize(const EmbeddingSet& e, NormalizationMode mode);

// Rounds every coordinate through 32-bit float, the storage precision.
// Generated corpora pass through this so an in-memory set and its saved
// copy are bit-identical.
void quantize_to_f32(EmbeddingSet& e);

// FNV-1a 64 over a file's bytes, hex-encoded; the corpus hash recorded in
// run reports.
std::string hash_file(const std::string& path);

}  // namespace latentprobe
