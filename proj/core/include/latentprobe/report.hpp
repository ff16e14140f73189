#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "latentprobe/ann/lsh.hpp"
#include "latentprobe/geometry.hpp"
#include "latentprobe/purity.hpp"
#include "latentprobe/retrieval.hpp"

namespace latentprobe {

struct ClusterSummary {
  std::size_t n_clusters = 0;
  double nmi = 0.0;
  double ari = 0.0;
  double eps = 0.0;
  std::size_t min_pts = 0;
  Metric metric = Metric::euclidean;
  std::size_t n_noise = 0;
  std::string noise_policy = "shared_label";
};

// One machine-readable artifact per corpus per run. Sections are optional;
// commands fill what they computed. Timings are the only non-deterministic
// fields.
struct RunReport {
  std::string corpus_name;
  std::string corpus_path;
  std::string corpus_hash;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::string normalization = "none";
  std::uint64_t seed = 0;
  std::string tool_version;

  std::optional<GeometryReport> geometry;
  std::optional<AnisotropyResult> anisotropy_detail;
  std::vector<LshBucketStats> lsh_stats;
  std::vector<RetrievalReport> retrieval;
  std::vector<ClusterSummary> clustering;
  std::optional<PurityCurve> purity;
  std::map<std::string, double> timings_ms;
};

nlohmann::json report_to_json(const RunReport& report);
void write_report(const RunReport& report, const std::string& path);
RunReport report_from_json(const nlohmann::json& j);
RunReport read_report(const std::string& path);

// Plain-text summary: one row per index, metrics as "mean/std" x100.
std::string render_retrieval_table(const std::vector<RetrievalReport>& rows);

}  // namespace latentprobe
