#include "latentprobe/report.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latentprobe/error.hpp"
#include "latentprobe/version.hpp"

namespace latentprobe {

namespace {

using nlohmann::json;

json mean_std_json(const MeanStd& m) {
  return json{{"mean", m.mean}, {"std", m.std}};
}

MeanStd mean_std_from(const json& j) {
  return {j.at("mean").get<double>(), j.at("std").get<double>()};
}

}  // namespace

json report_to_json(const RunReport& report) {
  json j;
  j["corpus"] = {
      {"name", report.corpus_name}, {"path", report.corpus_path},
      {"hash", report.corpus_hash}, {"n", report.n},
      {"dim", report.dim},          {"normalization", report.normalization},
  };
  j["seed"] = report.seed;
  j["tool_version"] =
      report.tool_version.empty() ? kToolVersion : report.tool_version;

  if (report.geometry) {
    json g;
    g["anisotropy"] = report.geometry->anisotropy;
    g["skewness"] = report.geometry->skewness;
    g["worst_case_hub"] = report.geometry->worst_case_hub;
    g["hub_k"] = report.geometry->hub_k;
    if (report.anisotropy_detail) {
      g["lambda_max"] = report.anisotropy_detail->lambda_max;
      g["trace"] = report.anisotropy_detail->trace;
      g["power_iterations"] = report.anisotropy_detail->iterations;
    }
    j["geometry"] = g;
  }
  if (!report.lsh_stats.empty()) {
    json arr = json::array();
    for (const LshBucketStats& s : report.lsh_stats) {
      arr.push_back({{"nbits", s.nbits},
                     {"unique_buckets", s.unique_buckets},
                     {"entropy_bits", s.entropy_bits},
                     {"max_bucket_fraction", s.max_bucket_fraction}});
    }
    j["lsh_buckets"] = arr;
  }
  if (!report.retrieval.empty()) {
    json arr = json::array();
    for (const RetrievalReport& r : report.retrieval) {
      json e;
      e["index"] = to_string(r.index_kind);
      e["cutoff"] = r.cutoff;
      e["p_at_k"] = mean_std_json(r.p_at_k);
      e["r_at_k"] = mean_std_json(r.r_at_k);
      e["map_at_k"] = mean_std_json(r.map_at_k);
      e["mrr"] = mean_std_json(r.mrr);
      e["n_queries"] = r.n_queries;
      e["n_skipped"] = r.n_skipped;
      e["config"] = r.config;
      arr.push_back(e);
    }
    j["retrieval"] = arr;
  }
  if (!report.clustering.empty()) {
    json arr = json::array();
    for (const ClusterSummary& c : report.clustering) {
      arr.push_back({{"n_clusters", c.n_clusters},
                     {"nmi", c.nmi},
                     {"ari", c.ari},
                     {"eps", c.eps},
                     {"min_pts", c.min_pts},
                     {"metric", to_string(c.metric)},
                     {"n_noise", c.n_noise},
                     {"noise_policy", c.noise_policy}});
    }
    j["clustering"] = arr;
  }
  if (report.purity) {
    j["purity"] = {{"k_values", report.purity->k_values},
                   {"purity", report.purity->purity},
                   {"metric", to_string(report.purity->metric)},
                   {"n_queries", report.purity->n_queries}};
  }
  if (!report.timings_ms.empty()) j["timings_ms"] = report.timings_ms;
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  try {
    const json& c = j.at("corpus");
    r.corpus_name = c.at("name").get<std::string>();
    r.corpus_path = c.at("path").get<std::string>();
    r.corpus_hash = c.at("hash").get<std::string>();
    r.n = c.at("n").get<std::size_t>();
    r.dim = c.at("dim").get<std::size_t>();
    r.normalization = c.at("normalization").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.tool_version = j.at("tool_version").get<std::string>();

    if (j.contains("geometry")) {
      const json& g = j["geometry"];
      GeometryReport geo;
      geo.anisotropy = g.at("anisotropy").get<double>();
      geo.skewness = g.at("skewness").get<double>();
      geo.worst_case_hub = g.at("worst_case_hub").get<std::int64_t>();
      geo.hub_k = g.at("hub_k").get<std::size_t>();
      r.geometry = geo;
      if (g.contains("lambda_max")) {
        AnisotropyResult a;
        a.ratio = geo.anisotropy;
        a.lambda_max = g["lambda_max"].get<double>();
        a.trace = g["trace"].get<double>();
        a.iterations = g["power_iterations"].get<std::size_t>();
        r.anisotropy_detail = a;
      }
    }
    for (const json& s : j.value("lsh_buckets", json::array())) {
      LshBucketStats stats;
      stats.nbits = s.at("nbits").get<std::size_t>();
      stats.unique_buckets = s.at("unique_buckets").get<std::size_t>();
      stats.entropy_bits = s.at("entropy_bits").get<double>();
      stats.max_bucket_fraction = s.at("max_bucket_fraction").get<double>();
      r.lsh_stats.push_back(stats);
    }
    for (const json& e : j.value("retrieval", json::array())) {
      RetrievalReport rep;
      rep.index_kind = index_kind_from_string(e.at("index").get<std::string>());
      rep.cutoff = e.at("cutoff").get<std::size_t>();
      rep.p_at_k = mean_std_from(e.at("p_at_k"));
      rep.r_at_k = mean_std_from(e.at("r_at_k"));
      rep.map_at_k = mean_std_from(e.at("map_at_k"));
      rep.mrr = mean_std_from(e.at("mrr"));
      rep.n_queries = e.at("n_queries").get<std::size_t>();
      rep.n_skipped = e.at("n_skipped").get<std::size_t>();
      rep.config =
          e.at("config").get<std::map<std::string, std::string>>();
      r.retrieval.push_back(rep);
    }
    for (const json& c2 : j.value("clustering", json::array())) {
      ClusterSummary s;
      s.n_clusters = c2.at("n_clusters").get<std::size_t>();
      s.nmi = c2.at("nmi").get<double>();
      s.ari = c2.at("ari").get<double>();
      s.eps = c2.at("eps").get<double>();
      s.min_pts = c2.at("min_pts").get<std::size_t>();
      s.metric = metric_from_string(c2.at("metric").get<std::string>());
      s.n_noise = c2.at("n_noise").get<std::size_t>();
      s.noise_policy = c2.at("noise_policy").get<std::string>();
      r.clustering.push_back(s);
    }
    if (j.contains("purity")) {
      const json& p = j["purity"];
      PurityCurve curve;
      curve.k_values = p.at("k_values").get<std::vector<std::size_t>>();
      curve.purity = p.at("purity").get<std::vector<double>>();
      curve.metric = metric_from_string(p.at("metric").get<std::string>());
      curve.n_queries = p.at("n_queries").get<std::size_t>();
      r.purity = curve;
    }
    if (j.contains("timings_ms")) {
      r.timings_ms = j["timings_ms"].get<std::map<std::string, double>>();
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("report: missing or mistyped field: ") +
                     e.what());
  }
  return r;
}

void write_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write report file: " + path);
  out << report_to_json(report).dump(2) << '\n';
  if (!out) throw ComputeError("failed writing report file: " + path);
}

RunReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open report file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("report file " + path + ": invalid JSON: " + e.what());
  }
  return report_from_json(j);
}

std::string render_retrieval_table(const std::vector<RetrievalReport>& rows) {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-8s %11s %11s %11s %11s\n", "index",
                "P@K", "R@K", "mAP@K", "MRR");
  out << buf;
  for (const RetrievalReport& r : rows) {
    const auto cell = [](const MeanStd& m) {
      char c[32];
      std::snprintf(c, sizeof(c), "%.0f/%.0f", m.mean * 100.0, m.std * 100.0);
      return std::string(c);
    };
    std::snprintf(buf, sizeof(buf), "%-8s %11s %11s %11s %11s\n",
                  to_string(r.index_kind).c_str(), cell(r.p_at_k).c_str(),
                  cell(r.r_at_k).c_str(), cell(r.map_at_k).c_str(),
                  cell(r.mrr).c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace latentprobe
