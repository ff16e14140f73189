#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "latentprobe/ann/hnsw.hpp"
#include "latentprobe/ann/ivf.hpp"
#include "latentprobe/ann/lsh.hpp"
#include "latentprobe/clustering.hpp"
#include "latentprobe/embedding_set.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/fixture.hpp"
#include "latentprobe/geometry.hpp"
#include "latentprobe/purity.hpp"
#include "latentprobe/report.hpp"
#include "latentprobe/retrieval.hpp"
#include "latentprobe/rng.hpp"
#include "latentprobe/stats.hpp"
#include "latentprobe/synth.hpp"
#include "latentprobe/version.hpp"
#include "latentprobe/viz.hpp"

namespace lp = latentprobe;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string normalize = "none";
  bool include_self = false;
  std::string out;
};

struct CorpusOpts {
  std::string data;
  std::string labels;
  std::string format = "raw";
  std::string name;
};

void add_corpus_options(CLI::App* cmd, CorpusOpts& opts) {
  cmd->add_option("--data", opts.data, "Embedding file (raw f32 or CSV)")
      ->required();
  cmd->add_option("--labels", opts.labels,
                  "Labels file, one integer per line (CSV may embed labels "
                  "in its last column instead)");
  cmd->add_option("--format", opts.format, "Input format")
      ->check(CLI::IsMember({"raw", "csv"}))
      ->capture_default_str();
  cmd->add_option("--name", opts.name, "Corpus tag used in reports");
}

lp::StorageFormat parse_format(const std::string& f) {
  return f == "csv" ? lp::StorageFormat::csv : lp::StorageFormat::raw_f32;
}

lp::EmbeddingSet load_corpus(const CorpusOpts& corpus,
                             const GlobalOpts& global) {
  lp::EmbeddingSet e =
      lp::load_embeddings(corpus.data, corpus.labels, parse_format(corpus.format));
  e.name = corpus.name.empty()
               ? std::filesystem::path(corpus.data).stem().string()
               : corpus.name;
  const auto mode = lp::normalization_from_string(global.normalize);
  if (mode != lp::NormalizationMode::none) e = lp::normalize(e, mode);
  e.validate();
  return e;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <typename F>
auto section(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const lp::InputError& e) {
    throw lp::InputError(name + ": " + e.what());
  } catch (const lp::ComputeError& e) {
    throw lp::ComputeError(name + ": " + e.what());
  }
}

lp::RunReport base_report(const lp::EmbeddingSet& e, const CorpusOpts& corpus,
                          const GlobalOpts& global) {
  lp::RunReport report;
  report.corpus_name = e.name;
  report.corpus_path = corpus.data;
  report.corpus_hash = lp::hash_file(corpus.data);
  report.n = e.size();
  report.dim = e.dim;
  report.normalization = global.normalize;
  report.seed = global.seed;
  report.tool_version = lp::kToolVersion;
  return report;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw lp::InputError("cannot write output file: " + path);
  out << content;
  if (!out) throw lp::ComputeError("failed writing output file: " + path);
}

// ---------------------------------------------------------------- ingest

struct IngestOpts {
  CorpusOpts corpus;
};

int cmd_ingest(const IngestOpts& opts, const GlobalOpts& global) {
  lp::EmbeddingSet e = load_corpus(opts.corpus, global);
  const std::string base = global.out.empty() ? "corpus" : global.out;
  lp::save_embeddings(e, base + ".f32", base + ".labels");
  std::cout << "corpus " << e.name << ": n=" << e.size() << " dim=" << e.dim
            << " normalization=" << global.normalize << '\n'
            << "wrote " << base << ".f32 (+.json sidecar), " << base
            << ".labels\n"
            << "hash " << lp::hash_file(base + ".f32") << '\n';
  return 0;
}

// ------------------------------------------------------------------- gen

struct GenOpts {
  std::string kind = "isotropic_gaussian";
  std::size_t n = 1000;
  std::size_t d = 16;
  double kappa = 0.0;
  std::size_t classes = 4;
  double cluster_std = 1.0;
  double separation = 10.0;
};

int cmd_gen(const GenOpts& opts, const GlobalOpts& global) {
  lp::SynthSpec spec;
  spec.kind = lp::synth_kind_from_string(opts.kind);
  spec.n = opts.n;
  spec.d = opts.d;
  spec.seed = global.seed;
  spec.concentration = opts.kappa;
  spec.n_classes = opts.classes;
  spec.cluster_std = opts.cluster_std;
  spec.separation = opts.separation;
  const lp::EmbeddingSet e = lp::generate(spec);
  const std::string base = global.out.empty() ? e.name : global.out;
  lp::save_embeddings(e, base + ".f32", base + ".labels");
  std::cout << "generated " << e.name << ": n=" << e.size()
            << " dim=" << e.dim << '\n'
            << "wrote " << base << ".f32 (+.json sidecar), " << base
            << ".labels\n";
  return 0;
}

// --------------------------------------------------------------- analyze

struct AnalyzeOpts {
  CorpusOpts corpus;
  std::size_t hub_k = 10;
  std::size_t nbits = 16;
  std::size_t purity_kmax = 50;
  double eps_cosine = 0.1;
  double eps_euclidean = 0.4;
  std::size_t min_pts = 5;
  std::string noise_policy = "shared_label";
  bool skip_clustering = false;
};

lp::ClusterSummary run_clustering(const lp::EmbeddingSet& e, double eps,
                                  std::size_t min_pts, lp::Metric metric,
                                  const std::string& noise_policy) {
  const auto policy = noise_policy == "exclude" ? lp::NoisePolicy::exclude
                                                : lp::NoisePolicy::shared_label;
  lp::ClusterResult r = lp::dbscan(e, eps, min_pts, metric);
  lp::score_against_labels(r, e.labels, policy);
  lp::ClusterSummary s;
  s.n_clusters = r.n_clusters;
  s.nmi = r.nmi;
  s.ari = r.ari;
  s.eps = r.eps;
  s.min_pts = r.min_pts;
  s.metric = r.metric;
  s.n_noise = lp::count_noise(r);
  s.noise_policy = noise_policy;
  return s;
}

int cmd_analyze(const AnalyzeOpts& opts, const GlobalOpts& global) {
  const lp::EmbeddingSet e = load_corpus(opts.corpus, global);
  lp::RunReport report = base_report(e, opts.corpus, global);

  {
    Timer t;
    section("analyze[geometry]", [&] {
      const auto detail = lp::anisotropy_full(e, global.seed);
      lp::GeometryReport g =
          lp::geometry_report(e, opts.hub_k, lp::Metric::euclidean, global.seed);
      report.geometry = g;
      report.anisotropy_detail = detail;
      return 0;
    });
    report.timings_ms["geometry"] = t.ms();
  }
  {
    Timer t;
    section("analyze[lsh_buckets]", [&] {
      lp::LshConfig cfg;
      cfg.nbits = opts.nbits;
      cfg.seed = lp::derive_seed(global.seed, 0x15b);
      const lp::LshIndex index(e, cfg);
      report.lsh_stats.push_back(lp::lsh_bucket_stats(index));
      return 0;
    });
    report.timings_ms["lsh_buckets"] = t.ms();
  }
  {
    Timer t;
    section("analyze[purity]", [&] {
      const std::size_t kmax =
          std::min(opts.purity_kmax, e.size() > 1 ? e.size() - 1 : 1);
      report.purity = lp::local_purity_curve(e, kmax, lp::Metric::euclidean);
      return 0;
    });
    report.timings_ms["purity"] = t.ms();
  }
  if (!opts.skip_clustering) {
    Timer t;
    section("analyze[clustering]", [&] {
      report.clustering.push_back(
          run_clustering(e, opts.eps_cosine, opts.min_pts,
                         lp::Metric::cosine_distance, opts.noise_policy));
      // The Euclidean pass runs on a copy rescaled into the unit
      // hypersphere, which that metric's eps is calibrated for.
      const lp::EmbeddingSet scaled =
          lp::normalize(e, lp::NormalizationMode::unit_hypersphere_scale);
      report.clustering.push_back(
          run_clustering(scaled, opts.eps_euclidean, opts.min_pts,
                         lp::Metric::euclidean, opts.noise_policy));
      return 0;
    });
    report.timings_ms["clustering"] = t.ms();
  }

  const std::string out = global.out.empty() ? "report.json" : global.out;
  lp::write_report(report, out);
  std::cout << "analyzed " << e.name << ": n=" << e.size() << " dim=" << e.dim
            << '\n'
            << "anisotropy " << report.geometry->anisotropy << ", skewness "
            << report.geometry->skewness << ", worst hub "
            << report.geometry->worst_case_hub << '\n'
            << "report written to " << out << '\n';
  return 0;
}

// ----------------------------------------------------------------- bench

struct BenchOpts {
  CorpusOpts corpus;
  std::string index = "exact";
  std::size_t k = 10;
  std::size_t nlist = 100;
  std::size_t nprobe = 1;
  std::size_t kmeans_iters = 25;
  std::size_t m = 16;
  std::size_t ef_construction = 40;
  std::size_t ef_search = 16;
  std::size_t nbits = 128;
  bool lsh_center = false;
  std::string save_index;
  std::string load_index;
  bool append = false;
};

std::unique_ptr<lp::AnnIndex> build_index(const lp::EmbeddingSet& e,
                                          const BenchOpts& opts,
                                          const GlobalOpts& global) {
  const lp::IndexKind kind = lp::index_kind_from_string(opts.index);
  switch (kind) {
    case lp::IndexKind::exact:
      return std::make_unique<lp::FlatExactIndex>(e, lp::Metric::euclidean);
    case lp::IndexKind::ivf: {
      lp::IvfConfig cfg;
      cfg.nlist = opts.nlist;
      cfg.nprobe = opts.nprobe;
      cfg.kmeans_iters = opts.kmeans_iters;
      cfg.seed = global.seed;
      return std::make_unique<lp::IvfIndex>(e, cfg);
    }
    case lp::IndexKind::hnsw: {
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (std::abs(lp::l2_norm(e.row(i)) - 1.0) > 1e-4) {
          throw lp::InputError(
              "hnsw requires unit-norm vectors; rerun with --normalize l2");
        }
      }
      lp::HnswConfig cfg;
      cfg.m = opts.m;
      cfg.ef_construction = opts.ef_construction;
      cfg.ef_search = opts.ef_search;
      cfg.seed = global.seed;
      return std::make_unique<lp::HnswIndex>(e, cfg);
    }
    case lp::IndexKind::lsh: {
      lp::LshConfig cfg;
      cfg.nbits = opts.nbits;
      cfg.seed = global.seed;
      cfg.center = opts.lsh_center;
      return std::make_unique<lp::LshIndex>(e, cfg);
    }
  }
  throw lp::InputError("unknown index kind");
}

int cmd_bench(const BenchOpts& opts, const GlobalOpts& global) {
  const lp::EmbeddingSet e = load_corpus(opts.corpus, global);

  Timer build_timer;
  std::unique_ptr<lp::AnnIndex> index;
  if (!opts.load_index.empty()) {
    index = section("bench[load_index]",
                    [&] { return lp::load_index_file(opts.load_index); });
  } else {
    index = section("bench[build]", [&] { return build_index(e, opts, global); });
  }
  const double build_ms = build_timer.ms();
  if (!opts.save_index.empty()) {
    section("bench[save_index]", [&] {
      lp::save_index_file(*index, opts.save_index);
      return 0;
    });
  }

  Timer eval_timer;
  lp::RetrievalReport rr = section("bench[evaluate]", [&] {
    return lp::evaluate_index(e, *index, opts.k, !global.include_self);
  });
  if (index->kind() == lp::IndexKind::hnsw) {
    rr.config["ef_search"] = std::to_string(opts.ef_search);
  }
  const double eval_ms = eval_timer.ms();

  std::cout << "corpus " << e.name << ": n=" << e.size() << " dim=" << e.dim
            << ", index " << lp::to_string(index->kind()) << ", K=" << opts.k
            << " (mean x100 / std x100)\n"
            << lp::render_retrieval_table({rr});

  if (!global.out.empty()) {
    lp::RunReport report;
    const bool reuse = opts.append && std::filesystem::exists(global.out);
    if (reuse) {
      report = lp::read_report(global.out);
    } else {
      report = base_report(e, opts.corpus, global);
    }
    report.retrieval.push_back(rr);
    report.timings_ms["bench_build_" + lp::to_string(index->kind())] =
        build_ms;
    report.timings_ms["bench_eval_" + lp::to_string(index->kind())] = eval_ms;
    lp::write_report(report, global.out);
    std::cout << "report written to " << global.out << '\n';
  }
  return 0;
}

// ------------------------------------------------------------- lsh-sweep

struct SweepOpts {
  CorpusOpts corpus;
  std::vector<std::size_t> bits = {16, 64, 256, 1024, 4096};
  std::size_t k = 10;
};

int cmd_lsh_sweep(const SweepOpts& opts, const GlobalOpts& global) {
  const lp::EmbeddingSet e = load_corpus(opts.corpus, global);
  std::ostringstream csv;
  csv << "nbits,p_at_" << opts.k << '\n';
  for (std::size_t nbits : opts.bits) {
    const auto rr = section("lsh-sweep[" + std::to_string(nbits) + "]", [&] {
      lp::LshConfig cfg;
      cfg.nbits = nbits;
      cfg.seed = global.seed;  // shared base so only nbits varies
      const lp::LshIndex index(e, cfg);
      return lp::evaluate_index(e, index, opts.k, !global.include_self);
    });
    csv << nbits << ',' << rr.p_at_k.mean << '\n';
  }
  if (global.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(global.out, csv.str());
    std::cout << "sweep written to " << global.out << '\n';
  }
  return 0;
}

// --------------------------------------------------------------- cluster

struct ClusterOpts {
  CorpusOpts corpus;
  double eps = 0.1;
  std::size_t min_pts = 5;
  std::string metric = "cosine";
  std::string noise_policy = "shared_label";
  std::string assignments_csv;
};

int cmd_cluster(const ClusterOpts& opts, const GlobalOpts& global) {
  const lp::EmbeddingSet e = load_corpus(opts.corpus, global);
  const lp::Metric metric = opts.metric == "euclidean"
                                ? lp::Metric::euclidean
                                : lp::Metric::cosine_distance;
  const auto policy = opts.noise_policy == "exclude"
                          ? lp::NoisePolicy::exclude
                          : lp::NoisePolicy::shared_label;

  lp::ClusterResult r = section("cluster[dbscan]", [&] {
    return lp::dbscan(e, opts.eps, opts.min_pts, metric);
  });
  section("cluster[score]", [&] {
    lp::score_against_labels(r, e.labels, policy);
    return 0;
  });

  std::cout << "clusters " << r.n_clusters << ", noise " << lp::count_noise(r)
            << ", nmi " << r.nmi << ", ari " << r.ari << " (eps=" << r.eps
            << ", min_pts=" << r.min_pts << ", metric="
            << lp::to_string(metric) << ")\n";

  if (!opts.assignments_csv.empty()) {
    std::ostringstream csv;
    csv << "id,cluster\n";
    for (std::size_t i = 0; i < r.assignments.size(); ++i)
      csv << e.ids[i] << ',' << r.assignments[i] << '\n';
    write_text_file(opts.assignments_csv, csv.str());
  }
  if (!global.out.empty()) {
    lp::RunReport report = base_report(e, opts.corpus, global);
    lp::ClusterSummary s;
    s.n_clusters = r.n_clusters;
    s.nmi = r.nmi;
    s.ari = r.ari;
    s.eps = r.eps;
    s.min_pts = r.min_pts;
    s.metric = metric;
    s.n_noise = lp::count_noise(r);
    s.noise_policy = opts.noise_policy;
    report.clustering.push_back(s);
    lp::write_report(report, global.out);
    std::cout << "report written to " << global.out << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- purity

struct PurityOpts {
  CorpusOpts corpus;
  std::size_t k_max = 50;
  std::string metric = "euclidean";
};

int cmd_purity(const PurityOpts& opts, const GlobalOpts& global) {
  const lp::EmbeddingSet e = load_corpus(opts.corpus, global);
  const lp::Metric metric = opts.metric == "cosine"
                                ? lp::Metric::cosine_distance
                                : lp::Metric::euclidean;
  const lp::PurityCurve curve = section("purity[curve]", [&] {
    return lp::local_purity_curve(e, opts.k_max, metric);
  });
  std::ostringstream csv;
  lp::write_csv(curve, csv);
  if (global.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(global.out, csv.str());
    std::cout << "purity curve written to " << global.out << '\n';
  }
  return 0;
}

// ------------------------------------------------------------- correlate

struct CorrelateOpts {
  bool paper_fixture = false;
  std::string fixture_path;
  std::string dataset = "imagenet1k";
  std::vector<std::string> reports;
  std::string p_method = "t";
};

lp::CorrelationTable correlate_fixture(const CorrelateOpts& opts,
                                       lp::PValueMethod method) {
  const lp::Fixture fixture = opts.fixture_path.empty()
                                  ? lp::builtin_fixture()
                                  : lp::load_fixture_file(opts.fixture_path);
  auto it = fixture.datasets.find(opts.dataset);
  if (it == fixture.datasets.end()) {
    throw lp::InputError("fixture has no dataset '" + opts.dataset + "'");
  }
  const auto& methods = it->second;
  if (methods.size() < 3) {
    throw lp::InputError("correlate: n < 3 (only " +
                         std::to_string(methods.size()) + " methods)");
  }

  std::vector<lp::NamedVector> properties;
  for (const char* p : {"anisotropy", "skewness", "max_hub"}) {
    properties.emplace_back(p, lp::fixture_column(methods, p));
  }
  std::vector<lp::NamedVector> metrics;
  for (const char* m : {"unique_buckets", "entropy_bits", "max_bucket_pct"}) {
    bool available = true;
    for (const auto& method_row : methods) {
      if (!method_row.unique_buckets) available = false;
    }
    if (available) metrics.emplace_back(m, lp::fixture_column(methods, m));
  }
  for (const char* idx : {"ivf", "hnsw", "lsh"}) {
    for (const char* m : {"p_at_10", "r_at_10", "map_at_10", "mrr"}) {
      const std::string column = std::string(idx) + "_" + m;
      metrics.emplace_back(column, lp::fixture_column(methods, column));
    }
  }
  return lp::correlation_matrix(properties, metrics, method);
}

lp::CorrelationTable correlate_reports(const CorrelateOpts& opts,
                                       lp::PValueMethod method) {
  if (opts.reports.size() < 3) {
    throw lp::InputError("correlate: n < 3 (need at least 3 reports, got " +
                         std::to_string(opts.reports.size()) + ")");
  }
  std::vector<lp::RunReport> runs;
  for (const std::string& path : opts.reports) {
    runs.push_back(lp::read_report(path));
  }

  std::vector<lp::NamedVector> properties = {
      {"anisotropy", {}}, {"skewness", {}}, {"max_hub", {}}};
  for (const lp::RunReport& r : runs) {
    if (!r.geometry) {
      throw lp::InputError("report for corpus '" + r.corpus_name +
                           "' has no geometry section");
    }
    properties[0].second.push_back(r.geometry->anisotropy);
    properties[1].second.push_back(r.geometry->skewness);
    properties[2].second.push_back(
        static_cast<double>(r.geometry->worst_case_hub));
  }

  std::vector<lp::NamedVector> metrics;
  const bool have_buckets = std::all_of(
      runs.begin(), runs.end(),
      [](const lp::RunReport& r) { return !r.lsh_stats.empty(); });
  if (have_buckets) {
    metrics.push_back({"unique_buckets", {}});
    metrics.push_back({"entropy_bits", {}});
    metrics.push_back({"max_bucket_pct", {}});
    for (const lp::RunReport& r : runs) {
      const lp::LshBucketStats& s = r.lsh_stats.front();
      metrics[0].second.push_back(static_cast<double>(s.unique_buckets));
      metrics[1].second.push_back(s.entropy_bits);
      metrics[2].second.push_back(100.0 * s.max_bucket_fraction);
    }
  }
  for (const char* idx : {"ivf", "hnsw", "lsh", "exact"}) {
    const auto kind = lp::index_kind_from_string(idx);
    const bool everywhere = std::all_of(
        runs.begin(), runs.end(), [&](const lp::RunReport& r) {
          return std::any_of(r.retrieval.begin(), r.retrieval.end(),
                             [&](const lp::RetrievalReport& rr) {
                               return rr.index_kind == kind;
                             });
        });
    if (!everywhere) continue;
    lp::NamedVector p{std::string(idx) + "_p_at_k", {}};
    lp::NamedVector rv{std::string(idx) + "_r_at_k", {}};
    lp::NamedVector ap{std::string(idx) + "_map_at_k", {}};
    lp::NamedVector mrr{std::string(idx) + "_mrr", {}};
    for (const lp::RunReport& r : runs) {
      for (const lp::RetrievalReport& rr : r.retrieval) {
        if (rr.index_kind != kind) continue;
        p.second.push_back(rr.p_at_k.mean);
        rv.second.push_back(rr.r_at_k.mean);
        ap.second.push_back(rr.map_at_k.mean);
        mrr.second.push_back(rr.mrr.mean);
        break;
      }
    }
    metrics.push_back(std::move(p));
    metrics.push_back(std::move(rv));
    metrics.push_back(std::move(ap));
    metrics.push_back(std::move(mrr));
  }
  if (metrics.empty()) {
    throw lp::InputError(
        "correlate: no metric present in every report "
        "(need shared index kinds or bucket statistics)");
  }
  return lp::correlation_matrix(properties, metrics, method);
}

int cmd_correlate(const CorrelateOpts& opts, const GlobalOpts& global) {
  const lp::PValueMethod method = opts.p_method == "exact"
                                      ? lp::PValueMethod::exact_permutation
                                      : lp::PValueMethod::t_approx;
  lp::CorrelationTable table =
      (opts.paper_fixture || !opts.fixture_path.empty())
          ? correlate_fixture(opts, method)
          : correlate_reports(opts, method);

  const std::string text = lp::render_text(table);
  std::cout << text;
  if (!global.out.empty()) {
    nlohmann::json j;
    j["properties"] = table.col_names;
    j["metrics"] = table.row_names;
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t r = 0; r < table.row_names.size(); ++r) {
      for (std::size_t c = 0; c < table.col_names.size(); ++c) {
        const lp::CorrelationResult& cell = table.at(r, c);
        cells.push_back({{"metric", table.row_names[r]},
                         {"property", table.col_names[c]},
                         {"rho", cell.rho},
                         {"p_value", cell.p_value},
                         {"n", cell.n}});
      }
    }
    j["cells"] = cells;
    j["p_method"] = opts.p_method == "exact" ? "exact_permutation" : "t_approx";
    write_text_file(global.out, j.dump(2) + "\n");
    std::cout << "correlations written to " << global.out << '\n';
  }
  return 0;
}

// ------------------------------------------------------------------- viz

struct VizOpts {
  CorpusOpts corpus;
  bool center = false;
  std::vector<std::int32_t> highlight;
  std::string csv_path;
};

int cmd_viz(const VizOpts& opts, const GlobalOpts& global) {
  const lp::EmbeddingSet e = load_corpus(opts.corpus, global);
  const lp::SphereProjection sphere = section("viz[project]", [&] {
    return lp::project_to_sphere(e, global.seed, opts.center);
  });
  if (sphere.n_skipped > 0) {
    std::cerr << "warning: skipped " << sphere.n_skipped
              << " rows whose projection collapsed to zero\n";
  }
  const auto plane =
      section("viz[mollweide]", [&] { return lp::mollweide_all(sphere.points); });

  lp::ScatterOptions sopts;
  sopts.seed = global.seed;
  sopts.highlight_classes = opts.highlight;
  const lp::ScatterResult scatter =
      section("viz[render]", [&] { return lp::render_scatter(plane, sopts); });
  if (scatter.fewer_than_requested) {
    std::cerr << "warning: fewer than 8 classes available; highlighting all "
              << scatter.highlighted_classes.size() << '\n';
  }

  const std::string svg_path = global.out.empty() ? "viz.svg" : global.out;
  std::string csv_path = opts.csv_path;
  if (csv_path.empty()) {
    csv_path = std::filesystem::path(svg_path).replace_extension(".csv");
  }
  write_text_file(svg_path, scatter.svg);
  write_text_file(csv_path, scatter.csv);
  std::cout << "wrote " << svg_path << " and " << csv_path << " ("
            << plane.size() << " points, "
            << scatter.highlighted_classes.size() << " highlighted classes)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retrieval-readiness diagnostics for labeled embedding corpora"};
  app.set_version_flag("--version", std::string(lp::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts global;
  app.add_option("--seed", global.seed, "Base RNG seed")
      ->capture_default_str();
  app.add_option("--normalize", global.normalize,
                 "Normalization applied after load")
      ->check(CLI::IsMember({"none", "l2", "hypersphere"}))
      ->capture_default_str();
  auto* include_flag = app.add_flag("--include-self", global.include_self,
                                    "Keep each query in its own result list");
  app.add_flag("--exclude-self{false}", global.include_self,
               "Drop each query from its own result list (default)")
      ->excludes(include_flag);
  app.add_option("--out", global.out, "Output path (meaning depends on verb)");

  IngestOpts ingest;
  auto* c_ingest = app.add_subcommand(
      "ingest", "Validate a corpus and write it in canonical raw form");
  add_corpus_options(c_ingest, ingest.corpus);

  GenOpts gen;
  auto* c_gen =
      app.add_subcommand("gen", "Generate a seeded synthetic corpus");
  c_gen->add_option("--kind", gen.kind,
                    "isotropic_gaussian, cone, or labeled_mixture")
      ->check(CLI::IsMember({"isotropic_gaussian", "cone", "labeled_mixture"}))
      ->capture_default_str();
  c_gen->add_option("--n", gen.n, "Points")->capture_default_str();
  c_gen->add_option("--d", gen.d, "Dimension")->capture_default_str();
  c_gen->add_option("--kappa", gen.kappa, "Cone concentration")
      ->capture_default_str();
  c_gen->add_option("--classes", gen.classes, "Mixture class count")
      ->capture_default_str();
  c_gen->add_option("--cluster-std", gen.cluster_std,
                    "Mixture within-class spread")
      ->capture_default_str();
  c_gen->add_option("--separation", gen.separation,
                    "Mixture between-mean distance")
      ->capture_default_str();

  AnalyzeOpts analyze;
  auto* c_analyze = app.add_subcommand(
      "analyze", "Geometry, bucket, purity, and clustering sections");
  add_corpus_options(c_analyze, analyze.corpus);
  c_analyze->add_option("--hub-k", analyze.hub_k,
                        "Neighborhood size for occurrence counts")
      ->capture_default_str();
  c_analyze->add_option("--nbits", analyze.nbits,
                        "Hash bits for the bucket section")
      ->capture_default_str();
  c_analyze->add_option("--purity-kmax", analyze.purity_kmax,
                        "Largest neighborhood for the purity curve")
      ->capture_default_str();
  c_analyze->add_option("--eps-cosine", analyze.eps_cosine,
                        "Clustering radius, cosine pass")
      ->capture_default_str();
  c_analyze->add_option("--eps-euclidean", analyze.eps_euclidean,
                        "Clustering radius, euclidean pass")
      ->capture_default_str();
  c_analyze->add_option("--min-pts", analyze.min_pts,
                        "Core point threshold")
      ->capture_default_str();
  c_analyze->add_option("--noise-policy", analyze.noise_policy,
                        "Noise handling when scoring clusters")
      ->check(CLI::IsMember({"shared_label", "exclude"}))
      ->capture_default_str();
  c_analyze->add_flag("--skip-clustering", analyze.skip_clustering,
                      "Skip the quadratic clustering section");

  BenchOpts bench;
  auto* c_bench = app.add_subcommand(
      "bench", "Build one index and evaluate retrieval over all queries");
  add_corpus_options(c_bench, bench.corpus);
  c_bench->add_option("--index", bench.index, "exact, ivf, hnsw, or lsh")
      ->check(CLI::IsMember({"exact", "ivf", "hnsw", "lsh"}))
      ->capture_default_str();
  c_bench->add_option("--k", bench.k, "Ranking cutoff")->capture_default_str();
  c_bench->add_option("--nlist", bench.nlist, "Cells")->capture_default_str();
  c_bench->add_option("--nprobe", bench.nprobe, "Probed cells")
      ->capture_default_str();
  c_bench->add_option("--kmeans-iters", bench.kmeans_iters, "Quantizer sweeps")
      ->capture_default_str();
  c_bench->add_option("--m", bench.m, "Graph degree parameter")
      ->capture_default_str();
  c_bench->add_option("--ef-construction", bench.ef_construction,
                      "Build beam width")
      ->capture_default_str();
  c_bench->add_option("--ef-search", bench.ef_search, "Query beam width")
      ->capture_default_str();
  c_bench->add_option("--nbits", bench.nbits, "Hash bits")
      ->capture_default_str();
  c_bench->add_flag("--center", bench.lsh_center,
                    "Subtract the corpus mean before hashing");
  c_bench->add_option("--save-index", bench.save_index,
                      "Write the built index to this file");
  c_bench->add_option("--load-index", bench.load_index,
                      "Evaluate a previously saved index");
  c_bench->add_flag("--append", bench.append,
                    "Append to an existing report at --out");

  SweepOpts sweep;
  auto* c_sweep = app.add_subcommand(
      "lsh-sweep", "Hash-size sweep: precision at fixed K per bit count");
  add_corpus_options(c_sweep, sweep.corpus);
  c_sweep->add_option("--bits", sweep.bits, "Bit counts to test")
      ->capture_default_str();
  c_sweep->add_option("--k", sweep.k, "Ranking cutoff")->capture_default_str();

  ClusterOpts cluster;
  auto* c_cluster =
      app.add_subcommand("cluster", "Density clustering scored against labels");
  add_corpus_options(c_cluster, cluster.corpus);
  c_cluster->add_option("--eps", cluster.eps, "Neighborhood radius")
      ->capture_default_str();
  c_cluster->add_option("--min-pts", cluster.min_pts, "Core point threshold")
      ->capture_default_str();
  c_cluster->add_option("--metric", cluster.metric, "cosine or euclidean")
      ->check(CLI::IsMember({"cosine", "euclidean"}))
      ->capture_default_str();
  c_cluster->add_option("--noise-policy", cluster.noise_policy,
                        "Noise handling when scoring")
      ->check(CLI::IsMember({"shared_label", "exclude"}))
      ->capture_default_str();
  c_cluster->add_option("--assignments-csv", cluster.assignments_csv,
                        "Also write per-item assignments here");

  PurityOpts purity;
  auto* c_purity = app.add_subcommand(
      "purity", "Neighborhood purity decay curve as CSV");
  add_corpus_options(c_purity, purity.corpus);
  c_purity->add_option("--k-max", purity.k_max, "Largest neighborhood")
      ->capture_default_str();
  c_purity->add_option("--metric", purity.metric, "euclidean or cosine")
      ->check(CLI::IsMember({"euclidean", "cosine"}))
      ->capture_default_str();

  CorrelateOpts correlate;
  auto* c_correlate = app.add_subcommand(
      "correlate",
      "Rank correlations between corpus properties and retrieval metrics");
  c_correlate->add_flag("--paper-fixture", correlate.paper_fixture,
                        "Use the bundled table of published measurements");
  c_correlate->add_option("--fixture", correlate.fixture_path,
                          "External fixture file overriding the bundled one");
  c_correlate->add_option("--dataset", correlate.dataset,
                          "Fixture dataset key")
      ->capture_default_str();
  c_correlate->add_option("--reports", correlate.reports,
                          "Run report files, one per corpus (need >= 3)");
  c_correlate->add_option("--p-method", correlate.p_method,
                          "t (approximation) or exact (permutation, n <= 10)")
      ->check(CLI::IsMember({"t", "exact"}))
      ->capture_default_str();

  VizOpts viz;
  auto* c_viz = app.add_subcommand(
      "viz", "Sphere projection scatter plot (SVG + CSV)");
  add_corpus_options(c_viz, viz.corpus);
  c_viz->add_flag("--center", viz.center,
                  "Subtract the corpus mean before projecting");
  c_viz->add_option("--highlight-classes", viz.highlight,
                    "Class ids to highlight (default: 8 seeded picks)");
  c_viz->add_option("--csv", viz.csv_path,
                    "Coordinates CSV path (default: output with .csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_ingest->parsed()) return cmd_ingest(ingest, global);
    if (c_gen->parsed()) return cmd_gen(gen, global);
    if (c_analyze->parsed()) return cmd_analyze(analyze, global);
    if (c_bench->parsed()) return cmd_bench(bench, global);
    if (c_sweep->parsed()) return cmd_lsh_sweep(sweep, global);
    if (c_cluster->parsed()) return cmd_cluster(cluster, global);
    if (c_purity->parsed()) return cmd_purity(purity, global);
    if (c_correlate->parsed()) return cmd_correlate(correlate, global);
    if (c_viz->parsed()) return cmd_viz(viz, global);
  } catch (const lp::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const lp::ComputeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
