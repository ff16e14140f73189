// Release gate: every shipping criterion in one binary, one PASS/FAIL line
// each. Returns nonzero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latentprobe/ann/hnsw.hpp"
#include "latentprobe/ann/ivf.hpp"
#include "latentprobe/ann/lsh.hpp"
#include "latentprobe/clustering.hpp"
#include "latentprobe/embedding_set.hpp"
#include "latentprobe/exact_knn.hpp"
#include "latentprobe/fixture.hpp"
#include "latentprobe/geometry.hpp"
#include "latentprobe/purity.hpp"
#include "latentprobe/retrieval.hpp"
#include "latentprobe/stats.hpp"
#include "latentprobe/synth.hpp"
#include "support/test_util.hpp"

namespace lp = latentprobe;
namespace fs = std::filesystem;

namespace {

// Accumulates every violated expectation inside one criterion.
struct Expect {
  std::vector<std::string> failures;
  std::string detail;

  bool ok() const { return failures.empty(); }
  void is_true(bool cond, const std::string& label) {
    if (!cond) failures.push_back(label);
  }
  void near(double got, double want, double tol, const std::string& label) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s: got %.6f, want %.6f +/- %g",
                    label.c_str(), got, want, tol);
      failures.push_back(buf);
    }
  }
  void exact(double got, double want, const std::string& label) {
    if (got != want) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s: got %.17g, want %.17g exactly",
                    label.c_str(), got, want);
      failures.push_back(buf);
    }
  }
};

lp::EmbeddingSet mixture(std::size_t n, std::size_t d, std::size_t classes,
                         double cluster_std, double separation,
                         std::uint64_t seed) {
  lp::SynthSpec spec;
  spec.kind = lp::SynthKind::labeled_mixture;
  spec.n = n;
  spec.d = d;
  spec.seed = seed;
  spec.n_classes = classes;
  spec.cluster_std = cluster_std;
  spec.separation = separation;
  return lp::generate(spec);
}

lp::EmbeddingSet isotropic(std::size_t n, std::size_t d, std::uint64_t seed) {
  lp::SynthSpec spec;
  spec.n = n;
  spec.d = d;
  spec.seed = seed;
  return lp::generate(spec);
}

lp::EmbeddingSet cone(std::size_t n, std::size_t d, double kappa,
                      std::uint64_t seed) {
  lp::SynthSpec spec;
  spec.kind = lp::SynthKind::cone;
  spec.n = n;
  spec.d = d;
  spec.seed = seed;
  spec.concentration = kappa;
  return lp::generate(spec);
}

// ------------------------------------------------------------ criterion 1

void bucket_table_correlations(Expect& e) {
  const auto methods = lp::builtin_fixture().datasets.at("imagenet1k");
  const auto aniso = lp::fixture_column(methods, "anisotropy");
  const auto cell = [&](const char* column) {
    return lp::spearman(aniso, lp::fixture_column(methods, column));
  };
  const lp::CorrelationResult unique = cell("unique_buckets");
  e.near(unique.rho, -0.90, 0.02, "anisotropy~unique_buckets rho");
  e.near(unique.p_value, 0.001, 0.0005, "anisotropy~unique_buckets p");
  const lp::CorrelationResult entropy = cell("entropy_bits");
  e.near(entropy.rho, -0.90, 0.02, "anisotropy~entropy_bits rho");
  const lp::CorrelationResult frac = cell("max_bucket_pct");
  e.near(frac.rho, 0.67, 0.05, "anisotropy~max_bucket_pct rho");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "rho %.3f / %.3f / %+.3f, p %.5f",
                unique.rho, entropy.rho, frac.rho, unique.p_value);
  e.detail = buf;
}

// ------------------------------------------------------------ criterion 2

void retrieval_table_correlations(Expect& e) {
  const auto methods = lp::builtin_fixture().datasets.at("imagenet1k");
  const auto cell = [&](const char* prop, const char* metric) {
    return lp::spearman(lp::fixture_column(methods, prop),
                        lp::fixture_column(methods, metric))
        .rho;
  };
  const double skew_lsh = cell("skewness", "lsh_p_at_10");
  const double skew_ivf = cell("skewness", "ivf_p_at_10");
  const double hub_lsh = cell("max_hub", "lsh_p_at_10");
  e.near(skew_lsh, -0.80, 0.05, "skewness~lsh_p_at_10 rho");
  e.near(skew_ivf, -0.67, 0.07, "skewness~ivf_p_at_10 rho");
  e.near(hub_lsh, -0.74, 0.05, "max_hub~lsh_p_at_10 rho");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "rho %.3f / %.3f / %.3f", skew_lsh,
                skew_ivf, hub_lsh);
  e.detail = buf;
}

// ------------------------------------------------------------ criterion 3

void entropy_ceiling(Expect& e) {
  const double ceiling = 15.61;  // log2(50000) rounded up at 2 decimals
  double mean_entropy = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const lp::EmbeddingSet corpus = isotropic(50000, 128, seed);
    lp::LshConfig cfg;
    cfg.nbits = 16;
    cfg.seed = seed;
    const lp::LshBucketStats stats =
        lp::lsh_bucket_stats(lp::LshIndex(corpus, cfg));
    e.is_true(stats.entropy_bits <= ceiling,
              "seed " + std::to_string(seed) + " entropy above ceiling");
    mean_entropy += stats.entropy_bits;
  }
  mean_entropy /= 5.0;
  e.is_true(mean_entropy >= 14.5, "isotropic mean entropy below 14.5 bits");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "5-seed mean %.3f bits (ceiling %.2f)",
                mean_entropy, ceiling);
  e.detail = buf;
}

// ------------------------------------------------------------ criterion 4

std::uint32_t slow_popcount(std::uint64_t w) {
  std::uint32_t c = 0;
  while (w) {
    c += static_cast<std::uint32_t>(w & 1u);
    w >>= 1;
  }
  return c;
}

// Classic density clustering, written fresh against the textbook pseudocode.
std::vector<std::int32_t> reference_dbscan(const lp::EmbeddingSet& e,
                                           double eps, std::size_t min_pts) {
  const std::size_t n = e.size();
  const auto query = [&](std::size_t p) {
    std::vector<std::size_t> hits;
    for (std::size_t j = 0; j < n; ++j) {
      if (lptest::reference_distance(e.row(p), e.row(j),
                                     lp::Metric::euclidean) <= eps) {
        hits.push_back(j);
      }
    }
    return hits;
  };
  constexpr std::int32_t kNone = -9, kNoise = -1;
  std::vector<std::int32_t> label(n, kNone);
  std::int32_t next = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (label[p] != kNone) continue;
    const auto seed_hits = query(p);
    if (seed_hits.size() < min_pts) {
      label[p] = kNoise;
      continue;
    }
    const std::int32_t c = next++;
    label[p] = c;
    std::deque<std::size_t> frontier(seed_hits.begin(), seed_hits.end());
    while (!frontier.empty()) {
      const std::size_t q = frontier.front();
      frontier.pop_front();
      if (label[q] == kNoise) label[q] = c;
      if (label[q] != kNone) continue;
      label[q] = c;
      const auto reach = query(q);
      if (reach.size() >= min_pts) {
        frontier.insert(frontier.end(), reach.begin(), reach.end());
      }
    }
  }
  // Same canonical naming convention: order clusters by smallest member.
  std::vector<std::size_t> smallest(static_cast<std::size_t>(next), n);
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] >= 0) {
      auto& s = smallest[static_cast<std::size_t>(label[i])];
      s = std::min(s, i);
    }
  }
  std::vector<std::int32_t> order(static_cast<std::size_t>(next));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    return smallest[static_cast<std::size_t>(a)] <
           smallest[static_cast<std::size_t>(b)];
  });
  std::vector<std::int32_t> remap(static_cast<std::size_t>(next));
  for (std::int32_t r = 0; r < next; ++r) {
    remap[static_cast<std::size_t>(order[r])] = r;
  }
  for (auto& l : label) {
    if (l >= 0) l = remap[static_cast<std::size_t>(l)];
  }
  return label;
}

void oracle_equivalence(Expect& e) {
  // (a) one-cell inverted file degenerates to the exhaustive scan
  {
    const lp::EmbeddingSet corpus = mixture(1000, 16, 4, 1.0, 10.0, 21);
    lp::IvfConfig cfg;
    cfg.nlist = 1;
    cfg.nprobe = 1;
    const lp::IvfIndex index(corpus, cfg);
    const lp::NeighborTable oracle =
        lp::exact_knn(corpus, 10, lp::Metric::euclidean, false);
    bool all_match = true;
    for (std::size_t q = 0; q < corpus.size() && all_match; ++q) {
      const auto hits = index.search(corpus.row(q), 10);
      const auto want_ids = oracle.row_ids(q);
      const auto want_dist = oracle.row_distances(q);
      if (hits.size() != want_ids.size()) all_match = false;
      for (std::size_t r = 0; r < hits.size() && all_match; ++r) {
        if (hits[r].id != want_ids[r] || hits[r].score != want_dist[r]) {
          all_match = false;
        }
      }
    }
    e.is_true(all_match, "ivf nlist=1 deviates from the exhaustive scan");
  }
  // (b) small-graph search is exhaustive: recall@10 of 1.0
  {
    lp::EmbeddingSet corpus = lptest::reference_gaussian_corpus(30, 8, 4, 3);
    corpus = lp::normalize(corpus, lp::NormalizationMode::l2_rows);
    lp::HnswConfig cfg;
    cfg.m = 16;
    const lp::HnswIndex index(corpus, cfg);
    const auto oracle =
        lptest::quadratic_knn(corpus, 10, lp::Metric::inner_product_desc,
                              false);
    std::size_t overlap = 0;
    for (std::size_t q = 0; q < corpus.size(); ++q) {
      const auto hits = index.search(corpus.row(q), 10);
      for (const lp::SearchHit& h : hits) {
        for (const auto& [score, id] : oracle[q]) {
          if (id == h.id) {
            ++overlap;
            break;
          }
        }
      }
    }
    const double recall =
        static_cast<double>(overlap) / (30.0 * 10.0);
    e.exact(recall, 1.0, "hnsw recall@10 on a 30-item corpus");
  }
  // (c) hash ranking equals a straight Hamming scan over the stored codes
  {
    const lp::EmbeddingSet corpus = mixture(1500, 16, 4, 1.0, 10.0, 9);
    lp::LshConfig cfg;
    cfg.nbits = 96;
    cfg.seed = 5;
    const lp::LshIndex index(corpus, cfg);
    bool all_match = true;
    for (std::size_t q = 0; q < corpus.size() && all_match; ++q) {
      const std::vector<std::uint64_t> qcode = index.encode(corpus.row(q));
      std::vector<std::pair<double, std::uint32_t>> ranked;
      for (std::size_t j = 0; j < corpus.size(); ++j) {
        const auto code = index.code(j);
        std::uint32_t dist = 0;
        for (std::size_t w = 0; w < code.size(); ++w) {
          dist += slow_popcount(code[w] ^ qcode[w]);
        }
        ranked.emplace_back(static_cast<double>(dist),
                            static_cast<std::uint32_t>(j));
      }
      std::sort(ranked.begin(), ranked.end());
      const auto hits = index.search(corpus.row(q), 10);
      if (hits.size() != 10) all_match = false;
      for (std::size_t r = 0; r < hits.size() && all_match; ++r) {
        if (hits[r].id != ranked[r].second ||
            hits[r].score != ranked[r].first) {
          all_match = false;
        }
      }
    }
    e.is_true(all_match, "lsh ranking deviates from the Hamming scan");
  }
  // (d) density clustering equals the quadratic reference after canonical
  // renumbering, so equality is exact rather than merely up to relabeling
  {
    lp::EmbeddingSet corpus = mixture(2000, 8, 4, 1.2, 6.0, 31);
    corpus = lp::normalize(corpus,
                           lp::NormalizationMode::unit_hypersphere_scale);
    for (double eps : {0.05, 0.15}) {
      const lp::ClusterResult got =
          lp::dbscan(corpus, eps, 5, lp::Metric::euclidean);
      const auto want = reference_dbscan(corpus, eps, 5);
      e.is_true(got.assignments == want,
                "dbscan deviates from the reference at eps " +
                    std::to_string(eps));
    }
  }
  e.detail = "ivf/hnsw/lsh/dbscan all equal their oracles";
}

// ------------------------------------------------------------ criterion 5

void anisotropy_calibration(Expect& e) {
  const double iso = lp::anisotropy(isotropic(10000, 16, 1));
  e.near(iso, 0.0625, 0.01, "isotropic 16-d anisotropy");

  double prev_aniso = -1.0, prev_entropy = 1e9;
  std::string trend;
  for (double kappa : {0.0, 2.0, 8.0}) {
    double mean_aniso = 0.0, mean_entropy = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const lp::EmbeddingSet corpus = cone(3000, 16, kappa, seed);
      mean_aniso += lp::anisotropy(corpus);
      lp::LshConfig cfg;
      cfg.nbits = 16;
      cfg.seed = seed;
      mean_entropy +=
          lp::lsh_bucket_stats(lp::LshIndex(corpus, cfg)).entropy_bits;
    }
    mean_aniso /= 5.0;
    mean_entropy /= 5.0;
    e.is_true(mean_aniso > prev_aniso,
              "anisotropy not increasing at kappa " + std::to_string(kappa));
    e.is_true(mean_entropy < prev_entropy,
              "entropy not decreasing at kappa " + std::to_string(kappa));
    prev_aniso = mean_aniso;
    prev_entropy = mean_entropy;
    char buf[48];
    std::snprintf(buf, sizeof(buf), " k%.0f:%.3f/%.2fb", kappa, mean_aniso,
                  mean_entropy);
    trend += buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "iso %.4f;", iso);
  e.detail = buf + trend;
}

// ------------------------------------------------------------ criterion 6

void metric_hand_checks(Expect& e) {
  // Twelve points on a line: ids 0-3 (class 0) at 0..3, ids 4-11 (class 1)
  // at 10..17. Every ranking below is enumerable with pencil and paper;
  // the id-4 query exercises the distance tie at 7 between ids 3 and 11,
  // which must break toward the smaller id.
  const lp::EmbeddingSet corpus = lptest::make_corpus(
      1, {0, 1, 2, 3, 10, 11, 12, 13, 14, 15, 16, 17},
      {0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1});
  const lp::FlatExactIndex index(corpus, lp::Metric::euclidean);
  const lp::RetrievalReport got = lp::evaluate_index(corpus, index, 10, true);

  // Per-query enumeration: rank all other points by (distance, id).
  std::vector<double> ps, rs, aps, rrs;
  for (std::size_t q = 0; q < 12; ++q) {
    std::vector<std::pair<double, std::uint32_t>> order;
    for (std::uint32_t j = 0; j < 12; ++j) {
      if (j == q) continue;
      order.emplace_back(std::abs(corpus.vectors[j] - corpus.vectors[q]), j);
    }
    std::sort(order.begin(), order.end());
    std::size_t relevant_total = 0;
    for (std::size_t j = 0; j < 12; ++j) {
      if (j != q && corpus.labels[j] == corpus.labels[q]) ++relevant_total;
    }
    std::size_t hits = 0;
    double ap_sum = 0.0, rr = 0.0;
    for (std::size_t rank = 1; rank <= 10; ++rank) {
      if (corpus.labels[order[rank - 1].second] != corpus.labels[q]) continue;
      ++hits;
      ap_sum += static_cast<double>(hits) / static_cast<double>(rank);
      if (rr == 0.0) rr = 1.0 / static_cast<double>(rank);
    }
    ps.push_back(static_cast<double>(hits) / 10.0);
    rs.push_back(static_cast<double>(hits) /
                 static_cast<double>(relevant_total));
    aps.push_back(ap_sum /
                  static_cast<double>(std::min<std::size_t>(relevant_total,
                                                            10)));
    rrs.push_back(rr);
  }
  // Spot values worked out by hand.
  e.exact(ps[0], 0.3, "query 0 precision");
  e.exact(rs[0], 1.0, "query 0 recall");
  e.exact(aps[0], 1.0, "query 0 average precision");
  e.exact(aps[4], 6.875 / 7.0, "query 4 average precision (tie at rank 7)");
  e.exact(rrs[4], 1.0, "query 4 reciprocal rank");

  const auto mean_std = [](const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) /
                        static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::pair<double, double>(
        mean, std::sqrt(acc / static_cast<double>(v.size() - 1)));
  };
  const auto [pm, psd] = mean_std(ps);
  const auto [rm, rsd] = mean_std(rs);
  const auto [am, asd] = mean_std(aps);
  const auto [mm, msd] = mean_std(rrs);
  e.near(got.p_at_k.mean, pm, 1e-12, "P@10 mean");
  e.near(got.p_at_k.std, psd, 1e-12, "P@10 std");
  e.near(got.r_at_k.mean, rm, 1e-12, "R@10 mean");
  e.near(got.r_at_k.std, rsd, 1e-12, "R@10 std");
  e.near(got.map_at_k.mean, am, 1e-12, "mAP@10 mean");
  e.near(got.map_at_k.std, asd, 1e-12, "mAP@10 std");
  e.near(got.mrr.mean, mm, 1e-12, "MRR mean");
  e.near(got.mrr.std, msd, 1e-12, "MRR std");

  // Worked example: relevant items at ranks 1 and 3, ten relevant total.
  const std::vector<std::uint32_t> retrieved{100, 900, 101, 901, 902,
                                             903, 904, 905, 906, 907};
  std::vector<std::uint32_t> relevant(10);
  std::iota(relevant.begin(), relevant.end(), 100u);
  const double ap = lp::average_precision_at_k(retrieved, relevant, 10);
  e.near(ap, 1.0 / 6.0, 1e-9, "worked AP example (prints as 0.1667)");

  char buf[96];
  std::snprintf(buf, sizeof(buf), "P %.4f mAP %.4f, worked AP %.4f",
                got.p_at_k.mean, got.map_at_k.mean, ap);
  e.detail = buf;
}

// ------------------------------------------------------------ criterion 7

void purity_contracts(Expect& e) {
  // Widely separated 50-per-class mixture: pure below the cluster size.
  const lp::EmbeddingSet separated = mixture(200, 8, 4, 0.3, 10.0, 19);
  const lp::PurityCurve curve = lp::local_purity_curve(separated, 49);
  bool all_one = true;
  for (double p : curve.purity) {
    if (p != 1.0) all_one = false;
  }
  e.is_true(all_one, "separated mixture not pure below k=50");

  // Labels shuffled into a permutation null: the curve sits at the prior.
  lp::EmbeddingSet null_corpus = mixture(2000, 8, 4, 0.3, 10.0, 23);
  std::mt19937_64 gen(99);
  std::shuffle(null_corpus.labels.begin(), null_corpus.labels.end(), gen);
  const lp::PurityCurve null_curve = lp::local_purity_curve(null_corpus, 50);
  double worst = 0.0;
  for (double p : null_curve.purity) {
    worst = std::max(worst, std::abs(p - 0.25));
  }
  e.is_true(worst <= 0.05, "null curve strays from the 0.25 prior");

  // k=1 purity and nearest-neighbor accuracy count the same indicator.
  const lp::EmbeddingSet noisy = mixture(500, 8, 4, 3.0, 8.0, 7);
  const double p1 = lp::local_purity_curve(noisy, 3).purity[0];
  const double nn = lp::knn_classify_accuracy(noisy, 1).top1;
  e.exact(p1, nn, "purity(1) vs 1-NN accuracy");

  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "null max drift %.4f, purity(1)=1NN=%.4f", worst, p1);
  e.detail = buf;
}

// ------------------------------------------------------------ criterion 8

void sweep_monotonicity(Expect& e) {
  const std::vector<std::size_t> bit_grid{16, 64, 256, 1024, 4096};
  std::vector<double> means(bit_grid.size(), 0.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const lp::EmbeddingSet corpus = mixture(1000, 16, 4, 1.0, 10.0, seed);
    for (std::size_t b = 0; b < bit_grid.size(); ++b) {
      lp::LshConfig cfg;
      cfg.nbits = bit_grid[b];
      cfg.seed = seed;
      const lp::LshIndex index(corpus, cfg);
      means[b] += lp::evaluate_index(corpus, index, 10, true).p_at_k.mean;
    }
  }
  std::string curve;
  for (std::size_t b = 0; b < bit_grid.size(); ++b) {
    means[b] /= 5.0;
    if (b > 0) {
      e.is_true(means[b] >= means[b - 1] - 0.02,
                "P@10 drops from " + std::to_string(bit_grid[b - 1]) +
                    " to " + std::to_string(bit_grid[b]) + " bits");
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%.3f", b ? " -> " : "", means[b]);
    curve += buf;
  }
  e.detail = "5-seed mean P@10: " + curve;
}

// ------------------------------------------------------------ criterion 9

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(LATENTPROBE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void determinism(Expect& e) {
  const fs::path dir =
      fs::temp_directory_path() /
      ("acceptance_rerun_" + std::to_string(getpid()));
  fs::create_directories(dir);
  const std::string stem = (dir / "mix").string();
  e.is_true(run_cli("--seed 13 --out " + stem +
                    " gen --kind labeled_mixture --n 400 --d 8") == 0,
            "gen failed");
  const std::string corpus =
      " --data " + stem + ".f32 --labels " + stem + ".labels";

  const auto analyze = [&](const char* name) {
    const std::string out = (dir / name).string();
    e.is_true(run_cli("--seed 13 --out " + out + " analyze" + corpus) == 0,
              std::string("analyze failed for ") + name);
    nlohmann::json j = nlohmann::json::parse(slurp(dir / name));
    j.erase("timings_ms");  // the only wall-time dependent fields
    return j.dump();
  };
  e.is_true(analyze("a.json") == analyze("b.json"),
            "analyze reruns differ outside timings");

  const auto sweep = [&](const char* name) {
    const std::string out = (dir / name).string();
    e.is_true(run_cli("--seed 13 --out " + out + " lsh-sweep --bits 16 64" +
                      corpus) == 0,
              std::string("lsh-sweep failed for ") + name);
    return slurp(dir / name);
  };
  e.is_true(sweep("a.csv") == sweep("b.csv"), "sweep reruns differ");

  const auto viz = [&](const char* name) {
    const std::string out = (dir / name).string();
    e.is_true(run_cli("--seed 13 --out " + out + " viz" + corpus) == 0,
              std::string("viz failed for ") + name);
    return slurp(dir / name);
  };
  e.is_true(viz("a.svg") == viz("b.svg"), "viz reruns differ");

  fs::remove_all(dir);
  e.detail = "analyze json, sweep csv, viz svg all byte-identical";
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<void(Expect&)> body;
    double budget_s;  // 0 = no stated runtime bound
  };
  const std::vector<Criterion> criteria{
      {1, "bundled-table bucket correlations", bucket_table_correlations,
       1.0},
      {2, "bundled-table retrieval correlations",
       retrieval_table_correlations, 1.0},
      {3, "16-bit entropy ceiling and isotropic floor", entropy_ceiling,
       30.0},
      {4, "index and clustering oracle equivalence", oracle_equivalence,
       60.0},
      {5, "anisotropy calibration and cone monotonicity",
       anisotropy_calibration, 0.0},
      {6, "retrieval metric hand checks", metric_hand_checks, 0.0},
      {7, "purity contracts", purity_contracts, 0.0},
      {8, "hash-size sweep monotonicity", sweep_monotonicity, 0.0},
      {9, "byte-identical reruns", determinism, 0.0},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Expect e;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(e);
    } catch (const std::exception& ex) {
      e.failures.push_back(std::string("exception: ") + ex.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "exceeded the %.0f s budget",
                    c.budget_s);
      e.failures.push_back(buf);
    }
    std::string line = e.ok() ? "[PASS]" : "[FAIL]";
    line += " criterion " + std::to_string(c.number) + ": " + c.name;
    if (e.ok()) {
      if (!e.detail.empty()) line += " (" + e.detail + ")";
    } else {
      ++failures;
      line += " -- ";
      for (std::size_t i = 0; i < e.failures.size(); ++i) {
        if (i) line += "; ";
        line += e.failures[i];
      }
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), " [%.2f s]", secs);
    std::printf("%s%s\n", line.c_str(), buf);
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("all 9 criteria passed\n");
    return 0;
  }
  std::printf("%d of 9 criteria FAILED\n", failures);
  return 1;
}
