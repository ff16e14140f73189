#include "latentprobe/purity.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "latentprobe/embedding_set.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/retrieval.hpp"
#include "latentprobe/synth.hpp"
#include "support/test_util.hpp"

namespace lp = latentprobe;

namespace {

// Prefix-free oracle: an independent neighbor scan per k value.
double oracle_purity_at_k(const lp::EmbeddingSet& e, std::size_t k,
                          lp::Metric metric) {
  const auto table = lptest::quadratic_knn(e, k, metric, true);
  double total = 0.0;
  for (std::size_t q = 0; q < e.size(); ++q) {
    std::size_t same = 0;
    for (const auto& [dist, id] : table[q]) {
      if (e.labels[id] == e.labels[q]) ++same;
    }
    total += static_cast<double>(same) / static_cast<double>(k);
  }
  return total / static_cast<double>(e.size());
}

lp::EmbeddingSet mixture(std::size_t n, std::size_t classes, double std_dev,
                         std::uint64_t seed) {
  lp::SynthSpec spec;
  spec.kind = lp::SynthKind::labeled_mixture;
  spec.n = n;
  spec.d = 8;
  spec.seed = seed;
  spec.n_classes = classes;
  spec.cluster_std = std_dev;
  spec.separation = 10.0;
  return lp::generate(spec);
}

TEST(PurityCurve, matches_a_per_k_oracle) {
  const auto e = lptest::reference_gaussian_corpus(60, 5, 42, 3);
  const lp::PurityCurve curve = lp::local_purity_curve(e, 12);
  ASSERT_EQ(curve.k_values.size(), 12u);
  ASSERT_EQ(curve.purity.size(), 12u);
  for (std::size_t i = 0; i < curve.k_values.size(); ++i) {
    EXPECT_EQ(curve.k_values[i], i + 1);
    EXPECT_NEAR(curve.purity[i],
                oracle_purity_at_k(e, i + 1, lp::Metric::euclidean), 1e-12)
        << "k " << i + 1;
  }
  EXPECT_EQ(curve.n_queries, 60u);
  EXPECT_EQ(curve.metric, lp::Metric::euclidean);
}

TEST(PurityCurve, cosine_metric_matches_the_oracle) {
  const auto e = lptest::reference_gaussian_corpus(50, 6, 8, 4);
  const lp::PurityCurve curve =
      lp::local_purity_curve(e, 7, lp::Metric::cosine_distance);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_NEAR(curve.purity[i],
                oracle_purity_at_k(e, i + 1, lp::Metric::cosine_distance),
                1e-12);
  }
}

TEST(PurityCurve, separated_mixture_is_pure_below_the_cluster_size) {
  // 50 items per class; every neighborhood of size < 50 stays in-class.
  const auto e = mixture(200, 4, 0.3, 19);
  const lp::PurityCurve curve = lp::local_purity_curve(e, 49);
  for (std::size_t i = 0; i < curve.purity.size(); ++i) {
    EXPECT_DOUBLE_EQ(curve.purity[i], 1.0) << "k " << curve.k_values[i];
  }
}

TEST(PurityCurve, shuffled_labels_sit_at_the_class_prior) {
  auto e = mixture(2000, 4, 0.3, 23);
  std::mt19937_64 gen(99);
  std::shuffle(e.labels.begin(), e.labels.end(), gen);
  const lp::PurityCurve curve = lp::local_purity_curve(e, 50);
  for (std::size_t i = 0; i < curve.purity.size(); ++i) {
    EXPECT_NEAR(curve.purity[i], 0.25, 0.05) << "k " << curve.k_values[i];
  }
}

TEST(PurityCurve, first_point_equals_nearest_neighbor_accuracy) {
  // purity(1) and 1-NN classification count the same indicator per query,
  // in the same order, so the two doubles must coincide exactly.
  const auto e = mixture(150, 3, 2.0, 31);
  const lp::PurityCurve curve = lp::local_purity_curve(e, 5);
  const lp::KnnClassifyResult acc = lp::knn_classify_accuracy(e, 1);
  EXPECT_EQ(curve.purity[0], acc.top1);
}

TEST(PurityCurve, k_max_bounds_are_enforced) {
  const auto e = lptest::reference_gaussian_corpus(20, 4, 7, 2);
  EXPECT_THROW(lp::local_purity_curve(e, 0), lp::InputError);
  EXPECT_THROW(lp::local_purity_curve(e, 20), lp::InputError);
  EXPECT_NO_THROW(lp::local_purity_curve(e, 19));
}

TEST(PurityCurve, csv_has_header_and_one_row_per_k) {
  const auto e = lptest::reference_gaussian_corpus(30, 4, 5, 3);
  const lp::PurityCurve curve = lp::local_purity_curve(e, 4);
  std::ostringstream out;
  lp::write_csv(curve, out);
  std::istringstream in(out.str());
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "k,purity");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.find(','), std::to_string(rows).size());
  }
  EXPECT_EQ(rows, 4u);
}

}  // namespace
