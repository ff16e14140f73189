#include "latentprobe/synth.hpp"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "latentprobe/error.hpp"
#include "latentprobe/metric.hpp"

namespace lp = latentprobe;

namespace {

double mean_pairwise_dot(const lp::EmbeddingSet& e) {
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      total += lp::inner_product(e.row(i), e.row(j));
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

TEST(Synth, shapes_ids_and_name) {
  lp::SynthSpec spec;
  spec.n = 100;
  spec.d = 8;
  spec.seed = 5;
  const lp::EmbeddingSet e = lp::generate(spec);
  EXPECT_EQ(e.size(), 100u);
  EXPECT_EQ(e.dim, 8u);
  EXPECT_EQ(e.vectors.size(), 800u);
  EXPECT_EQ(e.labels.size(), 100u);
  ASSERT_EQ(e.ids.size(), 100u);
  for (std::size_t i = 0; i < e.ids.size(); ++i) {
    EXPECT_EQ(e.ids[i], static_cast<std::uint32_t>(i));
  }
  EXPECT_EQ(e.name, "isotropic_gaussian-n100-d8-s5");
}

TEST(Synth, reproducible_and_seed_sensitive) {
  lp::SynthSpec spec;
  spec.kind = lp::SynthKind::labeled_mixture;
  spec.n = 64;
  spec.d = 6;
  spec.seed = 9;
  const lp::EmbeddingSet a = lp::generate(spec);
  const lp::EmbeddingSet b = lp::generate(spec);
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_EQ(a.labels, b.labels);
  spec.seed = 10;
  const lp::EmbeddingSet c = lp::generate(spec);
  EXPECT_NE(a.vectors, c.vectors);
}

TEST(Synth, coordinates_carry_storage_precision) {
  lp::SynthSpec spec;
  spec.kind = lp::SynthKind::cone;
  spec.concentration = 3.0;
  spec.n = 50;
  spec.d = 5;
  const lp::EmbeddingSet e = lp::generate(spec);
  for (double v : e.vectors) {
    EXPECT_EQ(v, static_cast<double>(static_cast<float>(v)));
  }
}

TEST(Synth, isotropic_moments_are_standard) {
  lp::SynthSpec spec;
  spec.n = 5000;
  spec.d = 8;
  spec.seed = 3;
  const lp::EmbeddingSet e = lp::generate(spec);
  for (std::int32_t label : e.labels) EXPECT_EQ(label, 0);
  const double mean =
      std::accumulate(e.vectors.begin(), e.vectors.end(), 0.0) /
      static_cast<double>(e.vectors.size());
  EXPECT_NEAR(mean, 0.0, 0.02);
  double var = 0.0;
  for (double v : e.vectors) var += (v - mean) * (v - mean);
  var /= static_cast<double>(e.vectors.size());
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(Synth, cone_rows_live_on_the_unit_sphere) {
  lp::SynthSpec spec;
  spec.kind = lp::SynthKind::cone;
  spec.concentration = 4.0;
  spec.n = 200;
  spec.d = 12;
  const lp::EmbeddingSet e = lp::generate(spec);
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_NEAR(lp::l2_norm(e.row(i)), 1.0, 1e-6);
  }
}

TEST(Synth, concentration_tightens_the_cone) {
  double previous = -1.0;
  for (double kappa : {0.0, 2.0, 8.0}) {
    lp::SynthSpec spec;
    spec.kind = lp::SynthKind::cone;
    spec.concentration = kappa;
    spec.n = 400;
    spec.d = 16;
    spec.seed = 12;
    const double cohesion = mean_pairwise_dot(lp::generate(spec));
    EXPECT_GT(cohesion, previous) << "kappa " << kappa;
    previous = cohesion;
  }
  // kappa 0 scatters uniformly: average alignment stays near zero.
  lp::SynthSpec flat;
  flat.kind = lp::SynthKind::cone;
  flat.n = 400;
  flat.d = 16;
  flat.seed = 12;
  EXPECT_NEAR(mean_pairwise_dot(lp::generate(flat)), 0.0, 0.02);
}

TEST(Synth, mixture_labels_round_robin_and_means_separate) {
  lp::SynthSpec spec;
  spec.kind = lp::SynthKind::labeled_mixture;
  spec.n = 2000;
  spec.d = 8;
  spec.seed = 8;
  spec.n_classes = 4;
  spec.cluster_std = 1.0;
  spec.separation = 10.0;
  const lp::EmbeddingSet e = lp::generate(spec);
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_EQ(e.labels[i], static_cast<std::int32_t>(i % 4));
  }
  // Empirical class means sit pairwise `separation` apart.
  std::vector<std::vector<double>> means(4, std::vector<double>(8, 0.0));
  std::vector<std::size_t> counts(4, 0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto c = static_cast<std::size_t>(e.labels[i]);
    ++counts[c];
    for (std::size_t j = 0; j < 8; ++j) means[c][j] += e.row(i)[j];
  }
  for (std::size_t c = 0; c < 4; ++c) {
    for (double& v : means[c]) v /= static_cast<double>(counts[c]);
  }
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      EXPECT_NEAR(lp::l2_distance(means[a], means[b]), 10.0, 0.3);
    }
  }
}

TEST(Synth, invalid_specs_are_rejected) {
  lp::SynthSpec spec;
  spec.n = 0;
  EXPECT_THROW(lp::generate(spec), lp::InputError);
  spec.n = 10;
  spec.d = 0;
  EXPECT_THROW(lp::generate(spec), lp::InputError);
  spec.d = 4;
  spec.concentration = -1.0;
  EXPECT_THROW(lp::generate(spec), lp::InputError);
  spec.concentration = 0.0;
  spec.kind = lp::SynthKind::labeled_mixture;
  spec.n_classes = 0;
  EXPECT_THROW(lp::generate(spec), lp::InputError);
  spec.n_classes = 11;  // more classes than points
  EXPECT_THROW(lp::generate(spec), lp::InputError);
  spec.n_classes = 6;  // more classes than dimensions
  EXPECT_THROW(lp::generate(spec), lp::InputError);
  spec.n_classes = 4;
  spec.separation = 0.0;
  EXPECT_THROW(lp::generate(spec), lp::InputError);
}

TEST(Synth, kind_names_round_trip) {
  for (lp::SynthKind k :
       {lp::SynthKind::isotropic_gaussian, lp::SynthKind::cone,
        lp::SynthKind::labeled_mixture}) {
    EXPECT_EQ(lp::synth_kind_from_string(lp::to_string(k)), k);
  }
  EXPECT_EQ(lp::synth_kind_from_string("iso"),
            lp::SynthKind::isotropic_gaussian);
  EXPECT_EQ(lp::synth_kind_from_string("mixture"),
            lp::SynthKind::labeled_mixture);
  EXPECT_THROW(lp::synth_kind_from_string("swirl"), lp::InputError);
}

}  // namespace
