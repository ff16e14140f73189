#include "latentprobe/synth.hpp"

#include <cmath>

#include "latentprobe/error.hpp"
#include "latentprobe/metric.hpp"
#include "latentprobe/rng.hpp"

namespace latentprobe {

std::string to_string(SynthKind k) {
  switch (k) {
    case SynthKind::isotropic_gaussian: return "isotropic_gaussian";
    case SynthKind::cone: return "cone";
    case SynthKind::labeled_mixture: return "labeled_mixture";
  }
  return "?";
}

SynthKind synth_kind_from_string(const std::string& s) {
  if (s == "iso" || s == "isotropic_gaussian") return SynthKind::isotropic_gaussian;
  if (s == "cone") return SynthKind::cone;
  if (s == "mixture" || s == "labeled_mixture") return SynthKind::labeled_mixture;
  throw InputError("unknown synthetic kind: " + s);
}

EmbeddingSet generate(const SynthSpec& spec) {
  if (spec.n < 1 || spec.d < 1) throw InputError("synth spec needs n >= 1, d >= 1");
  if (spec.concentration < 0.0) throw InputError("cone concentration must be >= 0");

  EmbeddingSet e;
  e.name = to_string(spec.kind) + "-n" + std::to_string(spec.n) + "-d" +
           std::to_string(spec.d) + "-s" + std::to_string(spec.seed);
  e.dim = spec.d;
  e.vectors.resize(spec.n * spec.d);
  e.labels.assign(spec.n, 0);
  Rng rng(spec.seed);

  switch (spec.kind) {
    case SynthKind::isotropic_gaussian: {
      for (auto& v : e.vectors) v = rng.gaussian();
      break;
    }
    case SynthKind::cone: {
      std::vector<double> mu(spec.d);
      for (auto& v : mu) v = rng.gaussian();
      const double norm = l2_norm(mu);
      for (auto& v : mu) v /= norm;
      for (std::size_t i = 0; i < spec.n; ++i) {
        double* row = e.vectors.data() + i * spec.d;
        double sq = 0.0;
        for (std::size_t j = 0; j < spec.d; ++j) {
          row[j] = spec.concentration * mu[j] + rng.gaussian();
          sq += row[j] * row[j];
        }
        const double rn = std::sqrt(sq);
        if (rn == 0.0) throw ComputeError("degenerate cone sample");
        for (std::size_t j = 0; j < spec.d; ++j) row[j] /= rn;
      }
      break;
    }
    case SynthKind::labeled_mixture: {
      if (spec.n_classes < 1 || spec.n_classes > spec.n) {
        throw InputError("mixture needs 1 <= n_classes <= n");
      }
      if (spec.n_classes > spec.d) {
        throw InputError("mixture places class means on coordinate axes; needs d >= n_classes");
      }
      if (spec.separation <= 0.0) throw InputError("mixture separation must be > 0");
      // Means at scale*e_c are pairwise scale*sqrt(2) apart.
      const double scale = spec.separation / std::sqrt(2.0);
      for (std::size_t i = 0; i < spec.n; ++i) {
        const std::size_t c = i % spec.n_classes;
        e.labels[i] = static_cast<std::int32_t>(c);
        double* row = e.vectors.data() + i * spec.d;
        for (std::size_t j = 0; j < spec.d; ++j) {
          row[j] = spec.cluster_std * rng.gaussian() + (j == c ? scale : 0.0);
        }
      }
      break;
    }
  }
  quantize_to_f32(e);
  e.ids = default_ids(e.size());
  return e;
}

}  // namespace latentprobe
