#pragma once

#include <cstdint>
#include <string>

#include "latentprobe/embedding_set.hpp"

namespace latentprobe {

enum class SynthKind { isotropic_gaussian, cone, labeled_mixture };

std::string to_string(SynthKind k);
SynthKind synth_kind_from_string(const std::string& s);

// Seeded generator spec. Same spec + seed reproduces the corpus
// bit-for-bit (coordinates are rounded through the f32 storage precision
// at generation so saved and in-memory copies agree exactly).
struct SynthSpec {
  SynthKind kind = SynthKind::isotropic_gaussian;
  std::size_t n = 1000;
  std::size_t d = 16;
  std::uint64_t seed = 0;
  // cone: rows are normalize(kappa * mu + g) around a seeded unit
  // direction mu; kappa 0 is uniform on the sphere.
  double concentration = 0.0;
  // labeled_mixture: class means sit on scaled coordinate axes at pairwise
  // distance `separation` (requires d >= n_classes); labels round-robin.
  std::size_t n_classes = 4;
  double cluster_std = 1.0;
  double separation = 10.0;
};

EmbeddingSet generate(const SynthSpec& spec);

}  // namespace latentprobe
