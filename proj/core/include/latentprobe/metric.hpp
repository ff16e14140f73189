#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "latentprobe/error.hpp"

namespace latentprobe {

enum class Metric { euclidean, cosine_distance, inner_product_desc, hamming };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

// Distance kernels. Every caller (exact scan, IVF, evaluation) goes through
// these so equal inputs produce bit-identical distances everywhere.

inline double squared_l2(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

inline double l2_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_l2(a, b));
}

inline double inner_product(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double l2_norm(std::span<const double> a) {
  return std::sqrt(inner_product(a, a));
}

// 1 - cos(angle); bounded [0, 2] and monotone with the angle.
inline double cosine_distance(std::span<const double> a, std::span<const double> b) {
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw ComputeError("cosine distance undefined for zero-norm vector");
  }
  return 1.0 - inner_product(a, b) / (na * nb);
}

// Score under a metric, oriented so smaller is always better. For
// inner_product_desc the stored value stays the raw similarity; ranking
// code negates it through this helper.
inline bool is_descending(Metric m) { return m == Metric::inner_product_desc; }

}  // namespace latentprobe
