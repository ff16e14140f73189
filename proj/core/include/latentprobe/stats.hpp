#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace latentprobe {

enum class PValueMethod { t_approx, exact_permutation };

struct CorrelationResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  PValueMethod method = PValueMethod::t_approx;
};

// Midranks: average rank for tied values, 1-based.
std::vector<double> midranks(std::span<const double> values);

// Spearman rank correlation with a two-sided p-value. t_approx uses
// t = rho * sqrt((n-2)/(1-rho^2)) against Student's t with n-2 degrees of
// freedom; exact_permutation enumerates all n! rank permutations (n <= 10).
// Requires equal lengths, n >= 3, and non-constant inputs.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y,
                           PValueMethod method = PValueMethod::t_approx);

using NamedVector = std::pair<std::string, std::vector<double>>;

// One Spearman cell per (property, metric) pair.
struct CorrelationTable {
  std::vector<std::string> row_names;  // metrics
  std::vector<std::string> col_names;  // properties
  std::vector<CorrelationResult> cells;  // row-major

  const CorrelationResult& at(std::size_t row, std::size_t col) const {
    return cells[row * col_names.size() + col];
  }
};

CorrelationTable correlation_matrix(std::span<const NamedVector> properties,
                                    std::span<const NamedVector> metrics,
                                    PValueMethod method = PValueMethod::t_approx);

// Aligned plain-text rendering: one row per metric, (rho, p) per property.
std::string render_text(const CorrelationTable& table);

}  // namespace latentprobe
