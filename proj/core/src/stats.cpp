#include "latentprobe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "latentprobe/error.hpp"

namespace latentprobe {

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j share the value; assign the average 1-based rank.
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ComputeError("spearman: constant input makes ranks undefined");
  }
  return sxy / std::sqrt(sxx * syy);
}

double t_approx_p(double rho, std::size_t n) {
  const double df = static_cast<double>(n - 2);
  const double denom = 1.0 - rho * rho;
  if (denom <= 0.0) return 0.0;  // |rho| == 1: perfect monotone relation
  const double t = rho * std::sqrt(df / denom);
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(dist, -std::abs(t));
}

double rank_corr(const std::vector<double>& rx, const std::vector<double>& ry) {
  return pearson(rx, ry);
}

double exact_p(const std::vector<double>& rx, const std::vector<double>& ry,
               double observed_rho) {
  // Enumerate every permutation of one rank vector; the p-value is the
  // fraction with |rho| at least as extreme as observed.
  std::vector<double> perm = ry;
  std::sort(perm.begin(), perm.end());
  const double threshold = std::abs(observed_rho) - 1e-12;
  std::size_t total = 0;
  std::size_t extreme = 0;
  do {
    ++total;
    if (std::abs(rank_corr(rx, perm)) >= threshold) ++extreme;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace

CorrelationResult spearman(std::span<const double> x, std::span<const double> y,
                           PValueMethod method) {
  if (x.size() != y.size()) {
    throw InputError("spearman: input lengths differ (" +
                     std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  const std::size_t n = x.size();
  if (n < 3) {
    throw InputError("spearman: need at least 3 observations, got " +
                     std::to_string(n));
  }
  if (method == PValueMethod::exact_permutation && n > 10) {
    throw InputError(
        "spearman: exact permutation p-value limited to n <= 10, got " +
        std::to_string(n));
  }

  const std::vector<double> rx = midranks(x);
  const std::vector<double> ry = midranks(y);
  CorrelationResult r;
  r.n = n;
  r.method = method;
  r.rho = rank_corr(rx, ry);
  if (method == PValueMethod::t_approx) {
    r.p_value = t_approx_p(r.rho, n);
  } else {
    r.p_value = exact_p(rx, ry, r.rho);
  }
  return r;
}

CorrelationTable correlation_matrix(std::span<const NamedVector> properties,
                                    std::span<const NamedVector> metrics,
                                    PValueMethod method) {
  CorrelationTable table;
  for (const auto& [name, _] : metrics) table.row_names.push_back(name);
  for (const auto& [name, _] : properties) table.col_names.push_back(name);
  table.cells.reserve(metrics.size() * properties.size());
  for (const auto& [mname, mvals] : metrics) {
    for (const auto& [pname, pvals] : properties) {
      table.cells.push_back(spearman(pvals, mvals, method));
    }
  }
  return table;
}

std::string render_text(const CorrelationTable& table) {
  std::size_t label_width = 0;
  for (const auto& name : table.row_names)
    label_width = std::max(label_width, name.size());
  const std::size_t cell_width = 18;

  std::ostringstream out;
  out << std::string(label_width, ' ');
  for (const auto& name : table.col_names) {
    std::string header = name;
    if (header.size() > cell_width - 2) header.resize(cell_width - 2);
    out << "  " << header << std::string(cell_width - 2 - header.size(), ' ');
  }
  out << '\n';
  for (std::size_t r = 0; r < table.row_names.size(); ++r) {
    out << table.row_names[r]
        << std::string(label_width - table.row_names[r].size(), ' ');
    for (std::size_t c = 0; c < table.col_names.size(); ++c) {
      const CorrelationResult& cell = table.at(r, c);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%+.3f (p=%.4f)", cell.rho,
                    cell.p_value);
      std::string text(buf);
      out << "  " << text;
      if (text.size() < cell_width - 2)
        out << std::string(cell_width - 2 - text.size(), ' ');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace latentprobe
