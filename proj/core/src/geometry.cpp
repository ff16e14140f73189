#include "latentprobe/geometry.hpp"

#include <cmath>
#include <vector>

#include "latentprobe/error.hpp"
#include "latentprobe/metric.hpp"
#include "latentprobe/parallel.hpp"
#include "latentprobe/rng.hpp"

namespace latentprobe {

namespace {

constexpr double kPowerTol = 1e-8;
constexpr std::size_t kPowerMaxIters = 1000;

// y = C^T (C x) or C (C^T x) without materializing the covariance, where C
// is the mean-centered data matrix. Row-parallel; the reduction order is
// fixed so results do not depend on the worker count.
class CenteredOp {
 public:
  CenteredOp(const EmbeddingSet& e, std::vector<double> col_means)
      : e_(e), mean_(std::move(col_means)) {}

  // v (dim) -> C^T C v (dim)
  void apply_gram_cols(const std::vector<double>& v, std::vector<double>& out,
                       std::vector<double>& scratch_rows) const {
    const std::size_t n = e_.size(), d = e_.dim;
    parallel_for(n, [&](std::size_t i) {
      const double* row = e_.vectors.data() + i * d;
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += (row[j] - mean_[j]) * v[j];
      scratch_rows[i] = acc;
    });
    out.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = e_.vectors.data() + i * d;
      const double s = scratch_rows[i];
      for (std::size_t j = 0; j < d; ++j) out[j] += (row[j] - mean_[j]) * s;
    }
  }

  // u (n) -> C C^T u (n)
  void apply_gram_rows(const std::vector<double>& u, std::vector<double>& out,
                       std::vector<double>& scratch_cols) const {
    const std::size_t n = e_.size(), d = e_.dim;
    scratch_cols.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = e_.vectors.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) scratch_cols[j] += (row[j] - mean_[j]) * u[i];
    }
    parallel_for(n, [&](std::size_t i) {
      const double* row = e_.vectors.data() + i * d;
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += (row[j] - mean_[j]) * scratch_cols[j];
      out[i] = acc;
    });
  }

 private:
  const EmbeddingSet& e_;
  std::vector<double> mean_;
};

double norm_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

AnisotropyResult anisotropy_full(const EmbeddingSet& e, std::uint64_t seed) {
  const std::size_t n = e.size(), d = e.dim;
  if (n < 2) throw InputError("anisotropy needs at least 2 rows");

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = e.vectors.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
  }
  for (auto& m : mean) m /= static_cast<double>(n);

  double sq_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = e.vectors.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      const double c = row[j] - mean[j];
      sq_sum += c * c;
    }
  }
  const double denom = static_cast<double>(n - 1);
  const double trace = sq_sum / denom;
  if (trace == 0.0) {
    throw ComputeError("degenerate corpus: all rows identical, covariance trace is zero");
  }

  CenteredOp op(e, mean);
  const bool col_space = d <= n;
  const std::size_t space = col_space ? d : n;

  Rng rng(seed);
  std::vector<double> v(space), next(space), scratch(col_space ? n : d);
  for (auto& x : v) x = rng.gaussian();
  double vn = norm_of(v);
  for (auto& x : v) x /= vn;

  double lambda = 0.0;
  std::size_t iters = 0;
  for (; iters < kPowerMaxIters; ++iters) {
    if (col_space) {
      op.apply_gram_cols(v, next, scratch);
    } else {
      op.apply_gram_rows(v, next, scratch);
    }
    // Rayleigh quotient of the scaled operator; v is unit norm.
    double est = 0.0;
    for (std::size_t i = 0; i < space; ++i) est += v[i] * next[i];
    est /= denom;
    const double step = norm_of(next);
    if (step == 0.0) {
      // start vector was orthogonal to the range; reseed
      for (auto& x : v) x = rng.gaussian();
      vn = norm_of(v);
      for (auto& x : v) x /= vn;
      continue;
    }
    for (std::size_t i = 0; i < space; ++i) v[i] = next[i] / step;
    if (iters > 0 && std::abs(est - lambda) <= kPowerTol * std::abs(est)) {
      lambda = est;
      ++iters;
      break;
    }
    lambda = est;
  }

  AnisotropyResult r;
  r.lambda_max = lambda;
  r.trace = trace;
  r.ratio = lambda / trace;
  r.iterations = iters;
  return r;
}

double anisotropy(const EmbeddingSet& e) { return anisotropy_full(e).ratio; }

double nk_skewness(std::span<const std::int64_t> counts) {
  const std::size_t n = counts.size();
  if (n < 3) throw InputError("skewness needs at least 3 counts");
  double mean = 0.0;
  for (auto c : counts) mean += static_cast<double>(c);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) throw ComputeError("constant occurrence counts: skewness undefined");
  double z3 = 0.0;
  for (auto c : counts) {
    const double z = (static_cast<double>(c) - mean) / sd;
    z3 += z * z * z;
  }
  const double nf = static_cast<double>(n);
  return nf / ((nf - 1.0) * (nf - 2.0)) * z3;
}

std::int64_t worst_case_hub(std::span<const std::int64_t> counts) {
  if (counts.empty()) throw InputError("worst_case_hub needs a nonempty count vector");
  std::int64_t m = counts[0];
  for (auto c : counts) m = std::max(m, c);
  return m;
}

GeometryReport geometry_report(const EmbeddingSet& e, std::size_t hub_k,
                               Metric metric, std::uint64_t seed) {
  GeometryReport r;
  r.hub_k = hub_k;
  r.anisotropy = anisotropy_full(e, seed).ratio;
  const NeighborTable t = exact_knn(e, hub_k, metric, /*exclude_self=*/true);
  const auto counts = occurrence_counts(t, e.size());
  r.skewness = nk_skewness(counts);
  r.worst_case_hub = worst_case_hub(counts);
  return r;
}

}  // namespace latentprobe
