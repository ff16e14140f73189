#include "latentprobe/viz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "latentprobe/embedding_set.hpp"
#include "latentprobe/error.hpp"
#include "latentprobe/parallel.hpp"
#include "latentprobe/rng.hpp"

namespace latentprobe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// High-contrast colors against the gray background markers.
constexpr const char* kPalette[8] = {
    "#e6194b", "#4363d8", "#3cb44b", "#f58231",
    "#911eb4", "#0b8a8f", "#f032e6", "#9a6324",
};

}  // namespace

SphereProjection project_to_sphere(const EmbeddingSet& corpus,
                                   std::uint64_t seed, bool center) {
  const std::size_t d = corpus.dim;
  if (d < 3) {
    throw InputError("project_to_sphere: need dimension >= 3, got " +
                     std::to_string(d));
  }
  const std::size_t n = corpus.size();

  Rng rng(seed);
  std::vector<double> matrix(d * 3);
  for (double& m : matrix) m = rng.gaussian();

  std::vector<double> mean;
  if (center) {
    mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = corpus.row(i).data();
      for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    }
    for (double& m : mean) m /= static_cast<double>(n);
  }

  std::vector<SpherePoint> raw(n);
  std::vector<char> ok(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const double* row = corpus.row(i).data();
    double p[3] = {0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < d; ++j) {
      const double v = center ? row[j] - mean[j] : row[j];
      p[0] += v * matrix[j * 3 + 0];
      p[1] += v * matrix[j * 3 + 1];
      p[2] += v * matrix[j * 3 + 2];
    }
    const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    if (norm == 0.0 || !std::isfinite(norm)) return;
    SpherePoint& s = raw[i];
    s.latitude = std::asin(std::clamp(p[2] / norm, -1.0, 1.0));
    s.longitude = std::atan2(p[1] / norm, p[0] / norm);
    s.label = corpus.labels[i];
    ok[i] = 1;
  });

  SphereProjection result;
  result.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (ok[i])
      result.points.push_back(raw[i]);
    else
      ++result.n_skipped;
  }
  return result;
}

PlanePoint mollweide(const SpherePoint& p) {
  const double phi = p.latitude;
  const double lambda = p.longitude;
  if (std::abs(phi) > kPi / 2 + 1e-9 || std::abs(lambda) > kPi + 1e-9) {
    throw InputError("mollweide: angles out of range");
  }

  double theta;
  if (std::abs(phi) >= kPi / 2 - 1e-12) {
    theta = std::copysign(kPi / 2, phi);
  } else {
    // Newton on f(t) = 2t + sin 2t - pi sin(phi). The derivative vanishes at
    // the poles, so steps are damped there and t stays clamped in range.
    theta = phi;
    const double target = kPi * std::sin(phi);
    bool converged = false;
    for (int iter = 0; iter < 50; ++iter) {
      const double f = 2.0 * theta + std::sin(2.0 * theta) - target;
      if (std::abs(f) <= 1e-10) {
        converged = true;
        break;
      }
      double fp = 2.0 + 2.0 * std::cos(2.0 * theta);
      if (fp < 1e-12) fp = 1e-12;
      double step = f / fp;
      if (std::abs(phi) > 1.3) step *= 0.9;
      theta -= step;
      theta = std::clamp(theta, -kPi / 2, kPi / 2);
    }
    if (!converged) {
      const double f = 2.0 * theta + std::sin(2.0 * theta) - target;
      // Near the poles the residual can stall while (x, y) is already
      // accurate; only a genuinely large residual is an error.
      if (std::abs(f) > 1e-6) {
        throw ComputeError("mollweide: Newton iteration failed to converge");
      }
    }
  }

  PlanePoint out;
  out.x = (2.0 * kSqrt2 / kPi) * lambda * std::cos(theta);
  out.y = kSqrt2 * std::sin(theta);
  out.label = p.label;
  out.highlighted = p.highlighted;
  return out;
}

std::vector<PlanePoint> mollweide_all(const std::vector<SpherePoint>& points) {
  std::vector<PlanePoint> out(points.size());
  parallel_for(points.size(),
               [&](std::size_t i) { out[i] = mollweide(points[i]); });
  return out;
}

ScatterResult render_scatter(std::vector<PlanePoint> points,
                             const ScatterOptions& options) {
  std::set<std::int32_t> distinct;
  for (const PlanePoint& p : points) distinct.insert(p.label);

  ScatterResult result;
  if (!options.highlight_classes.empty()) {
    for (std::int32_t c : options.highlight_classes) {
      if (!distinct.count(c)) {
        throw InputError("render_scatter: highlight class " +
                         std::to_string(c) + " not present in labels");
      }
    }
    result.highlighted_classes = options.highlight_classes;
  } else {
    std::vector<std::int32_t> classes(distinct.begin(), distinct.end());
    if (classes.size() <= 8) {
      result.highlighted_classes = classes;
      result.fewer_than_requested = classes.size() < 8;
    } else {
      Rng rng(options.seed);
      rng.shuffle(classes.begin(), classes.end());
      classes.resize(8);
      std::sort(classes.begin(), classes.end());
      result.highlighted_classes = classes;
    }
  }
  std::set<std::int32_t> chosen(result.highlighted_classes.begin(),
                                result.highlighted_classes.end());
  for (PlanePoint& p : points) p.highlighted = chosen.count(p.label) > 0;

  const double a = 2.0 * kSqrt2;  // ellipse semi-axes at R = 1
  const double b = kSqrt2;
  const double half_w = a * 1.05;
  const double half_h = b * 1.05;
  const double width = options.width;
  const double height = width * (half_h / half_w);
  const double scale = width / (2.0 * half_w);
  const auto px = [&](double x) { return (x + half_w) * scale; };
  const auto py = [&](double y) { return (half_h - y) * scale; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  svg << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "  <ellipse cx=\"" << px(0.0) << "\" cy=\"" << py(0.0) << "\" rx=\""
      << a * scale << "\" ry=\"" << b * scale
      << "\" fill=\"#f2f2f2\" stroke=\"#666666\" stroke-width=\"1\"/>\n";

  const auto emit_circle = [&](const PlanePoint& p, const char* fill,
                               double r, const char* opacity) {
    svg << "  <circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\""
        << r << "\" fill=\"" << fill << "\" fill-opacity=\"" << opacity
        << "\"/>\n";
  };
  for (const PlanePoint& p : points) {
    if (!p.highlighted) emit_circle(p, "#9e9e9e", 1.6, "0.45");
  }
  for (const PlanePoint& p : points) {
    if (!p.highlighted) continue;
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(result.highlighted_classes.begin(),
                         result.highlighted_classes.end(), p.label) -
        result.highlighted_classes.begin());
    emit_circle(p, kPalette[idx % 8], 2.2, "0.9");
  }
  svg << "</svg>\n";
  result.svg = svg.str();

  std::ostringstream csv;
  csv << "x,y,label,highlighted\n";
  for (const PlanePoint& p : points) {
    csv << p.x << ',' << p.y << ',' << p.label << ','
        << (p.highlighted ? 1 : 0) << '\n';
  }
  result.csv = csv.str();
  return result;
}

}  // namespace latentprobe
