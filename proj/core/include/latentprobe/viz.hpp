#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace latentprobe {

struct EmbeddingSet;

struct SpherePoint {
  double latitude = 0.0;   // phi in [-pi/2, pi/2]
  double longitude = 0.0;  // lambda in [-pi, pi]
  std::int32_t label = 0;
  bool highlighted = false;
};

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
  std::int32_t label = 0;
  bool highlighted = false;
};

struct SphereProjection {
  std::vector<SpherePoint> points;
  std::size_t n_skipped = 0;  // rows whose projection collapsed to zero
};

// Johnson-Lindenstrauss style reduction: multiply by a seeded D x 3
// standard-Gaussian matrix, normalize to the unit sphere, convert to
// latitude/longitude. Requires D >= 3. With center=true the corpus mean is
// subtracted first.
SphereProjection project_to_sphere(const EmbeddingSet& corpus,
                                   std::uint64_t seed, bool center = false);

// Equal-area Mollweide map with R = 1: solves 2t + sin 2t = pi sin(phi) by
// damped Newton iteration, then x = (2*sqrt(2)/pi) * lambda * cos t,
// y = sqrt(2) * sin t.
PlanePoint mollweide(const SpherePoint& p);

std::vector<PlanePoint> mollweide_all(const std::vector<SpherePoint>& points);

struct ScatterOptions {
  std::uint64_t seed = 0;
  // When empty, 8 classes are drawn by seed from the distinct labels.
  std::vector<std::int32_t> highlight_classes;
  double width = 900.0;  // SVG pixel width; height follows the 2:1 ellipse
};

struct ScatterResult {
  std::string svg;
  std::string csv;  // columns x,y,label,highlighted
  std::vector<std::int32_t> highlighted_classes;
  bool fewer_than_requested = false;
};

// Scatter plot on the Mollweide plane: gray background markers, a fixed
// 8-color palette for highlighted classes, ellipse boundary, 5% margin.
ScatterResult render_scatter(std::vector<PlanePoint> points,
                             const ScatterOptions& options);

}  // namespace latentprobe
