#include "aas/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aas {

namespace {

void validate(const CoefficientGeometry& g, Real H, Real h) {
  if (g.alpha_background < 1 || g.alpha_channel < 1 || g.alpha_inclusion < 1) {
    throw std::invalid_argument("coefficient geometry: all alpha values must be >= 1");
  }
  if (!(g.channel_width_fraction > 0 && g.channel_width_fraction < 1) ||
      !(g.inclusion_side_fraction > 0 && g.inclusion_side_fraction < 1)) {
    throw std::invalid_argument("coefficient geometry: size fractions must lie in (0, 1)");
  }
  const Real tol = Real(1e-12);
  if (g.channel_width_fraction * H < h * (1 - tol)) {
    throw std::invalid_argument("coefficient geometry: channel band of width " +
                                std::to_string(g.channel_width_fraction * H) +
                                " is narrower than the mesh size " + std::to_string(h));
  }
  if (g.inclusion_side_fraction * H < h * (1 - tol)) {
    throw std::invalid_argument("coefficient geometry: inclusion of side " +
                                std::to_string(g.inclusion_side_fraction * H) +
                                " is narrower than the mesh size " + std::to_string(h));
  }
}

}  // namespace

CoefficientField build_coefficient(const StructuredMesh& mesh, const Partition& partition,
                                   const CoefficientGeometry& geometry) {
  validate(geometry, partition.H, mesh.h);

  const Real H = partition.H;
  const Real half_width = Real(0.5) * geometry.channel_width_fraction * H;
  const Real half_side = Real(0.5) * geometry.inclusion_side_fraction * H;

  // Inclusion centers: interior corners of the subdomain grid.
  std::vector<Eigen::Vector2d> inclusion_centers;
  for (Index b = 1; b < partition.n_side; ++b) {
    for (Index a = 1; a < partition.n_side; ++a) {
      inclusion_centers.emplace_back(Real(a) * H, Real(b) * H);
    }
  }

  CoefficientField field;
  field.alpha.resize(mesh.triangle_count());
  for (Index t = 0; t < mesh.triangle_count(); ++t) {
    const Eigen::Vector2d c = mesh.centroid(t);

    bool in_inclusion = false;
    for (const auto& center : inclusion_centers) {
      if (std::abs(c.x() - center.x()) <= half_side && std::abs(c.y() - center.y()) <= half_side) {
        in_inclusion = true;
        break;
      }
    }
    if (in_inclusion) {
      field.alpha[t] = geometry.alpha_inclusion;
      continue;
    }

    const Index k = partition.triangle_subdomain[t];
    const Real x0 = Real(partition.subdomain_x(k)) * H;
    const Real y0 = Real(partition.subdomain_y(k)) * H;
    const Real cx = x0 + Real(0.5) * H;
    const Real cy = y0 + Real(0.5) * H;

    // Where the bands stop: at the subdomain boundary, or one fine-element
    // strip before it for the discontinuous variant.
    const Real margin = geometry.channels_continuous ? Real(0) : mesh.h;
    const bool along_x = c.x() > x0 + margin && c.x() < x0 + H - margin;
    const bool along_y = c.y() > y0 + margin && c.y() < y0 + H - margin;
    const bool in_horizontal = std::abs(c.y() - cy) <= half_width && along_x;
    const bool in_vertical = std::abs(c.x() - cx) <= half_width && along_y;
    field.alpha[t] =
        (in_horizontal || in_vertical) ? geometry.alpha_channel : geometry.alpha_background;
  }
  return field;
}

CoefficientExtrema coefficient_extrema(const Partition& partition, const CoefficientField& field) {
  const Index count = partition.count();
  CoefficientExtrema ex;
  ex.min_subdomain.resize(count);
  ex.max_subdomain.resize(count);
  ex.min_layer.resize(count);
  ex.max_layer.resize(count);

  auto min_max = [&field](const std::vector<Index>& triangles) {
    Real lo = std::numeric_limits<Real>::infinity();
    Real hi = -std::numeric_limits<Real>::infinity();
    for (Index t : triangles) {
      lo = std::min(lo, field.alpha[t]);
      hi = std::max(hi, field.alpha[t]);
    }
    return std::pair<Real, Real>{lo, hi};
  };

  for (Index k = 0; k < count; ++k) {
    const auto [lo, hi] = min_max(partition.subdomain_triangles[k]);
    ex.min_subdomain[k] = lo;
    ex.max_subdomain[k] = hi;
    const auto [llo, lhi] = min_max(partition.layer_triangles[k]);
    ex.min_layer[k] = llo;
    ex.max_layer[k] = lhi;
  }
  return ex;
}

}  // namespace aas
