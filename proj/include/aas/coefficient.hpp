#pragma once

#include "aas/mesh.hpp"
#include "aas/types.hpp"

namespace aas {

/// Background/channel/inclusion description of the diffusion coefficient.
///
/// Every subdomain carries one horizontal and one vertical channel band of
/// width channel_width_fraction * H crossing at the subdomain center.  An
/// inclusion square of side inclusion_side_fraction * H sits at every
/// interior corner of the subdomain grid, straddling the adjacent
/// subdomains.  Channel and inclusion sizes scale with the subdomain size
/// H, not with the mesh size h, so refining the mesh keeps the pattern.
struct CoefficientGeometry {
  Real alpha_background = 1.0;
  Real alpha_channel = 1.0;
  Real alpha_inclusion = 1.0;
  Real channel_width_fraction = 1.0 / 6.0;
  Real inclusion_side_fraction = 1.0 / 3.0;
  /// If false, channel bands stop one fine-element strip before the
  /// subdomain boundary instead of stretching across it.
  bool channels_continuous = true;
};

/// Piecewise-constant coefficient, one positive value per triangle.
struct CoefficientField {
  Vector alpha;
};

/// Per-subdomain coefficient extrema over the subdomain and over its
/// boundary layer.
struct CoefficientExtrema {
  Vector min_subdomain;
  Vector max_subdomain;
  Vector min_layer;
  Vector max_layer;
};

/// Evaluates the geometry on the mesh.  Membership of a triangle is decided
/// by its centroid; precedence on overlap is inclusion > channel >
/// background.  Throws if a channel band or inclusion is narrower than the
/// mesh size (the pattern would not be resolvable).
CoefficientField build_coefficient(const StructuredMesh& mesh, const Partition& partition,
                                   const CoefficientGeometry& geometry);

/// Min/max of the field over each subdomain and each boundary layer.
CoefficientExtrema coefficient_extrema(const Partition& partition, const CoefficientField& field);

}  // namespace aas
