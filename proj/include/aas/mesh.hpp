#pragma once

#include <vector>

#include "aas/types.hpp"

namespace aas {

/// Classification of a mesh node relative to the subdomain partition.
enum class NodeClass : unsigned char {
  PhysicalBoundary,   ///< node on the outer boundary of the unit square
  Interface,          ///< node on a subdomain boundary but not on the outer boundary
  SubdomainInterior,  ///< node strictly inside one subdomain
};

/// Uniform right-triangle triangulation of the unit square with n
/// subdivisions per side (mesh size h = 1/n).  Every cell is split along
/// the bottom-left/top-right diagonal, so there are 2n^2 congruent
/// triangles of area h^2/2.  Nodes and triangles are indexed row-major
/// by grid coordinate, which makes the construction reproducible.
struct StructuredMesh {
  Index n = 0;
  Real h = 0;
  Eigen::Matrix<Real, Eigen::Dynamic, 2> nodes;       // (n+1)^2 x 2
  Eigen::Matrix<Index, Eigen::Dynamic, 3> triangles;  // 2n^2 x 3, counterclockwise
  std::vector<bool> node_on_physical_boundary;

  Index node_count() const { return nodes.rows(); }
  Index triangle_count() const { return triangles.rows(); }
  Index node_index(Index i, Index j) const { return j * (n + 1) + i; }

  Eigen::Vector2d node(Index v) const { return nodes.row(v).transpose(); }

  /// Centroid of triangle t.
  Eigen::Vector2d centroid(Index t) const {
    return (node(triangles(t, 0)) + node(triangles(t, 1)) + node(triangles(t, 2))) / Real(3);
  }

  /// Signed area of triangle t (positive for the counterclockwise ordering).
  Real signed_area(Index t) const;
};

/// Decomposition of the mesh into n_side x n_side congruent square
/// subdomains of side H = 1/n_side, aligned with the fine grid.
///
/// For each subdomain k the structure records its triangles, the ordered
/// nodal set of its boundary (including nodes that lie on the outer
/// boundary, where finite element functions vanish), the nodes strictly
/// inside it, and the discrete boundary layer: the triangles of the
/// subdomain with at least one vertex on the subdomain boundary.
struct Partition {
  Index n_side = 0;
  Real H = 0;
  Index cells_per_side = 0;  // fine cells per subdomain side, = n / n_side

  std::vector<Index> triangle_subdomain;              // per triangle
  std::vector<NodeClass> node_class;                  // per node
  std::vector<Index> node_subdomain;                  // owner for interior nodes, -1 otherwise
  std::vector<std::vector<Index>> subdomain_triangles;
  std::vector<std::vector<Index>> subdomain_boundary_nodes;  // ordered, row-major
  std::vector<std::vector<Index>> subdomain_interior_nodes;  // ordered, row-major
  std::vector<std::vector<Index>> layer_triangles;

  Index count() const { return n_side * n_side; }

  Index subdomain_index(Index kx, Index ky) const { return ky * n_side + kx; }
  Index subdomain_x(Index k) const { return k % n_side; }
  Index subdomain_y(Index k) const { return k / n_side; }
};

/// Builds the structured triangulation; requires n >= 2.
StructuredMesh build_mesh(Index n);

/// Builds the square partition; requires mesh.n divisible by n_side.
Partition build_partition(const StructuredMesh& mesh, Index n_side);

}  // namespace aas
