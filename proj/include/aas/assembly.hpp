#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "aas/coefficient.hpp"
#include "aas/mesh.hpp"
#include "aas/types.hpp"

namespace aas {

/// Degree-of-freedom bookkeeping after eliminating the outer Dirichlet
/// boundary.  Global free dofs are the non-boundary nodes; each subdomain
/// additionally gets the list of free dofs of its strictly interior nodes
/// (the zero-trace local spaces).  Local dof sets are pairwise disjoint and
/// together cover all free dofs except the interface nodes.
struct DofMap {
  std::vector<Index> free_nodes;                   // dof -> node
  std::vector<Index> node_to_dof;                  // node -> dof, -1 for boundary nodes
  std::vector<std::vector<Index>> subdomain_dofs;  // per subdomain, sorted

  Index free_count() const { return static_cast<Index>(free_nodes.size()); }
};

DofMap build_dof_map(const StructuredMesh& mesh, const Partition& partition);

/// Symmetric sparse stiffness matrix on free dofs, keeping the dof-to-node
/// index alongside the values.
struct SparseSymMatrix {
  SparseMatrix matrix;
  std::vector<Index> dof_to_node;

  Index dimension() const { return matrix.rows(); }
};

/// Element stiffness of a linear triangle: alpha * integral of grad phi_i .
/// grad phi_j.  Exact for piecewise-constant alpha.
Eigen::Matrix3d element_stiffness(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                  const Eigen::Vector2d& p2, Real alpha);

/// Global stiffness with homogeneous Dirichlet rows and columns eliminated.
SparseSymMatrix assemble_stiffness(const StructuredMesh& mesh, const CoefficientField& field,
                                   const DofMap& dofs);

/// Pure-Neumann assembly over all nodes, no elimination.  Row sums vanish;
/// used for energy cross-checks.
SparseMatrix assemble_stiffness_neumann(const StructuredMesh& mesh, const CoefficientField& field);

/// Load vector on free dofs by the edge-midpoint rule (exact for quadratic
/// integrands).
Vector assemble_load(const StructuredMesh& mesh, const DofMap& dofs,
                     const std::function<Real(Real, Real)>& f);

/// The pair of local bilinear forms of subdomain k on its zero-trace space:
/// `a` uses the true coefficient; `b` replaces it by the subdomain minimum
/// (Subd) or by the layer minimum on layer triangles only (Layer).
struct LocalForms {
  Matrix a;
  Matrix b;
};

LocalForms assemble_local(const StructuredMesh& mesh, const Partition& partition,
                          const CoefficientField& field, const CoefficientExtrema& extrema,
                          Index k, CoarseSpaceType type);

/// Principal submatrix of a sparse symmetric matrix on the given dof set.
SparseMatrix principal_submatrix(const SparseMatrix& matrix, const std::vector<Index>& dofs);

/// MatrixMarket coordinate output (real symmetric, 1-based, lower triangle).
void write_matrix_market(std::ostream& out, const SparseMatrix& matrix);

}  // namespace aas
