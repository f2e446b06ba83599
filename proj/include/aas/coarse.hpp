#pragma once

#include <utility>
#include <vector>

#include "aas/assembly.hpp"
#include "aas/spectral.hpp"
#include "aas/types.hpp"

namespace aas {

/// Replaces the values at all nodes strictly inside a subdomain by the
/// discrete average of u over that subdomain's boundary nodes (values on
/// the outer boundary count as zero), and keeps interface values.  The
/// result is again a vector on free dofs.
Vector average_interpolate(const Partition& partition, const DofMap& dofs, const Vector& u);

/// Enriched coarse space: one basis column per interface node (the
/// averaged hat of that node) plus one column per selected eigenfunction,
/// extended by zero outside its subdomain.  The Galerkin matrix on this
/// basis is assembled and factorized once.
struct CoarseSpace {
  CoarseSpaceType type = CoarseSpaceType::Subd;
  SparseMatrix basis;  // free dofs x coarse dim
  Index interface_columns = 0;
  std::vector<Index> interface_nodes;                      // node id per interface column
  std::vector<std::pair<Index, Index>> enrichment_columns; // (subdomain, eigen index)
  Matrix coarse_matrix;
  Eigen::LDLT<Matrix> factorization;

  Index dim() const { return basis.cols(); }

  /// A0^-1 applied to a coarse right-hand side.
  Vector solve(const Vector& coarse_rhs) const { return factorization.solve(coarse_rhs); }

  /// basis * A0^-1 * basis^T applied to a fine residual.
  Vector apply_inverse(const Vector& r) const;
};

/// Builds the basis and Galerkin matrix.  Aborts with diagnostics if the
/// factorization detects (near-)linearly dependent columns.
CoarseSpace build_coarse_space(const Partition& partition, const DofMap& dofs,
                               const SparseSymMatrix& stiffness,
                               const std::vector<LocalSpectrum>& spectra);

/// Average interpolation plus, per subdomain, the selected-eigenfunction
/// projection of the interpolation remainder (which vanishes on subdomain
/// boundaries).  The result lies in the span of the coarse basis.
Vector enriched_interpolate(const Partition& partition, const DofMap& dofs,
                            const std::vector<LocalSpectrum>& spectra, const Vector& u);

}  // namespace aas
