#pragma once

#include <functional>
#include <vector>

#include "aas/coarse.hpp"
#include "aas/types.hpp"

namespace aas {

/// Dense spectrum of the preconditioned operator, the unconditional
/// reference the iterative estimates are checked against.
struct SpectrumReport {
  Vector eigenvalues;  // increasing
  Matrix eigenvectors; // columns match eigenvalue order
  Real lambda_min = 0;
  Real lambda_max = 0;
  Real kappa = 0;
};

/// Materializes the preconditioner action columnwise and solves the dense
/// generalized symmetric problem for the eigenvalues of M^-1 A.  Guarded
/// against accidental use at scale.
SpectrumReport dense_preconditioned_spectrum(
    const SparseMatrix& matrix, const std::function<Vector(const Vector&)>& precondition,
    Index dimension_guard = 5000);

/// Explicit check of the coarse-plus-local splitting u = u0 + sum u_k with
/// u0 the enriched interpolant and u_k the subdomain-interior remainders.
struct SplittingReport {
  Real reconstruction_error = 0;  // relative, should be roundoff
  Real energy_ratio = 0;          // (energy of u0 + sum of local energies) / energy of u
};

SplittingReport check_stable_splitting(const Partition& partition, const DofMap& dofs,
                                       const SparseSymMatrix& stiffness,
                                       const std::vector<LocalSpectrum>& spectra, const Vector& u);

}  // namespace aas
