#pragma once

#include <memory>
#include <vector>

#include "aas/coarse.hpp"
#include "aas/types.hpp"

namespace aas {

/// Nonoverlapping Schwarz preconditioner: exact solves on the
/// subdomain-interior blocks of the stiffness matrix plus the coarse solve.
/// The additive variant sums all corrections; the multiplicative variant
/// runs the symmetrized sweep coarse -> locals -> coarse (the local blocks
/// act on disjoint dof sets, so their internal order is immaterial and the
/// swept operator stays symmetric positive definite).
class SchwarzPreconditioner {
 public:
  SchwarzPreconditioner(const SparseSymMatrix& stiffness, const Partition& partition,
                        const DofMap& dofs, CoarseSpace coarse, PreconditionerVariant variant);

  Vector apply(const Vector& r) const;

  PreconditionerVariant variant() const { return variant_; }
  CoarseSpaceType type() const { return coarse_.type; }
  const CoarseSpace& coarse() const { return coarse_; }
  Index block_count() const { return static_cast<Index>(blocks_.size()); }
  Index block_dimension(Index k) const { return static_cast<Index>(block_dofs_[k].size()); }

  /// Exact solve on the interior block of subdomain k, scattered back to a
  /// full-length vector.
  Vector local_solve(Index k, const Vector& r) const;

 private:
  Vector apply_additive(const Vector& r) const;
  Vector apply_multiplicative(const Vector& r) const;
  Vector local_corrections(const Vector& r) const;

  PreconditionerVariant variant_;
  SparseMatrix matrix_;
  CoarseSpace coarse_;
  std::vector<std::vector<Index>> block_dofs_;
  std::vector<std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>>> blocks_;
};

/// Factorizes all local blocks (principal submatrices of the stiffness on
/// the subdomain-interior dofs) and takes ownership of the coarse space.
SchwarzPreconditioner build_preconditioner(const SparseSymMatrix& stiffness,
                                           const Partition& partition, const DofMap& dofs,
                                           CoarseSpace coarse, PreconditionerVariant variant);

}  // namespace aas
