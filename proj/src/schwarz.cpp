#include "aas/schwarz.hpp"

#include <stdexcept>
#include <string>

namespace aas {

SchwarzPreconditioner::SchwarzPreconditioner(const SparseSymMatrix& stiffness,
                                             const Partition& partition, const DofMap& dofs,
                                             CoarseSpace coarse, PreconditionerVariant variant)
    : variant_(variant), matrix_(stiffness.matrix), coarse_(std::move(coarse)) {
  block_dofs_ = dofs.subdomain_dofs;
  blocks_.reserve(block_dofs_.size());
  for (Index k = 0; k < partition.count(); ++k) {
    const SparseMatrix block = principal_submatrix(matrix_, block_dofs_[k]);
    auto solver = std::make_unique<Eigen::SimplicialLLT<SparseMatrix>>(block);
    if (solver->info() != Eigen::Success) {
      throw std::runtime_error("SchwarzPreconditioner: local block of subdomain " +
                               std::to_string(k) + " is not positive definite");
    }
    blocks_.push_back(std::move(solver));
  }
}

Vector SchwarzPreconditioner::local_solve(Index k, const Vector& r) const {
  const auto& block = block_dofs_[k];
  Vector rhs(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) rhs[i] = r[block[i]];
  const Vector solution = blocks_[k]->solve(rhs);
  Vector result = Vector::Zero(r.size());
  for (std::size_t i = 0; i < block.size(); ++i) result[block[i]] = solution[i];
  return result;
}

Vector SchwarzPreconditioner::local_corrections(const Vector& r) const {
  Vector z = Vector::Zero(r.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& block = block_dofs_[k];
    Vector rhs(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) rhs[i] = r[block[i]];
    const Vector solution = blocks_[k]->solve(rhs);
    for (std::size_t i = 0; i < block.size(); ++i) z[block[i]] += solution[i];
  }
  return z;
}

Vector SchwarzPreconditioner::apply_additive(const Vector& r) const {
  return coarse_.apply_inverse(r) + local_corrections(r);
}

Vector SchwarzPreconditioner::apply_multiplicative(const Vector& r) const {
  Vector z = coarse_.apply_inverse(r);
  z += local_corrections(r - matrix_ * z);
  z += coarse_.apply_inverse(r - matrix_ * z);
  return z;
}

Vector SchwarzPreconditioner::apply(const Vector& r) const {
  return variant_ == PreconditionerVariant::Additive ? apply_additive(r)
                                                     : apply_multiplicative(r);
}

SchwarzPreconditioner build_preconditioner(const SparseSymMatrix& stiffness,
                                           const Partition& partition, const DofMap& dofs,
                                           CoarseSpace coarse, PreconditionerVariant variant) {
  return SchwarzPreconditioner(stiffness, partition, dofs, std::move(coarse), variant);
}

}  // namespace aas
