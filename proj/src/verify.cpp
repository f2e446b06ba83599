#include "aas/verify.hpp"

#include <stdexcept>
#include <string>

namespace aas {

SpectrumReport dense_preconditioned_spectrum(
    const SparseMatrix& matrix, const std::function<Vector(const Vector&)>& precondition,
    Index dimension_guard) {
  const Index n = matrix.rows();
  if (n > dimension_guard) {
    throw std::invalid_argument("dense_preconditioned_spectrum: dimension " + std::to_string(n) +
                                " exceeds the guard " + std::to_string(dimension_guard));
  }

  // Columns of the preconditioner inverse; symmetrized to kill roundoff.
  Matrix inverse(n, n);
  Vector unit = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    unit[j] = 1;
    inverse.col(j) = precondition(unit);
    unit[j] = 0;
  }
  inverse = Real(0.5) * (inverse + inverse.transpose()).eval();

  // Eigenvalues of M^-1 A from the pencil (A, M^-1) via the symmetric
  // product form: solves M^-1 A x = lambda x with M^-1 factored by Cholesky.
  const Matrix dense = Matrix(matrix);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(
      dense, inverse, Eigen::ComputeEigenvectors | Eigen::BAx_lx);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("dense_preconditioned_spectrum: eigensolver failed");
  }

  SpectrumReport report;
  report.eigenvalues = solver.eigenvalues();
  report.eigenvectors = solver.eigenvectors();
  report.lambda_min = report.eigenvalues.minCoeff();
  report.lambda_max = report.eigenvalues.maxCoeff();
  report.kappa = report.lambda_max / report.lambda_min;
  return report;
}

SplittingReport check_stable_splitting(const Partition& partition, const DofMap& dofs,
                                       const SparseSymMatrix& stiffness,
                                       const std::vector<LocalSpectrum>& spectra,
                                       const Vector& u) {
  const Vector u0 = enriched_interpolate(partition, dofs, spectra, u);
  const Vector remainder = u - u0;

  Vector reconstruction = u0;
  Real local_energy = 0;
  for (Index k = 0; k < partition.count(); ++k) {
    Vector uk = Vector::Zero(u.size());
    for (Index d : dofs.subdomain_dofs[k]) uk[d] = remainder[d];
    reconstruction += uk;
    local_energy += uk.dot(stiffness.matrix * uk);
  }

  SplittingReport report;
  report.reconstruction_error = (reconstruction - u).norm() / u.norm();
  const Real coarse_energy = u0.dot(stiffness.matrix * u0);
  const Real total_energy = u.dot(stiffness.matrix * u);
  report.energy_ratio = (coarse_energy + local_energy) / total_energy;
  return report;
}

}  // namespace aas
