#include "aas/pcg.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace aas {

Real lanczos_condition_estimate(const std::vector<Real>& alpha, const std::vector<Real>& beta,
                                bool* flagged) {
  const Index steps = static_cast<Index>(alpha.size());
  if (flagged) *flagged = steps < 2;
  if (steps < 2) return 1.0;

  Vector diagonal(steps);
  Vector subdiagonal(steps - 1);
  diagonal[0] = Real(1) / alpha[0];
  for (Index i = 1; i < steps; ++i) {
    diagonal[i] = Real(1) / alpha[i] + beta[i - 1] / alpha[i - 1];
    subdiagonal[i - 1] = std::sqrt(beta[i - 1]) / alpha[i - 1];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(diagonal, subdiagonal, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff() / solver.eigenvalues().minCoeff();
}

std::pair<Vector, SolveReport> pcg(const SparseMatrix& matrix, const Vector& rhs,
                                   const std::function<Vector(const Vector&)>& precondition,
                                   Real tol, Index max_iterations,
                                   ResidualNorm norm) {
  const auto start = std::chrono::steady_clock::now();
  const Index n = matrix.rows();
  if (max_iterations < 0) max_iterations = 4 * n;

  SolveReport report;
  Vector x = Vector::Zero(n);
  Vector r = rhs;

  auto residual_norm = [&](const Vector& residual, const Vector& preconditioned) {
    return norm == ResidualNorm::Unpreconditioned ? residual.norm() : preconditioned.norm();
  };

  Vector z = precondition(r);
  const Real r0 = residual_norm(r, z);
  if (r0 == Real(0)) {
    report.converged = true;
    return {x, report};
  }

  Vector p = z;
  Real rho = r.dot(z);
  while (report.iterations < max_iterations) {
    const Vector ap = matrix * p;
    const Real curvature = p.dot(ap);
    if (curvature <= 0) {
      throw std::runtime_error("pcg: operator is not positive definite (p^T A p <= 0)");
    }
    const Real alpha = rho / curvature;
    x += alpha * p;
    r -= alpha * ap;
    z = precondition(r);
    const Real rho_next = r.dot(z);
    const Real beta = rho_next / rho;
    rho = rho_next;

    report.cg_alpha.push_back(alpha);
    ++report.iterations;
    const Real relative = residual_norm(r, z) / r0;
    report.residual_history.push_back(relative);
    if (relative <= tol) {
      report.converged = true;
      break;
    }
    report.cg_beta.push_back(beta);
    p = z + beta * p;
  }

  report.condition_estimate =
      lanczos_condition_estimate(report.cg_alpha, report.cg_beta, &report.condition_flagged);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {x, report};
}

void write_residual_csv(std::ostream& out, const SolveReport& report) {
  out << "iteration,relative_residual\n";
  const auto precision = out.precision();
  out.precision(16);
  for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
    out << i + 1 << "," << report.residual_history[i] << "\n";
  }
  out.precision(precision);
}

}  // namespace aas
