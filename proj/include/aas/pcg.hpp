#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "aas/types.hpp"

namespace aas {

/// Which residual the stopping criterion measures.
enum class ResidualNorm { Unpreconditioned, Preconditioned };

/// Outcome of one preconditioned conjugate gradient solve.
struct SolveReport {
  Index iterations = 0;
  std::vector<Real> residual_history;  // relative to the initial residual, entry per iteration
  Real condition_estimate = 1.0;
  bool condition_flagged = false;  // too few iterations for a tridiagonal estimate
  bool converged = false;
  std::vector<Real> cg_alpha;  // step lengths, kept for the condition estimate
  std::vector<Real> cg_beta;   // direction updates
  double wall_seconds = 0;

  // Filled by the experiment pipeline.
  std::vector<Index> enrichment_counts;
  Index coarse_dimension = 0;
};

/// Preconditioned conjugate gradients with zero initial guess.  Stops when
/// the selected residual norm drops below tol relative to its initial
/// value.  max_iterations < 0 means 4x the number of unknowns.  Throws on
/// an indefinite operator (p^T A p <= 0).
std::pair<Vector, SolveReport> pcg(const SparseMatrix& matrix, const Vector& rhs,
                                   const std::function<Vector(const Vector&)>& precondition,
                                   Real tol = 5e-6, Index max_iterations = -1,
                                   ResidualNorm norm = ResidualNorm::Unpreconditioned);

/// Extreme-eigenvalue ratio of the tridiagonal matrix built from the
/// conjugate gradient coefficients.  With fewer than two iterations the
/// estimate is 1 and flagged.
Real lanczos_condition_estimate(const std::vector<Real>& alpha, const std::vector<Real>& beta,
                                bool* flagged = nullptr);

/// Relative residual per iteration, one line each.
void write_residual_csv(std::ostream& out, const SolveReport& report);

}  // namespace aas
