#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace aas {

using Real = double;
using Index = Eigen::Index;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<Real>;
using Triplet = Eigen::Triplet<Real>;

/// Which right-hand bilinear form drives the local eigenproblems and
/// hence which enriched coarse space is built.
enum class CoarseSpaceType { Subd, Layer };

/// Additive or symmetrized-multiplicative combination of the subspace solves.
enum class PreconditionerVariant { Additive, Multiplicative };

inline const char* to_string(CoarseSpaceType t) {
  return t == CoarseSpaceType::Subd ? "subd" : "layer";
}

inline const char* to_string(PreconditionerVariant v) {
  return v == PreconditionerVariant::Additive ? "add" : "mlt";
}

}  // namespace aas
