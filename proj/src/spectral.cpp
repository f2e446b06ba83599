#include "aas/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace aas {

LocalSpectrum solve_gevp(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("solve_gevp: forms must be square and of equal size");
  }
  Eigen::LLT<Matrix> llt(b);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("solve_gevp: right-hand form is not positive definite");
  }

  // Reduce to the standard symmetric problem for L^-1 a L^-T.
  const Matrix half = llt.matrixL().solve(a);
  const Matrix reduced = llt.matrixL().solve(half.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(reduced);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("solve_gevp: eigensolver failed to converge");
  }

  const Index dim = a.rows();
  LocalSpectrum spectrum;
  spectrum.eigenvalues = solver.eigenvalues().reverse();
  spectrum.eigenvectors = llt.matrixU().solve(solver.eigenvectors().rowwise().reverse());
  spectrum.b = b;

  // Re-orthonormalize in the b inner product.  The Cholesky route already
  // gives a b-orthonormal basis up to roundoff; a Gram-Schmidt pass keeps
  // repeated eigengroups clean at high contrast.
  for (Index j = 0; j < dim; ++j) {
    auto col = spectrum.eigenvectors.col(j);
    for (Index i = 0; i < j; ++i) {
      const Real proj = spectrum.eigenvectors.col(i).dot(b * col);
      col -= proj * spectrum.eigenvectors.col(i);
    }
    col /= std::sqrt(col.dot(b * col));
  }
  return spectrum;
}

Index select_enrichment(const Vector& eigenvalues_decreasing, const EnrichmentPolicy& policy) {
  const Index dim = eigenvalues_decreasing.size();
  if (dim == 0) return 0;

  Index m = 0;
  switch (policy.kind) {
    case EnrichmentPolicy::Kind::Threshold:
      while (m < dim && eigenvalues_decreasing[m] > policy.threshold) ++m;
      break;
    case EnrichmentPolicy::Kind::Fixed:
      m = std::min(policy.fixed, dim);
      break;
  }
  m = std::min(m, dim - 1);

  // Never split a numerically repeated eigenvalue across the cut.
  const Real gap_tolerance = 1e-8;
  while (m >= 1 && m < dim - 1 &&
         eigenvalues_decreasing[m] >= eigenvalues_decreasing[m - 1] * (Real(1) - gap_tolerance)) {
    ++m;
  }
  return m;
}

Vector spectral_projection(const LocalSpectrum& spectrum, const Vector& v) {
  if (spectrum.selected == 0) return Vector::Zero(v.size());
  const auto basis = spectrum.eigenvectors.leftCols(spectrum.selected);
  return basis * (basis.transpose() * (spectrum.b * v));
}

std::vector<LocalSpectrum> solve_subdomain_spectra(const StructuredMesh& mesh,
                                                   const Partition& partition,
                                                   const CoefficientField& field,
                                                   const CoefficientExtrema& extrema,
                                                   CoarseSpaceType type,
                                                   const EnrichmentPolicy& policy) {
  std::vector<LocalSpectrum> spectra;
  spectra.reserve(partition.count());
  for (Index k = 0; k < partition.count(); ++k) {
    const LocalForms forms = assemble_local(mesh, partition, field, extrema, k, type);
    LocalSpectrum spectrum = solve_gevp(forms.a, forms.b);
    spectrum.subdomain = k;
    spectrum.type = type;
    spectrum.selected = select_enrichment(spectrum.eigenvalues, policy);
    spectra.push_back(std::move(spectrum));
  }
  return spectra;
}

void write_spectra_csv(std::ostream& out, const std::vector<LocalSpectrum>& spectra) {
  out << "subdomain,index,eigenvalue,selected\n";
  const auto precision = out.precision();
  out.precision(16);
  for (const auto& spectrum : spectra) {
    for (Index j = 0; j < spectrum.dimension(); ++j) {
      out << spectrum.subdomain << "," << j + 1 << "," << spectrum.eigenvalues[j] << ","
          << (j < spectrum.selected ? 1 : 0) << "\n";
    }
  }
  out.precision(precision);
}

}  // namespace aas
