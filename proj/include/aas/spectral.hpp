#pragma once

#include <iosfwd>
#include <vector>

#include "aas/assembly.hpp"
#include "aas/types.hpp"

namespace aas {

/// How many local eigenfunctions to keep per subdomain: either everything
/// above an eigenvalue threshold, or a fixed count.
struct EnrichmentPolicy {
  enum class Kind { Threshold, Fixed };
  Kind kind = Kind::Threshold;
  Real threshold = 100.0;
  Index fixed = 0;

  static EnrichmentPolicy with_threshold(Real mu) {
    return EnrichmentPolicy{Kind::Threshold, mu, 0};
  }
  static EnrichmentPolicy with_fixed(Index m) { return EnrichmentPolicy{Kind::Fixed, 0.0, m}; }
};

/// Full eigendecomposition of one subdomain pencil a psi = lambda b psi,
/// eigenvalues sorted decreasing, eigenvectors b-orthonormal, plus the
/// number of leading eigenpairs selected for enrichment.
struct LocalSpectrum {
  Index subdomain = -1;
  CoarseSpaceType type = CoarseSpaceType::Subd;
  Vector eigenvalues;   // decreasing
  Matrix eigenvectors;  // columns match eigenvalue order
  Matrix b;             // right-hand form, kept for projections and b-norms
  Index selected = 0;   // leading eigenpairs kept for the coarse space

  Index dimension() const { return eigenvalues.size(); }

  /// First eigenvalue left out of the enrichment (the whole spectrum when
  /// nothing is selected).  Selection never exhausts the space, so this is
  /// always defined.
  Real lambda_next() const { return eigenvalues[selected]; }
};

/// Solves the dense symmetric-definite pencil by Cholesky reduction:
/// factor b = L L^T, solve the standard symmetric problem for
/// L^-1 a L^-T and map the eigenvectors back.  Throws if b is not
/// positive definite.
LocalSpectrum solve_gevp(const Matrix& a, const Matrix& b);

/// Number of leading eigenpairs to keep.  Threshold keeps eigenvalues
/// strictly above the threshold; fixed keeps min(m, dimension).  In both
/// cases the count is extended so a group of (numerically) equal
/// eigenvalues is never split, and the whole space is never selected.
Index select_enrichment(const Vector& eigenvalues_decreasing, const EnrichmentPolicy& policy);

/// b-orthogonal projection onto the selected eigenfunctions.
Vector spectral_projection(const LocalSpectrum& spectrum, const Vector& v);

/// Assembles and solves the pencil of every subdomain and applies the
/// selection policy.
std::vector<LocalSpectrum> solve_subdomain_spectra(const StructuredMesh& mesh,
                                                   const Partition& partition,
                                                   const CoefficientField& field,
                                                   const CoefficientExtrema& extrema,
                                                   CoarseSpaceType type,
                                                   const EnrichmentPolicy& policy);

/// One line per eigenvalue: subdomain, index, value, selected flag.
void write_spectra_csv(std::ostream& out, const std::vector<LocalSpectrum>& spectra);

}  // namespace aas
