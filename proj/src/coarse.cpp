#include "aas/coarse.hpp"

#include <sstream>
#include <stdexcept>

namespace aas {

namespace {

// Subdomains whose boundary contains each node, derived from the ordered
// boundary node lists.
std::vector<std::vector<Index>> node_boundary_subdomains(const Partition& partition,
                                                         Index node_count) {
  std::vector<std::vector<Index>> owners(node_count);
  for (Index k = 0; k < partition.count(); ++k) {
    for (Index v : partition.subdomain_boundary_nodes[k]) owners[v].push_back(k);
  }
  return owners;
}

}  // namespace

Vector average_interpolate(const Partition& partition, const DofMap& dofs, const Vector& u) {
  Vector result = u;
  for (Index k = 0; k < partition.count(); ++k) {
    const auto& boundary = partition.subdomain_boundary_nodes[k];
    Real sum = 0;
    for (Index v : boundary) {
      const Index d = dofs.node_to_dof[v];
      if (d >= 0) sum += u[d];  // boundary nodes on the outer boundary contribute zero
    }
    const Real average = sum / Real(boundary.size());
    for (Index d : dofs.subdomain_dofs[k]) result[d] = average;
  }
  return result;
}

CoarseSpace build_coarse_space(const Partition& partition, const DofMap& dofs,
                               const SparseSymMatrix& stiffness,
                               const std::vector<LocalSpectrum>& spectra) {
  CoarseSpace coarse;
  if (!spectra.empty()) coarse.type = spectra.front().type;

  const auto owners = node_boundary_subdomains(partition, dofs.node_to_dof.size());

  // Interface columns first, in node order: the averaged hat of node x is 1
  // at x and 1/n_k at the interior of every subdomain whose boundary
  // contains x.
  for (Index v = 0; v < static_cast<Index>(partition.node_class.size()); ++v) {
    if (partition.node_class[v] == NodeClass::Interface) coarse.interface_nodes.push_back(v);
  }
  coarse.interface_columns = static_cast<Index>(coarse.interface_nodes.size());

  Index enrichment_total = 0;
  for (const auto& spectrum : spectra) {
    for (Index j = 0; j < spectrum.selected; ++j) {
      coarse.enrichment_columns.emplace_back(spectrum.subdomain, j);
    }
    enrichment_total += spectrum.selected;
  }

  const Index dim = coarse.interface_columns + enrichment_total;
  std::vector<Triplet> triplets;
  for (Index c = 0; c < coarse.interface_columns; ++c) {
    const Index v = coarse.interface_nodes[c];
    triplets.emplace_back(dofs.node_to_dof[v], c, Real(1));
    for (Index k : owners[v]) {
      const Real weight = Real(1) / Real(partition.subdomain_boundary_nodes[k].size());
      for (Index d : dofs.subdomain_dofs[k]) triplets.emplace_back(d, c, weight);
    }
  }
  Index column = coarse.interface_columns;
  for (const auto& spectrum : spectra) {
    const auto& local_dofs = dofs.subdomain_dofs[spectrum.subdomain];
    for (Index j = 0; j < spectrum.selected; ++j, ++column) {
      for (std::size_t i = 0; i < local_dofs.size(); ++i) {
        triplets.emplace_back(local_dofs[i], column, spectrum.eigenvectors(i, j));
      }
    }
  }

  coarse.basis.resize(dofs.free_count(), dim);
  coarse.basis.setFromTriplets(triplets.begin(), triplets.end());
  coarse.basis.makeCompressed();

  const SparseMatrix product = stiffness.matrix * coarse.basis;
  Matrix galerkin = Matrix(coarse.basis.transpose() * product);
  coarse.coarse_matrix = Real(0.5) * (galerkin + galerkin.transpose());
  coarse.factorization.compute(coarse.coarse_matrix);

  if (dim > 0) {
    const Real pivot_floor = Real(1e-12) * coarse.coarse_matrix.diagonal().maxCoeff();
    const Vector d = coarse.factorization.vectorD();
    if (coarse.factorization.info() != Eigen::Success || d.minCoeff() <= pivot_floor) {
      // Map offending pivots back to basis columns for the error message.
      Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic> perm(
          coarse.factorization.transpositionsP());
      std::ostringstream message;
      message << "build_coarse_space: coarse matrix is numerically rank deficient; columns:";
      for (Index i = 0; i < dim; ++i) {
        if (d[i] <= pivot_floor) {
          const Index c = perm.indices()[i];
          message << " " << c;
          if (c >= coarse.interface_columns) {
            const auto& [k, j] = coarse.enrichment_columns[c - coarse.interface_columns];
            message << " (subdomain " << k << ", eigenfunction " << j + 1 << ")";
          } else {
            message << " (interface node " << coarse.interface_nodes[c] << ")";
          }
        }
      }
      throw std::runtime_error(message.str());
    }
  }
  return coarse;
}

Vector CoarseSpace::apply_inverse(const Vector& r) const {
  if (dim() == 0) return Vector::Zero(r.size());
  return basis * solve(basis.transpose() * r);
}

Vector enriched_interpolate(const Partition& partition, const DofMap& dofs,
                            const std::vector<LocalSpectrum>& spectra, const Vector& u) {
  Vector result = average_interpolate(partition, dofs, u);
  const Vector remainder = u - result;
  for (const auto& spectrum : spectra) {
    if (spectrum.selected == 0) continue;
    const auto& local_dofs = dofs.subdomain_dofs[spectrum.subdomain];
    Vector local(local_dofs.size());
    for (std::size_t i = 0; i < local_dofs.size(); ++i) local[i] = remainder[local_dofs[i]];
    const Vector projected = spectral_projection(spectrum, local);
    for (std::size_t i = 0; i < local_dofs.size(); ++i) result[local_dofs[i]] += projected[i];
  }
  return result;
}

}  // namespace aas
