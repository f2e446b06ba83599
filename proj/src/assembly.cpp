#include "aas/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace aas {

DofMap build_dof_map(const StructuredMesh& mesh, const Partition& partition) {
  DofMap dofs;
  dofs.node_to_dof.assign(mesh.node_count(), -1);
  for (Index v = 0; v < mesh.node_count(); ++v) {
    if (!mesh.node_on_physical_boundary[v]) {
      dofs.node_to_dof[v] = static_cast<Index>(dofs.free_nodes.size());
      dofs.free_nodes.push_back(v);
    }
  }
  dofs.subdomain_dofs.resize(partition.count());
  for (Index k = 0; k < partition.count(); ++k) {
    for (Index v : partition.subdomain_interior_nodes[k]) {
      dofs.subdomain_dofs[k].push_back(dofs.node_to_dof[v]);
    }
  }
  return dofs;
}

Eigen::Matrix3d element_stiffness(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                  const Eigen::Vector2d& p2, Real alpha) {
  const Real area2 = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
  Eigen::Vector3d b, c;
  b << p1.y() - p2.y(), p2.y() - p0.y(), p0.y() - p1.y();
  c << p2.x() - p1.x(), p0.x() - p2.x(), p1.x() - p0.x();
  return alpha / (Real(2) * area2) * (b * b.transpose() + c * c.transpose());
}

namespace {

Eigen::Matrix3d triangle_stiffness(const StructuredMesh& mesh, Index t, Real alpha) {
  return element_stiffness(mesh.node(mesh.triangles(t, 0)), mesh.node(mesh.triangles(t, 1)),
                           mesh.node(mesh.triangles(t, 2)), alpha);
}

template <class Accumulate>
void for_each_element_entry(const StructuredMesh& mesh, Index t, Real alpha,
                            Accumulate&& accumulate) {
  const Eigen::Matrix3d k_elem = triangle_stiffness(mesh, t, alpha);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      accumulate(mesh.triangles(t, a), mesh.triangles(t, b), k_elem(a, b));
    }
  }
}

}  // namespace

SparseSymMatrix assemble_stiffness(const StructuredMesh& mesh, const CoefficientField& field,
                                   const DofMap& dofs) {
  if (field.alpha.size() != mesh.triangle_count()) {
    throw std::invalid_argument("assemble_stiffness: field does not match mesh");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(9 * mesh.triangle_count()));
  for (Index t = 0; t < mesh.triangle_count(); ++t) {
    for_each_element_entry(mesh, t, field.alpha[t], [&](Index vi, Index vj, Real value) {
      const Index di = dofs.node_to_dof[vi];
      const Index dj = dofs.node_to_dof[vj];
      if (di >= 0 && dj >= 0) triplets.emplace_back(di, dj, value);
    });
  }
  SparseSymMatrix out;
  out.matrix.resize(dofs.free_count(), dofs.free_count());
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  out.dof_to_node = dofs.free_nodes;
  return out;
}

SparseMatrix assemble_stiffness_neumann(const StructuredMesh& mesh,
                                        const CoefficientField& field) {
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(9 * mesh.triangle_count()));
  for (Index t = 0; t < mesh.triangle_count(); ++t) {
    for_each_element_entry(mesh, t, field.alpha[t], [&](Index vi, Index vj, Real value) {
      triplets.emplace_back(vi, vj, value);
    });
  }
  SparseMatrix matrix(mesh.node_count(), mesh.node_count());
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  matrix.makeCompressed();
  return matrix;
}

Vector assemble_load(const StructuredMesh& mesh, const DofMap& dofs,
                     const std::function<Real(Real, Real)>& f) {
  Vector load = Vector::Zero(dofs.free_count());
  for (Index t = 0; t < mesh.triangle_count(); ++t) {
    const Eigen::Vector2d p0 = mesh.node(mesh.triangles(t, 0));
    const Eigen::Vector2d p1 = mesh.node(mesh.triangles(t, 1));
    const Eigen::Vector2d p2 = mesh.node(mesh.triangles(t, 2));
    const Real area = std::abs(mesh.signed_area(t));
    const Eigen::Vector2d m01 = Real(0.5) * (p0 + p1);
    const Eigen::Vector2d m12 = Real(0.5) * (p1 + p2);
    const Eigen::Vector2d m20 = Real(0.5) * (p2 + p0);
    const Real f01 = f(m01.x(), m01.y());
    const Real f12 = f(m12.x(), m12.y());
    const Real f20 = f(m20.x(), m20.y());
    // Hat of vertex i is 1/2 on its two adjacent edge midpoints, 0 opposite.
    const Eigen::Vector3d local{(f01 + f20) * Real(0.5), (f01 + f12) * Real(0.5),
                                (f12 + f20) * Real(0.5)};
    for (int a = 0; a < 3; ++a) {
      const Index d = dofs.node_to_dof[mesh.triangles(t, a)];
      if (d >= 0) load[d] += area / Real(3) * local[a];
    }
  }
  return load;
}

LocalForms assemble_local(const StructuredMesh& mesh, const Partition& partition,
                          const CoefficientField& field, const CoefficientExtrema& extrema,
                          Index k, CoarseSpaceType type) {
  const auto& interior = partition.subdomain_interior_nodes[k];
  if (interior.empty()) {
    throw std::invalid_argument("assemble_local: subdomain " + std::to_string(k) +
                                " has no interior degrees of freedom");
  }
  std::vector<Index> node_to_local(mesh.node_count(), -1);
  for (std::size_t i = 0; i < interior.size(); ++i) {
    node_to_local[interior[i]] = static_cast<Index>(i);
  }
  std::unordered_set<Index> layer(partition.layer_triangles[k].begin(),
                                  partition.layer_triangles[k].end());

  const Index dim = static_cast<Index>(interior.size());
  LocalForms forms;
  forms.a = Matrix::Zero(dim, dim);
  forms.b = Matrix::Zero(dim, dim);

  for (Index t : partition.subdomain_triangles[k]) {
    const Real alpha_a = field.alpha[t];
    Real alpha_b = 0;
    switch (type) {
      case CoarseSpaceType::Subd:
        alpha_b = extrema.min_subdomain[k];
        break;
      case CoarseSpaceType::Layer:
        alpha_b = layer.count(t) ? extrema.min_layer[k] : field.alpha[t];
        break;
    }
    const Eigen::Matrix3d k_a = triangle_stiffness(mesh, t, alpha_a);
    const Eigen::Matrix3d k_b = triangle_stiffness(mesh, t, alpha_b);
    for (int a = 0; a < 3; ++a) {
      const Index ia = node_to_local[mesh.triangles(t, a)];
      if (ia < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const Index ib = node_to_local[mesh.triangles(t, b)];
        if (ib < 0) continue;
        forms.a(ia, ib) += k_a(a, b);
        forms.b(ia, ib) += k_b(a, b);
      }
    }
  }
  return forms;
}

SparseMatrix principal_submatrix(const SparseMatrix& matrix, const std::vector<Index>& dofs) {
  std::vector<Index> global_to_local(matrix.rows(), -1);
  for (std::size_t i = 0; i < dofs.size(); ++i) global_to_local[dofs[i]] = static_cast<Index>(i);

  std::vector<Triplet> triplets;
  for (std::size_t j = 0; j < dofs.size(); ++j) {
    for (SparseMatrix::InnerIterator it(matrix, dofs[j]); it; ++it) {
      const Index i = global_to_local[it.row()];
      if (i >= 0) triplets.emplace_back(i, static_cast<Index>(j), it.value());
    }
  }
  SparseMatrix block(static_cast<Index>(dofs.size()), static_cast<Index>(dofs.size()));
  block.setFromTriplets(triplets.begin(), triplets.end());
  block.makeCompressed();
  return block;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& matrix) {
  Index nnz_lower = 0;
  for (Index j = 0; j < matrix.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(matrix, j); it; ++it) {
      if (it.row() >= it.col()) ++nnz_lower;
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << matrix.rows() << " " << matrix.cols() << " " << nnz_lower << "\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out.precision(17);
  for (Index j = 0; j < matrix.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(matrix, j); it; ++it) {
      if (it.row() >= it.col()) {
        out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
      }
    }
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace aas
