#include "aas/mesh.hpp"

#include <stdexcept>
#include <string>

namespace aas {

Real StructuredMesh::signed_area(Index t) const {
  const Eigen::Vector2d a = node(triangles(t, 0));
  const Eigen::Vector2d b = node(triangles(t, 1));
  const Eigen::Vector2d c = node(triangles(t, 2));
  return Real(0.5) * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

StructuredMesh build_mesh(Index n) {
  if (n < 2) {
    throw std::invalid_argument("build_mesh: need at least 2 subdivisions per side, got " +
                                std::to_string(n));
  }

  StructuredMesh mesh;
  mesh.n = n;
  mesh.h = Real(1) / Real(n);

  const Index nodes_per_side = n + 1;
  mesh.nodes.resize(nodes_per_side * nodes_per_side, 2);
  mesh.node_on_physical_boundary.assign(nodes_per_side * nodes_per_side, false);
  for (Index j = 0; j <= n; ++j) {
    for (Index i = 0; i <= n; ++i) {
      const Index v = mesh.node_index(i, j);
      mesh.nodes(v, 0) = Real(i) * mesh.h;
      mesh.nodes(v, 1) = Real(j) * mesh.h;
      mesh.node_on_physical_boundary[v] = (i == 0 || i == n || j == 0 || j == n);
    }
  }

  // Two triangles per cell, split along the bottom-left/top-right diagonal.
  mesh.triangles.resize(2 * n * n, 3);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Index bl = mesh.node_index(i, j);
      const Index br = mesh.node_index(i + 1, j);
      const Index tl = mesh.node_index(i, j + 1);
      const Index tr = mesh.node_index(i + 1, j + 1);
      const Index t = 2 * (j * n + i);
      mesh.triangles.row(t) << bl, br, tr;      // lower-right triangle
      mesh.triangles.row(t + 1) << bl, tr, tl;  // upper-left triangle
    }
  }
  return mesh;
}

Partition build_partition(const StructuredMesh& mesh, Index n_side) {
  if (n_side < 1) {
    throw std::invalid_argument("build_partition: need at least 1 subdomain per side");
  }
  if (mesh.n % n_side != 0) {
    throw std::invalid_argument("build_partition: mesh subdivisions (" + std::to_string(mesh.n) +
                                ") must be divisible by subdomains per side (" +
                                std::to_string(n_side) + ")");
  }

  Partition part;
  part.n_side = n_side;
  part.H = Real(1) / Real(n_side);
  part.cells_per_side = mesh.n / n_side;
  const Index m = part.cells_per_side;
  const Index count = n_side * n_side;

  part.subdomain_triangles.resize(count);
  part.subdomain_boundary_nodes.resize(count);
  part.subdomain_interior_nodes.resize(count);
  part.layer_triangles.resize(count);

  part.triangle_subdomain.resize(mesh.triangle_count());
  for (Index t = 0; t < mesh.triangle_count(); ++t) {
    const Index cell = t / 2;
    const Index ci = cell % mesh.n;
    const Index cj = cell / mesh.n;
    const Index k = part.subdomain_index(ci / m, cj / m);
    part.triangle_subdomain[t] = k;
    part.subdomain_triangles[k].push_back(t);
  }

  // Node classification.  A node at grid coordinate (i, j) lies on a
  // subdomain boundary line exactly when i or j is a multiple of m.
  part.node_class.resize(mesh.node_count());
  part.node_subdomain.assign(mesh.node_count(), -1);
  for (Index j = 0; j <= mesh.n; ++j) {
    for (Index i = 0; i <= mesh.n; ++i) {
      const Index v = mesh.node_index(i, j);
      if (mesh.node_on_physical_boundary[v]) {
        part.node_class[v] = NodeClass::PhysicalBoundary;
      } else if (i % m == 0 || j % m == 0) {
        part.node_class[v] = NodeClass::Interface;
      } else {
        part.node_class[v] = NodeClass::SubdomainInterior;
        part.node_subdomain[v] = part.subdomain_index(i / m, j / m);
      }
    }
  }

  for (Index k = 0; k < count; ++k) {
    const Index i0 = part.subdomain_x(k) * m;
    const Index j0 = part.subdomain_y(k) * m;
    auto& boundary = part.subdomain_boundary_nodes[k];
    auto& interior = part.subdomain_interior_nodes[k];
    for (Index j = j0; j <= j0 + m; ++j) {
      for (Index i = i0; i <= i0 + m; ++i) {
        const bool on_edge = (i == i0 || i == i0 + m || j == j0 || j == j0 + m);
        (on_edge ? boundary : interior).push_back(mesh.node_index(i, j));
      }
    }

    // Boundary layer: triangles of the subdomain with a vertex on its boundary.
    for (Index t : part.subdomain_triangles[k]) {
      bool touches = false;
      for (int v = 0; v < 3 && !touches; ++v) {
        const Index node = mesh.triangles(t, v);
        const Index i = node % (mesh.n + 1);
        const Index j = node / (mesh.n + 1);
        touches = (i == i0 || i == i0 + m || j == j0 || j == j0 + m);
      }
      if (touches) part.layer_triangles[k].push_back(t);
    }
  }
  return part;
}

}  // namespace aas
