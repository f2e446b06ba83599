#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "aas/mesh.hpp"

using namespace aas;

TEST_SUITE("mesh") {

TEST_CASE("small meshes have the forced counts") {
  const auto mesh2 = build_mesh(2);
  CHECK(mesh2.node_count() == 9);
  CHECK(mesh2.triangle_count() == 8);
  int interior = 0;
  for (Index v = 0; v < mesh2.node_count(); ++v) {
    if (!mesh2.node_on_physical_boundary[v]) ++interior;
  }
  CHECK(interior == 1);

  const auto mesh3 = build_mesh(3);
  CHECK(mesh3.node_count() == 16);
  CHECK(mesh3.triangle_count() == 18);
  interior = 0;
  for (Index v = 0; v < mesh3.node_count(); ++v) {
    if (!mesh3.node_on_physical_boundary[v]) ++interior;
  }
  CHECK(interior == 4);
}

TEST_CASE("triangles are positively oriented and tessellate the square") {
  for (const Index n : {2, 5, 8}) {
    const auto mesh = build_mesh(n);
    Real total = 0;
    for (Index t = 0; t < mesh.triangle_count(); ++t) {
      const Real area = mesh.signed_area(t);
      CHECK(area > 0);
      CHECK(area == doctest::Approx(mesh.h * mesh.h / 2).epsilon(1e-14));
      total += area;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mesh is conforming: interior edges shared by 2 triangles, boundary by 1") {
  const auto mesh = build_mesh(4);
  std::map<std::pair<Index, Index>, int> edge_count;
  for (Index t = 0; t < mesh.triangle_count(); ++t) {
    for (int e = 0; e < 3; ++e) {
      Index a = mesh.triangles(t, e);
      Index b = mesh.triangles(t, (e + 1) % 3);
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  for (const auto& [edge, count] : edge_count) {
    const bool a_bnd = mesh.node_on_physical_boundary[edge.first];
    const bool b_bnd = mesh.node_on_physical_boundary[edge.second];
    // An edge lies on the outer boundary iff both ends do and it is axis-aligned
    // along the same side; for this mesh, checking the count directly:
    CHECK((count == 1 || count == 2));
    if (count == 1) {
      CHECK(a_bnd);
      CHECK(b_bnd);
    }
  }
}

TEST_CASE("rejects degenerate inputs") {
  CHECK_THROWS(build_mesh(1));
  CHECK_THROWS(build_mesh(0));
  const auto mesh = build_mesh(4);
  CHECK_THROWS(build_partition(mesh, 3));
  CHECK_THROWS(build_partition(mesh, 0));
}

TEST_CASE("partition of n=4 into 2x2 subdomains") {
  const auto mesh = build_mesh(4);
  const auto part = build_partition(mesh, 2);
  CHECK(part.count() == 4);
  for (Index k = 0; k < 4; ++k) {
    CHECK(part.subdomain_triangles[k].size() == 8);
    // H/h = 2: every triangle touches the subdomain boundary.
    CHECK(part.layer_triangles[k].size() == 8);
  }

  // Interface nodes: the interior cross x=1/2 or y=1/2, 5 nodes.
  std::set<Index> interface;
  for (Index v = 0; v < mesh.node_count(); ++v) {
    if (part.node_class[v] == NodeClass::Interface) interface.insert(v);
  }
  std::set<Index> expected;
  for (Index j = 1; j <= 3; ++j) {
    for (Index i = 1; i <= 3; ++i) {
      if (i == 2 || j == 2) expected.insert(mesh.node_index(i, j));
    }
  }
  CHECK(interface == expected);
}

TEST_CASE("layer and interior triangle counts add up") {
  const auto mesh = build_mesh(6);
  const auto part = build_partition(mesh, 2);
  const Index m = part.cells_per_side;
  for (Index k = 0; k < part.count(); ++k) {
    const Index interior =
        static_cast<Index>(part.subdomain_triangles[k].size() - part.layer_triangles[k].size());
    CHECK(interior == 2 * (m - 2) * (m - 2));  // = 2 here
    CHECK(static_cast<Index>(part.subdomain_triangles[k].size()) == 2 * m * m);
  }
}

TEST_CASE("interface nodes sit on 2 to 4 subdomain boundaries") {
  const auto mesh = build_mesh(9);
  const auto part = build_partition(mesh, 3);
  std::vector<int> appearances(mesh.node_count(), 0);
  for (Index k = 0; k < part.count(); ++k) {
    for (Index v : part.subdomain_boundary_nodes[k]) ++appearances[v];
  }
  for (Index v = 0; v < mesh.node_count(); ++v) {
    if (part.node_class[v] == NodeClass::Interface) {
      CHECK(appearances[v] >= 2);
      CHECK(appearances[v] <= 4);
    }
  }
  // Outer-boundary nodes on subdomain edges belong to the boundary sets of
  // their adjacent subdomains.
  CHECK(appearances[mesh.node_index(3, 0)] == 2);  // corner of two subdomains on the bottom edge
  CHECK(appearances[mesh.node_index(1, 0)] == 1);
  CHECK(appearances[mesh.node_index(0, 0)] == 1);
}

TEST_CASE("node classes partition the nodes consistently") {
  const auto mesh = build_mesh(12);
  const auto part = build_partition(mesh, 3);
  for (Index v = 0; v < mesh.node_count(); ++v) {
    switch (part.node_class[v]) {
      case NodeClass::PhysicalBoundary:
        CHECK(mesh.node_on_physical_boundary[v]);
        CHECK(part.node_subdomain[v] == -1);
        break;
      case NodeClass::Interface:
        CHECK(!mesh.node_on_physical_boundary[v]);
        CHECK(part.node_subdomain[v] == -1);
        break;
      case NodeClass::SubdomainInterior:
        CHECK(part.node_subdomain[v] >= 0);
        break;
    }
  }
  // Interior node lists are consistent with the classification.
  for (Index k = 0; k < part.count(); ++k) {
    for (Index v : part.subdomain_interior_nodes[k]) {
      CHECK(part.node_class[v] == NodeClass::SubdomainInterior);
      CHECK(part.node_subdomain[v] == k);
    }
    CHECK(part.subdomain_interior_nodes[k].size() ==
          static_cast<std::size_t>((part.cells_per_side - 1) * (part.cells_per_side - 1)));
    CHECK(part.subdomain_boundary_nodes[k].size() ==
          static_cast<std::size_t>(4 * part.cells_per_side));
  }
}

TEST_CASE("construction is deterministic") {
  const auto mesh_a = build_mesh(6);
  const auto mesh_b = build_mesh(6);
  CHECK(mesh_a.nodes == mesh_b.nodes);
  CHECK(mesh_a.triangles == mesh_b.triangles);
  const auto part_a = build_partition(mesh_a, 3);
  const auto part_b = build_partition(mesh_b, 3);
  CHECK(part_a.triangle_subdomain == part_b.triangle_subdomain);
  CHECK(part_a.subdomain_boundary_nodes == part_b.subdomain_boundary_nodes);
  CHECK(part_a.layer_triangles == part_b.layer_triangles);
}

}  // TEST_SUITE
