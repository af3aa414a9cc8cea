#include <doctest.h>

#include <algorithm>

#include "dce/generators.h"
#include "dce/mesh.h"
#include "dce/reflection.h"

using namespace dce;

namespace {

Mesh tetrahedron_mesh() {
  const std::vector<std::vector<Index>> f{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  return build_from_face_lists(f);
}

bool has_message(const std::vector<Diagnostic>& d, const std::string& text) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.message.find(text) != std::string::npos; });
}

}  // namespace

TEST_CASE("tetrahedron is a valid closed mesh") {
  const Mesh m = tetrahedron_mesh();
  CHECK(validate(m).empty());
  CHECK(m.n_halfedges() == 12);
  CHECK(m.n_faces() == 4);
  CHECK(m.n_edges() == 6);
  CHECK(m.is_closed());
  CHECK(m.euler_characteristic() == 2);
  for (Index h = 0; h < m.n_halfedges(); ++h) {
    CHECK(m.next(m.next(m.next(h))) == h);
    CHECK(m.opp(m.opp(h)) == h);
    CHECK(m.prev(m.next(h)) == h);
    // Circulating keeps the head vertex.
    CHECK(m.to(m.circulate(h)) == m.to(h));
  }
}

TEST_CASE("validate reports a fixed point of the opposite map") {
  // One triangle whose halfedges are their own opposites.
  Mesh m({1, 2, 0}, {0, 1, 2}, {1, 2, 0}, {0, 0, 0}, 3);
  CHECK(has_message(validate(m), "fixed point of opposite"));
}

TEST_CASE("double cover of a single triangle as raw permutations") {
  // Face A: 0:a->b 1:b->c 2:c->a; face B: 3:b->a 4:a->c 5:c->b.
  Mesh m({1, 2, 0, 4, 5, 3}, {3, 5, 4, 0, 2, 1}, {1, 2, 0, 0, 2, 1}, {0, 0, 0, 0, 0, 0}, 3);
  CHECK(validate(m).empty());
  CHECK(m.n_edges() == 3);
  CHECK(m.n_faces() == 2);
  CHECK(m.euler_characteristic() == 2);
}

TEST_CASE("build_from_face_lists") {
  SUBCASE("single triangle") {
    const std::vector<std::vector<Index>> f{{0, 1, 2}};
    const Mesh m = build_from_face_lists(f);
    CHECK(validate(m).empty());
    CHECK(m.n_faces() == 1);
    REQUIRE(m.boundary_loops().size() == 1);
    CHECK(m.face_degree(m.boundary_loops()[0]) == 3);
    CHECK_FALSE(m.is_closed());
    CHECK(m.euler_characteristic() == 2);
  }
  SUBCASE("two triangles") {
    const std::vector<std::vector<Index>> f{{0, 1, 2}, {0, 2, 3}};
    const Mesh m = build_from_face_lists(f);
    CHECK(validate(m).empty());
    CHECK(m.n_faces() == 2);
    CHECK(m.n_edges() == 5);
    REQUIRE(m.boundary_loops().size() == 1);
    CHECK(m.face_degree(m.boundary_loops()[0]) == 4);
  }
  SUBCASE("sphere from two triangles") {
    const std::vector<std::vector<Index>> f{{0, 1, 2}, {2, 1, 0}};
    const Mesh m = build_from_face_lists(f);
    CHECK(validate(m).empty());
    CHECK(m.is_closed());
    CHECK(m.euler_characteristic() == 2);
  }
  SUBCASE("inconsistent orientation is rejected") {
    const std::vector<std::vector<Index>> f{{0, 1, 2}, {0, 1, 3}};
    CHECK_THROWS_AS(build_from_face_lists(f), InputError);
  }
  SUBCASE("non-manifold edge is rejected") {
    const std::vector<std::vector<Index>> f{{0, 1, 2}, {1, 0, 3}, {1, 0, 4}};
    CHECK_THROWS_AS(build_from_face_lists(f), InputError);
  }
  SUBCASE("degenerate face is rejected") {
    const std::vector<std::vector<Index>> f{{0, 0, 2}};
    CHECK_THROWS_AS(build_from_face_lists(f), InputError);
  }
}

TEST_CASE("build_from_glued_faces supports loops") {
  // One-vertex torus: a square with sides a b a^-1 b^-1 split by a diagonal c.
  const std::vector<std::vector<Index>> faces{{0, 0, 0}, {0, 0, 0}};
  const std::vector<std::vector<Index>> ids{{0, 1, 2}, {2, 0, 1}};
  std::vector<std::vector<Index>> sides;
  const Mesh m = build_from_glued_faces(faces, ids, 1, &sides);
  CHECK(validate(m).empty());
  CHECK(m.is_closed());
  CHECK(m.n_edges() == 3);
  CHECK(m.euler_characteristic() == 0);
  REQUIRE(sides.size() == 2);
  // Sides sharing an edge id are opposite halfedges.
  for (std::size_t k = 0; k < 3; ++k) {
    const auto k2 = std::find(ids[1].begin(), ids[1].end(), ids[0][k]) - ids[1].begin();
    CHECK(m.opp(sides[0][k]) == sides[1][k2]);
  }
}

TEST_CASE("generated meshes have the expected topology") {
  const Geometry s = geodesic_sphere(4);
  const Mesh ms = build_from_face_lists(s.faces);
  CHECK(validate(ms).empty());
  CHECK(ms.euler_characteristic() == 2);
  CHECK(ms.n_vertices() == 10 * 16 + 2);

  const Geometry d = hex_disk(3);
  const Mesh md = build_from_face_lists(d.faces);
  CHECK(validate(md).empty());
  CHECK(md.euler_characteristic() == 2);  // boundary loop counts as a face
  CHECK(md.boundary_loops().size() == 1);

  for (int g = 1; g <= 3; ++g) {
    const Geometry t = genus_slab(g, 2);
    const Mesh mt = build_from_face_lists(t.faces);
    CHECK(validate(mt).empty());
    CHECK(mt.is_closed());
    CHECK(mt.euler_characteristic() == 2 - 2 * g);
  }
}
