#pragma once

#include <span>
#include <string>
#include <vector>

#include "dce/types.h"

namespace dce {

// Permutation-based combinatorial polygon mesh.
//
// Connectivity is stored as three maps over halfedges: next (N), opposite (O)
// and the head vertex `to`. Faces are orbits of N, edges are orbits of O and
// vertices are orbits of the circulator C(h) = N^-1(O(h)); all halfedges of a
// C-orbit share the same head vertex. Boundary loops are ordinary N-orbits
// whose halfedges carry the boundary flag.
//
// Quad faces carry a "parked" halfedge pair: two halfedges removed from the
// active connectivity that are kept for reuse when the quad is split again.
// Parked halfedges are each other's opposite, point to themselves under N and
// are skipped by every orbit iteration. For every halfedge of a quad face,
// parked_of() returns one of the two parked halfedges of that quad.
//
// Element ids: an edge is identified by the smaller index of its two
// halfedges, a face by the smallest index in its N-orbit. Vertices keep
// explicit ids which never change under flips.
class Mesh {
 public:
  Mesh() = default;

  // Raw construction from permutations. `to` gives the head vertex of every
  // halfedge, `boundary` flags halfedges of boundary loops. No validation is
  // performed; call validate() on the result.
  Mesh(std::vector<Index> next, std::vector<Index> opp, std::vector<Index> to,
       std::vector<char> boundary, Index n_vertices);

  Index n_halfedges() const { return static_cast<Index>(next_.size()); }
  Index n_vertices() const { return n_vertices_; }

  Index next(Index h) const { return next_[h]; }
  Index prev(Index h) const { return prev_[h]; }
  Index opp(Index h) const { return opp_[h]; }
  Index to(Index h) const { return to_[h]; }
  Index from(Index h) const { return to_[opp_[h]]; }
  Index circulate(Index h) const { return prev_[opp_[h]]; }

  bool is_parked(Index h) const { return parked_[h] != 0; }
  bool is_boundary(Index h) const { return boundary_[h] != 0; }
  bool is_boundary_edge(Index h) const { return is_boundary(h) || is_boundary(opp(h)); }
  bool is_closed() const;

  Index edge(Index h) const { return h < opp_[h] ? h : opp_[h]; }
  Index face(Index h) const;
  int face_degree(Index h) const;
  Index parked_of(Index h) const { return quad_park_[h]; }

  // Canonical representatives of active elements, in increasing order.
  std::vector<Index> edges() const;
  std::vector<Index> faces() const;            // interior faces only
  std::vector<Index> boundary_loops() const;
  Index n_edges() const;
  Index n_faces() const;                       // interior faces, quads count once
  int euler_characteristic() const;            // V - E + F including boundary loops as faces

  // One halfedge pointing into each vertex (kNone for isolated ids).
  std::vector<Index> vertex_halfedges() const;

  // --- Low-level editing. These break invariants until the caller restores
  // them; flips are the only intended users.
  void set_next(Index h, Index n) {
    next_[h] = n;
    prev_[n] = h;
  }
  void set_opp(Index a, Index b) {
    opp_[a] = b;
    opp_[b] = a;
  }
  void set_to(Index h, Index v) { to_[h] = v; }
  void set_parked_of(Index h, Index p) { quad_park_[h] = p; }
  // Removes the pair (a, b) from the active connectivity.
  void park(Index a, Index b);
  // Re-activates a parked halfedge; the caller rewires next/opp/to.
  void unpark(Index h) { parked_[h] = 0; }

 private:
  std::vector<Index> next_;
  std::vector<Index> prev_;
  std::vector<Index> opp_;
  std::vector<Index> to_;
  std::vector<char> boundary_;
  std::vector<char> parked_;
  std::vector<Index> quad_park_;
  Index n_vertices_ = 0;
};

struct Diagnostic {
  std::string message;
  Index halfedge = kNone;
};

// Checks every CombinatorialMesh invariant. Empty result iff the mesh is valid.
std::vector<Diagnostic> validate(const Mesh& mesh);

// Builds a halfedge mesh from oriented vertex cycles. Unmatched sides become
// boundary loops. Throws InputError on non-manifold or inconsistently oriented
// input.
Mesh build_from_face_lists(std::span<const std::vector<Index>> faces, Index n_vertices = kNone);

// Builds a mesh from polygons whose sides carry explicit edge ids; a side
// `faces[f][k] -> faces[f][k+1]` belongs to edge `face_edges[f][k]`. Each edge
// id must occur once (boundary edge) or twice with opposite orientation.
// Unlike build_from_face_lists this supports multi-edges and loops.
// `halfedge_of_side`, if given, receives the halfedge index of every side.
Mesh build_from_glued_faces(std::span<const std::vector<Index>> faces,
                            std::span<const std::vector<Index>> face_edges, Index n_vertices,
                            std::vector<std::vector<Index>>* halfedge_of_side = nullptr);

}  // namespace dce
