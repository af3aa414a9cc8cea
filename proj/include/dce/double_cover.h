#pragma once

#include <span>
#include <vector>

#include "dce/mesh.h"
#include "dce/metric.h"
#include "dce/reflection.h"

namespace dce {

// Closed symmetric mesh obtained by gluing a mesh with boundary to its mirror
// image along the boundary.
//
// Halfedge numbering: cover halfedge k < n_copy is interior input halfedge
// source[k] (copy 1); n_copy + k is its mirror (copy 2). Vertex numbering:
// input vertex ids are kept for copy 1 and the boundary; interior vertices of
// copy 2 follow from n_input_vertices on.
struct DoubleCover {
  Mesh mesh;
  Reflection refl;
  Index n_input_vertices = 0;
  Index n_copy = 0;
  std::vector<Index> source;  // size n_copy
  std::vector<Index> vertex_mirror;
  std::vector<char> input_boundary_vertex;  // size n_input_vertices
};

// Builds the cover, mirrored lengths, and cover targets. `theta_hat` holds the
// input targets: full angle sums at interior vertices and boundary angles
// (π − κ̂) at boundary vertices; boundary targets are doubled on the cover.
// Throws InputError when the input has no boundary.
struct CoverProblem {
  DoubleCover cover;
  PennerMetric metric;
  std::vector<double> theta_hat;
};
CoverProblem build_double_cover(const Mesh& input, const PennerMetric& input_metric,
                                std::span<const double> theta_hat);

// Symmetric Delaunay retriangulation of a cover; thin wrapper over
// make_delaunay with the cover's reflection.
FlipLog symmetric_make_delaunay(DoubleCover& cover, PennerMetric& metric, std::span<const double> u,
                                const DelaunayOptions& options = {});

// True iff u(R(v)) == u(v) and the lengths of mirrored halfedges (and quad
// diagonals) are bitwise equal.
bool is_bitwise_symmetric(const DoubleCover& cover, const PennerMetric& metric, std::span<const double> u);

// Copy-1 half of a solved cover, cut along the symmetry line. Output vertex
// ids: input ids first, then one midpoint per perpendicular edge. Edge ids
// index `edge_length`, which holds final scaled lengths.
struct RestrictedMesh {
  Mesh mesh;
  std::vector<std::vector<Index>> faces;
  std::vector<std::vector<Index>> face_edges;
  std::vector<double> edge_length;
  std::vector<double> halfedge_length;  // per output-mesh halfedge
  std::vector<double> u;                // input vertices only
  Index n_midpoints = 0;
};

// Throws TopologyError when metric or u are not symmetric within `tolerance`
// (relative for lengths, absolute for u).
RestrictedMesh restrict_to_single_cover(const DoubleCover& cover, const PennerMetric& metric,
                                        std::span<const double> u, double tolerance = 1e-12);

}  // namespace dce
