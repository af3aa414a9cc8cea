#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dce/generators.h"
#include "dce/mesh.h"
#include "dce/metric.h"

namespace dce::test {

// Per-halfedge lengths given by a function of the endpoint ids.
inline PennerMetric metric_from(const Mesh& mesh, const std::function<double(Index, Index)>& len) {
  PennerMetric m;
  m.length.assign(mesh.n_halfedges(), 0.0);
  for (Index h = 0; h < mesh.n_halfedges(); ++h) {
    const Index a = std::min(mesh.from(h), mesh.to(h));
    const Index b = std::max(mesh.from(h), mesh.to(h));
    m.length[h] = len(a, b);
  }
  return m;
}

inline Index find_halfedge(const Mesh& mesh, Index a, Index b) {
  for (Index h = 0; h < mesh.n_halfedges(); ++h)
    if (!mesh.is_parked(h) && mesh.from(h) == a && mesh.to(h) == b) return h;
  return kNone;
}

// Scaled lengths of all edges, sorted.
inline std::vector<double> sorted_scaled_lengths(const Mesh& mesh, const PennerMetric& metric,
                                                 std::span<const double> u) {
  std::vector<double> out;
  for (Index e : mesh.edges()) out.push_back(scaled_length(mesh, metric, u, e));
  std::sort(out.begin(), out.end());
  return out;
}

inline double max_relative_difference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / std::max(std::abs(a[i]), 1e-300));
  return m;
}

// Jittered small sphere with Euclidean lengths.
struct SmallMesh {
  Mesh mesh;
  PennerMetric metric;
};
inline SmallMesh small_sphere(std::uint64_t seed, int frequency = 2, double amplitude = 0.15) {
  Geometry g = geodesic_sphere(frequency);
  Rng rng(seed);
  jitter(g, amplitude / frequency, rng);
  SmallMesh s;
  s.mesh = build_from_face_lists(g.faces);
  s.metric = metric_from_positions(s.mesh, g.positions);
  return s;
}

// Moves u from u0 to u1 in `substeps` equal steps, restoring the Delaunay
// property after each; the reference against which a single make_delaunay at
// u1 is compared.
inline void sequential_evolution(Mesh& mesh, PennerMetric& metric, std::span<const double> u0,
                                 std::span<const double> u1, int substeps) {
  std::vector<double> u(u0.begin(), u0.end());
  for (int s = 1; s <= substeps; ++s) {
    const double t = static_cast<double>(s) / substeps;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = (1.0 - t) * u0[i] + t * u1[i];
    make_delaunay(mesh, metric, u);
  }
}

}  // namespace dce::test
