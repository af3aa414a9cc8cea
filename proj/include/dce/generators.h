#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dce/mesh.h"
#include "dce/metric.h"

namespace dce {

// Portable uniform sampling on top of mt19937_64 (the distribution classes of
// the standard library are not reproducible across implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Open interval (lo, hi).
  double open_uniform(double lo, double hi) {
    double x;
    do x = uniform(lo, hi);
    while (x <= lo || x >= hi);
    return x;
  }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

struct Geometry {
  std::vector<std::array<double, 3>> positions;
  std::vector<std::vector<Index>> faces;
};

Geometry tetrahedron();
Geometry octahedron();
Geometry icosahedron();
// Icosahedron with every face split into frequency² triangles, on the unit
// sphere: 10·frequency² + 2 vertices.
Geometry geodesic_sphere(int frequency);
// Regular planar hexagon of unit-length equilateral triangles with `rings`
// rings around the centre: 3·rings·(rings + 1) + 1 vertices.
Geometry hex_disk(int rings);
// Planar n×n grid of unit squares, each split by a diagonal.
Geometry square_grid(int n);
// Surface of a 1-thick slab of (2g+1)×3 unit cubes with g square holes,
// every cube face subdivided into `subdivision`² squares of two triangles.
Geometry genus_slab(int genus, int subdivision);

// Moves every vertex by a uniform offset in [-amplitude, amplitude]³.
void jitter(Geometry& geometry, double amplitude, Rng& rng);
// Scales every vertex to radius 1 + uniform(-amplitude, amplitude).
void jitter_radius(Geometry& geometry, double amplitude, Rng& rng);

// Euclidean edge lengths. Throws InputError for zero-length edges.
PennerMetric metric_from_positions(const Mesh& mesh, const std::vector<std::array<double, 3>>& positions);

// Generated problem with targets already satisfying Gauss-Bonnet. Boundary
// targets are boundary angles π − κ̂.
struct GeneratedProblem {
  Geometry geometry;
  std::vector<double> theta_hat;
  double curvature_range = 0.0;  // max κ̂ − min κ̂ over the randomized vertices
  std::string kind;
};

// Θ̂ uniform in (π, 3π), normalized to Σ Θ̂ = π·|F|.
GeneratedProblem sphere_random_angles(std::uint64_t seed, int frequency = 10);
// Interior Θ̂ = 2π. Boundary κ̂ uniform in (−r, r) with r uniform in (0, π)
// per seed, normalized to Σ κ̂ = 2π.
GeneratedProblem disk_random_boundary(std::uint64_t seed, int rings = 18);
// Genus-g slab, jittered, with one cone of angle 2π(2g − 1) and Θ̂ = 2π elsewhere.
GeneratedProblem single_cone(int genus, std::uint64_t seed, int subdivision = 3);

// Shifts values towards the bounds (lo, hi) so that they sum to `target`,
// moving each one in proportion to its distance from the bound it moves
// towards. Values stay strictly inside the bounds whenever
// n·lo < target < n·hi.
void normalize_sum(std::vector<double>& values, double target, double lo, double hi);

}  // namespace dce
