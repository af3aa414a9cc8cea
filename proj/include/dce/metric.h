#pragma once

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dce/flips.h"
#include "dce/mesh.h"
#include "dce/reflection.h"

namespace dce {

// Original (Penner) lengths, one slot per halfedge. Both halfedges of an edge
// hold the same value. The two slots of a parked pair hold the diagonal of the
// quad that owns the pair. Scaled lengths are never stored.
struct PennerMetric {
  std::vector<double> length;

  double operator[](Index h) const { return length[h]; }
  void set_edge(const Mesh& mesh, Index h, double value) {
    length[h] = value;
    length[mesh.opp(h)] = value;
  }
  // Original diagonal of the quad containing h.
  double diagonal(const Mesh& mesh, Index h) const { return length[mesh.parked_of(h)]; }
};

double scaled_length(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u, Index h);

// Scaled length of the quad diagonal joining from(h) and to(next(h)).
double scaled_diagonal(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u, Index h);

// A triangle of the virtual triangulation: every triangle face, and every quad
// split along its stored diagonal. Side k runs into vertex[k]; the corner at
// vertex[k] lies between sides k and k+1. Diagonal sides have halfedge kNone.
struct VirtualTriangle {
  std::array<Index, 3> halfedge;
  std::array<Index, 3> vertex;
  std::array<double, 3> length;
};

void for_each_virtual_triangle(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u,
                               const std::function<void(const VirtualTriangle&)>& fn);

std::vector<double> vertex_angle_sums(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u);

// Sum over all interior faces of (degree - 2)·π.
double total_angle_target(const Mesh& mesh);

// Left-hand side of the length-based Delaunay condition for the edge of h.
// Quad sides use the virtual triangle (x, next(x), diagonal).
double delaunay_value(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u, Index h);

// True for boundary edges and for the always-Delaunay symmetric types;
// otherwise delaunay_value >= 0.
bool is_delaunay(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u, Index h,
                 const Reflection* refl = nullptr);

// Smallest delaunay_value over all non-boundary edges (+inf if none).
double min_delaunay_value(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u);

// Smallest a + b - c over all sides of all virtual triangles, in scaled lengths.
double min_triangle_slack(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u);

// New original length of the edge of h after a two-triangle flip.
double ptolemy_flip_length(const Mesh& mesh, const PennerMetric& metric, Index h);

// Flip plus length update for plain triangulations.
FlipRecord flip_with_length(Mesh& mesh, PennerMetric& metric, Index h);

// Symmetric flip plus length update. Every new length is computed once and
// written to all mirrored slots, so mirrored lengths stay bitwise equal.
FlipRecord symmetric_flip_with_lengths(Mesh& mesh, Reflection& refl, PennerMetric& metric, Index h);

struct FlipCounts {
  long long standard = 0;       // (1,1,1)+(2,2,2), or plain flips without symmetry
  long long parallel = 0;       // (1,||,2) <-> (t,perp,t)
  long long triangle_quad = 0;  // (1,1,t)+(2,2,t) <-> (t,perp,q)
  long long quad_quad = 0;      // (1,1,q)+(2,2,q) <-> (q,perp,q)

  long long total() const { return standard + parallel + triangle_quad + quad_quad; }
  FlipCounts& operator+=(const FlipCounts& o) {
    standard += o.standard;
    parallel += o.parallel;
    triangle_quad += o.triangle_quad;
    quad_quad += o.quad_quad;
    return *this;
  }
};

// One symmetric operation. `mirror_edge` is kNone when the flipped edge is its
// own mirror image.
struct FlipEvent {
  FlipType type;
  bool reverse;
  Index edge;
  Index mirror_edge;
};

struct FlipLog {
  FlipCounts counts;
  std::vector<FlipEvent> events;
};

struct DelaunayOptions {
  // Negative values within eps_flip of zero count as ties: such an edge is
  // flipped only if the flip leaves a non-negative value behind.
  double eps_flip = 1e-12;
  long long flip_budget_factor = 100;
  bool record_events = false;
};

class FlipBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flips non-Delaunay edges in arbitrary (stack) order until every edge is
// Delaunay under the scaled metric. With a reflection, flips are symmetric and
// mesh, metric and u must be symmetric. Throws FlipBudgetExceeded after
// flip_budget_factor·|E| flips.
FlipLog make_delaunay(Mesh& mesh, PennerMetric& metric, std::span<const double> u, Reflection* refl = nullptr,
                      const DelaunayOptions& options = {});

}  // namespace dce
