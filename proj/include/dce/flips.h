#pragma once

#include <array>

#include "dce/mesh.h"
#include "dce/reflection.h"

namespace dce {

// Consistent symmetric flip types. Each relevant type names a reversible pair
// of configurations; `FlipRecord::reverse` tells which side the flip started
// from.
enum class FlipType : unsigned char {
  standard,       // (1,1,1)+(2,2,2)
  parallel,       // (1,||,2) <-> (t,perp,t)
  triangle_quad,  // (1,1,t)+(2,2,t) <-> (t,perp,q)
  quad_quad,      // (1,1,q)+(2,2,q) <-> (q,perp,q)
  irrelevant,     // (s,1,s) and (s,||,s): Delaunay for every symmetric metric
};

const char* to_string(FlipType type);

// Halfedge naming of a planned flip. Slots follow the layout of the
// combinatorial update table: h[0] and h[3] always end up as the new edge.
// For standard symmetric flips, `mirror` holds the names for R(e); for
// asymmetric flips only h[0..5] are used and mirror is unset.
//
// Before a forward flip the faces are (h0,h1,h2), (h3,h4,h5) and
//   triangle_quad: (h6,h7,h8)      with h6 fixed, R(h7) = h8,
//   quad_quad:     (h6,h9,h7,h8)   with h6, h7 fixed, R(h8) = h9.
// After a forward flip the faces are
//   standard/parallel: (h0,h2,h4), (h1,h3,h5)
//   triangle_quad:     (h0,h2,h4), (h1,h3,h5,h6)      h7, h8 parked
//   quad_quad:         (h0,h2,h7,h4), (h1,h3,h5,h6)   h8, h9 parked
// A reverse flip starts from the "after" layout and produces the "before" one.
struct FlipRecord {
  FlipType type = FlipType::standard;
  bool reverse = false;
  std::array<Index, 10> h{kNone, kNone, kNone, kNone, kNone, kNone, kNone, kNone, kNone, kNone};
  std::array<Index, 6> mirror{kNone, kNone, kNone, kNone, kNone, kNone};
  // Parked halfedge that keeps (forward quad_quad) or receives (reverse
  // quad_quad) the surviving quad record; kNone otherwise.
  Index kept_park = kNone;
};

// Classifies the (face, edge, face) triple at the edge of h.
// Throws TopologyError on a label triple that cannot occur in a valid
// symmetric mesh.
FlipType classify_flip(const Mesh& mesh, const Reflection& refl, Index h);

// Names the halfedges involved in the symmetric flip of the edge of h without
// modifying anything. Throws TopologyError for irrelevant types.
FlipRecord plan_symmetric_flip(const Mesh& mesh, const Reflection& refl, Index h);

// Rewires mesh and reflection according to a plan from plan_symmetric_flip.
void execute_symmetric_flip(Mesh& mesh, Reflection& refl, const FlipRecord& plan);

inline FlipRecord apply_symmetric_flip(Mesh& mesh, Reflection& refl, Index h) {
  FlipRecord plan = plan_symmetric_flip(mesh, refl, h);
  execute_symmetric_flip(mesh, refl, plan);
  return plan;
}

// Names for a plain two-triangle flip of the edge of h.
FlipRecord plan_asymmetric_flip(const Mesh& mesh, Index h);
void execute_asymmetric_flip(Mesh& mesh, const FlipRecord& plan);

// Standard intrinsic flip; both incident faces must be distinct triangles.
inline FlipRecord asymmetric_flip(Mesh& mesh, Index h) {
  FlipRecord plan = plan_asymmetric_flip(mesh, h);
  execute_asymmetric_flip(mesh, plan);
  return plan;
}

}  // namespace dce
