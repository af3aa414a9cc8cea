#pragma once

#include <vector>

#include "dce/mesh.h"

namespace dce {

// Side of the symmetry line a halfedge belongs to: H1, H2, or fixed by the
// reflection (Hs).
enum class Side : unsigned char { first, second, fixed };

enum class EdgeLabel : unsigned char { first, second, parallel, perpendicular };
enum class FaceLabel : unsigned char { first, second, sym_triangle, sym_quad };

const char* to_string(EdgeLabel label);
const char* to_string(FaceLabel label);

// Orientation-reversing involution on the halfedges of a closed mesh, plus the
// halfedge partition it induces. Edge and face labels are derived on demand.
//
// Parked halfedges are mapped to themselves and carry no meaningful side.
class Reflection {
 public:
  Reflection() = default;
  Reflection(std::vector<Index> map, std::vector<Side> side) : r_(std::move(map)), side_(std::move(side)) {}

  Index operator()(Index h) const { return r_[h]; }
  Side side(Index h) const { return side_[h]; }
  Index size() const { return static_cast<Index>(r_.size()); }

  void set_pair(Index a, Index b) {
    r_[a] = b;
    r_[b] = a;
  }
  void set_fixed(Index h) {
    r_[h] = h;
    side_[h] = Side::fixed;
  }
  void set_side(Index h, Side s) { side_[h] = s; }

  EdgeLabel edge_label(const Mesh& mesh, Index h) const;
  FaceLabel face_label(const Mesh& mesh, Index h) const;
  bool face_is_symmetric(const Mesh& mesh, Index h) const;

  // Induced map on vertex ids.
  std::vector<Index> vertex_map(const Mesh& mesh) const;

 private:
  std::vector<Index> r_;
  std::vector<Side> side_;
};

// Full scan of the reflection-map conditions and the halfedge partition.
std::vector<Diagnostic> validate_reflection(const Mesh& mesh, const Reflection& refl);

}  // namespace dce
