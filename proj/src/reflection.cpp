#include "dce/reflection.h"

#include <string>

namespace dce {

const char* to_string(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::first: return "1";
    case EdgeLabel::second: return "2";
    case EdgeLabel::parallel: return "parallel";
    case EdgeLabel::perpendicular: return "perp";
  }
  return "?";
}

const char* to_string(FaceLabel label) {
  switch (label) {
    case FaceLabel::first: return "1";
    case FaceLabel::second: return "2";
    case FaceLabel::sym_triangle: return "t";
    case FaceLabel::sym_quad: return "q";
  }
  return "?";
}

EdgeLabel Reflection::edge_label(const Mesh& mesh, Index h) const {
  const Index o = mesh.opp(h);
  if (r_[h] == o) return EdgeLabel::parallel;
  if (side_[h] == Side::fixed) return EdgeLabel::perpendicular;
  return side_[h] == Side::first ? EdgeLabel::first : EdgeLabel::second;
}

bool Reflection::face_is_symmetric(const Mesh& mesh, Index h) const {
  const Index target = r_[h];
  Index x = h;
  do {
    if (x == target) return true;
    x = mesh.next(x);
  } while (x != h);
  return false;
}

FaceLabel Reflection::face_label(const Mesh& mesh, Index h) const {
  if (face_is_symmetric(mesh, h)) return mesh.face_degree(h) == 4 ? FaceLabel::sym_quad : FaceLabel::sym_triangle;
  return side_[h] == Side::first ? FaceLabel::first : FaceLabel::second;
}

std::vector<Index> Reflection::vertex_map(const Mesh& mesh) const {
  // R reverses orientation: the head of R(O(h)) is the image of head(h).
  std::vector<Index> out(mesh.n_vertices(), kNone);
  for (Index h = 0; h < mesh.n_halfedges(); ++h) {
    if (mesh.is_parked(h)) continue;
    out[mesh.to(h)] = mesh.to(r_[mesh.opp(h)]);
  }
  return out;
}

std::vector<Diagnostic> validate_reflection(const Mesh& mesh, const Reflection& refl) {
  std::vector<Diagnostic> out;
  const Index n = mesh.n_halfedges();
  auto report = [&](const std::string& what, Index h) {
    out.push_back({what + " at halfedge " + std::to_string(h), h});
  };
  if (refl.size() != n) {
    out.push_back({"reflection size differs from halfedge count", kNone});
    return out;
  }
  for (Index h = 0; h < n; ++h) {
    if (mesh.is_parked(h)) continue;
    const Index r = refl(h);
    if (r < 0 || r >= n || mesh.is_parked(r)) {
      report("reflection leaves the active halfedges", h);
      continue;
    }
    if (refl(r) != h) report("reflection is not an involution", h);
    if (mesh.opp(r) != refl(mesh.opp(h))) report("reflection does not commute with opposite", h);
    if (mesh.next(r) != refl(mesh.prev(h))) report("reflection does not invert next", h);
    if (mesh.is_boundary(h) != mesh.is_boundary(r)) report("reflection does not preserve the boundary", h);
    const Side s = refl.side(h);
    if ((s == Side::fixed) != (r == h)) report("fixed side label disagrees with reflection", h);
    if (s == Side::first && refl.side(r) != Side::second) report("mirror of an H1 halfedge is not in H2", h);
    if (s == Side::second && refl.side(r) != Side::first) report("mirror of an H2 halfedge is not in H1", h);
  }
  if (!out.empty()) return out;

  // Non-fixed edges and faces must lie on a single side.
  for (Index h = 0; h < n; ++h) {
    if (mesh.is_parked(h)) continue;
    const Index o = mesh.opp(h);
    const bool edge_fixed = refl(h) == o || refl(h) == h;
    if (!edge_fixed && refl.side(h) != refl.side(o)) report("edge halfedges on different sides", h);
    if (refl(h) == h && refl(o) != o) report("perpendicular edge with a non-fixed halfedge", h);
    if (!refl.face_is_symmetric(mesh, h) && refl.side(mesh.next(h)) != refl.side(h))
      report("face halfedges on different sides", h);
  }
  if (!out.empty()) return out;

  // Symmetric faces: triangles have one fixed halfedge, quads two opposite ones.
  for (Index f : mesh.faces()) {
    if (!refl.face_is_symmetric(mesh, f)) continue;
    int fixed = 0;
    Index x = f;
    do {
      if (refl(x) == x) ++fixed;
      x = mesh.next(x);
    } while (x != f);
    const int degree = mesh.face_degree(f);
    if (degree == 3 && fixed != 1) report("symmetric triangle without exactly one fixed halfedge", f);
    if (degree == 4 && fixed != 2) report("symmetric quad without two fixed halfedges", f);
  }

  // Label compatibility of every (face, edge, face) triple.
  for (Index e : mesh.edges()) {
    const Index o = mesh.opp(e);
    const EdgeLabel el = refl.edge_label(mesh, e);
    const FaceLabel fa = refl.face_label(mesh, e);
    const FaceLabel fb = refl.face_label(mesh, o);
    const bool sa = fa == FaceLabel::sym_triangle || fa == FaceLabel::sym_quad;
    const bool sb = fb == FaceLabel::sym_triangle || fb == FaceLabel::sym_quad;
    switch (el) {
      case EdgeLabel::perpendicular:
        if (!sa || !sb) report("perpendicular edge next to a non-symmetric face", e);
        break;
      case EdgeLabel::parallel: {
        const bool mirrored = (fa == FaceLabel::first && fb == FaceLabel::second) ||
                              (fa == FaceLabel::second && fb == FaceLabel::first);
        const bool self = sa && mesh.face(e) == mesh.face(o);
        if (!mirrored && !self) report("parallel edge with incompatible faces", e);
        break;
      }
      case EdgeLabel::first:
        if (fa == FaceLabel::second || fb == FaceLabel::second) report("edge in E1 next to a face in F2", e);
        break;
      case EdgeLabel::second:
        if (fa == FaceLabel::first || fb == FaceLabel::first) report("edge in E2 next to a face in F1", e);
        break;
    }
  }
  return out;
}

}  // namespace dce
