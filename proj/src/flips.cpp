#include "dce/flips.h"

#include <string>

namespace dce {

const char* to_string(FlipType type) {
  switch (type) {
    case FlipType::standard: return "(1,1,1)+(2,2,2)";
    case FlipType::parallel: return "(1,||,2)<->(t,perp,t)";
    case FlipType::triangle_quad: return "(1,1,t)+(2,2,t)<->(t,perp,q)";
    case FlipType::quad_quad: return "(1,1,q)+(2,2,q)<->(q,perp,q)";
    case FlipType::irrelevant: return "irrelevant";
  }
  return "?";
}

namespace {

bool is_sym(FaceLabel f) { return f == FaceLabel::sym_triangle || f == FaceLabel::sym_quad; }

[[noreturn]] void inconsistent(const char* what, Index h) {
  throw TopologyError(std::string("inconsistent flip configuration: ") + what + " at halfedge " +
                      std::to_string(h));
}

Side side_of(EdgeLabel e) { return e == EdgeLabel::first ? Side::first : Side::second; }

bool face_on_side(FaceLabel f, Side s) {
  return (f == FaceLabel::first && s == Side::first) || (f == FaceLabel::second && s == Side::second);
}

void set_face(Mesh& mesh, std::initializer_list<Index> cycle, Index park) {
  const Index* first = cycle.begin();
  for (const Index* it = cycle.begin(); it != cycle.end(); ++it) {
    const Index* nx = (it + 1 == cycle.end()) ? first : it + 1;
    mesh.set_next(*it, *nx);
    mesh.set_parked_of(*it, park);
  }
}

}  // namespace

FlipType classify_flip(const Mesh& mesh, const Reflection& refl, Index h) {
  const Index o = mesh.opp(h);
  if (mesh.is_boundary_edge(h)) inconsistent("boundary edge", h);
  if (mesh.face(h) == mesh.face(o)) return FlipType::irrelevant;  // self-adjacent: Delaunay for any metric
  const EdgeLabel el = refl.edge_label(mesh, h);
  const FaceLabel fa = refl.face_label(mesh, h);
  const FaceLabel fb = refl.face_label(mesh, o);
  switch (el) {
    case EdgeLabel::first:
    case EdgeLabel::second: {
      const Side s = side_of(el);
      if (is_sym(fa) && is_sym(fb)) return FlipType::irrelevant;
      if (!is_sym(fa) && !is_sym(fb)) {
        if (!face_on_side(fa, s) || !face_on_side(fb, s)) inconsistent("edge and face sides differ", h);
        return FlipType::standard;
      }
      const FaceLabel plain = is_sym(fa) ? fb : fa;
      const FaceLabel sym = is_sym(fa) ? fa : fb;
      if (!face_on_side(plain, s)) inconsistent("edge and face sides differ", h);
      return sym == FaceLabel::sym_triangle ? FlipType::triangle_quad : FlipType::quad_quad;
    }
    case EdgeLabel::parallel:
      if ((fa == FaceLabel::first && fb == FaceLabel::second) || (fa == FaceLabel::second && fb == FaceLabel::first))
        return FlipType::parallel;
      inconsistent("parallel edge without mirrored faces", h);
    case EdgeLabel::perpendicular:
      if (!is_sym(fa) || !is_sym(fb)) inconsistent("perpendicular edge next to a non-symmetric face", h);
      if (fa == FaceLabel::sym_triangle && fb == FaceLabel::sym_triangle) return FlipType::parallel;
      if (fa == FaceLabel::sym_quad && fb == FaceLabel::sym_quad) return FlipType::quad_quad;
      return FlipType::triangle_quad;
  }
  inconsistent("unknown edge label", h);
}

FlipRecord plan_asymmetric_flip(const Mesh& mesh, Index h) {
  if (mesh.is_parked(h)) throw TopologyError("cannot flip a parked halfedge");
  const Index o = mesh.opp(h);
  if (mesh.is_boundary_edge(h)) throw TopologyError("cannot flip a boundary edge");
  if (mesh.face_degree(h) != 3 || mesh.face_degree(o) != 3)
    throw TopologyError("flip requires two triangles at halfedge " + std::to_string(h));
  if (mesh.face(h) == mesh.face(o)) throw TopologyError("cannot flip a self-adjacent edge");
  FlipRecord r;
  r.h[0] = h;
  r.h[1] = mesh.next(h);
  r.h[2] = mesh.next(r.h[1]);
  r.h[3] = o;
  r.h[4] = mesh.next(o);
  r.h[5] = mesh.next(r.h[4]);
  return r;
}

void execute_asymmetric_flip(Mesh& mesh, const FlipRecord& p) {
  const auto& h = p.h;
  const Index head0 = mesh.to(h[1]);
  const Index head3 = mesh.to(h[4]);
  set_face(mesh, {h[0], h[2], h[4]}, kNone);
  set_face(mesh, {h[1], h[3], h[5]}, kNone);
  mesh.set_to(h[0], head0);
  mesh.set_to(h[3], head3);
}

FlipRecord plan_symmetric_flip(const Mesh& mesh, const Reflection& refl, Index h) {
  const FlipType type = classify_flip(mesh, refl, h);
  const Index o = mesh.opp(h);
  FlipRecord r;
  r.type = type;
  switch (type) {
    case FlipType::irrelevant:
      throw TopologyError("attempt to flip an edge that is Delaunay for every symmetric metric");

    case FlipType::standard: {
      const Index primary = refl.side(h) == Side::first ? h : refl(h);
      FlipRecord a = plan_asymmetric_flip(mesh, primary);
      FlipRecord b = plan_asymmetric_flip(mesh, refl(primary));
      r.h = a.h;
      for (int i = 0; i < 6; ++i) r.mirror[i] = b.h[i];
      return r;
    }

    case FlipType::parallel: {
      r.reverse = refl.edge_label(mesh, h) == EdgeLabel::perpendicular;
      FlipRecord a = plan_asymmetric_flip(mesh, h);
      r.h = a.h;
      return r;
    }

    case FlipType::triangle_quad: {
      if (refl.edge_label(mesh, h) != EdgeLabel::perpendicular) {
        const Index x = refl.face_label(mesh, h) == FaceLabel::sym_triangle ? h : o;
        Index fixed = x;
        while (refl(fixed) != fixed) {
          fixed = mesh.next(fixed);
          if (fixed == x) inconsistent("symmetric triangle without a fixed halfedge", x);
        }
        r.h[6] = fixed;
        r.h[7] = mesh.next(fixed);
        r.h[8] = mesh.next(r.h[7]);
        r.h[0] = mesh.opp(r.h[7]);
        r.h[1] = mesh.next(r.h[0]);
        r.h[2] = mesh.next(r.h[1]);
        r.h[3] = mesh.opp(r.h[8]);
        r.h[4] = mesh.next(r.h[3]);
        r.h[5] = mesh.next(r.h[4]);
        if (refl(r.h[7]) != r.h[8] || refl(r.h[0]) != r.h[3]) inconsistent("asymmetric (1,1,t) neighbourhood", h);
        if (mesh.face_degree(r.h[0]) != 3 || mesh.face_degree(r.h[3]) != 3)
          inconsistent("(1,1,t) next to a non-triangle", h);
      } else {
        r.reverse = true;
        r.h[0] = mesh.face_degree(h) == 3 ? h : o;
        r.h[2] = mesh.next(r.h[0]);
        r.h[4] = mesh.next(r.h[2]);
        r.h[3] = mesh.opp(r.h[0]);
        r.h[5] = mesh.next(r.h[3]);
        r.h[6] = mesh.next(r.h[5]);
        r.h[1] = mesh.next(r.h[6]);
        r.h[7] = mesh.parked_of(r.h[3]);
        if (r.h[7] == kNone) inconsistent("quad without parked pair", r.h[3]);
        r.h[8] = mesh.opp(r.h[7]);
      }
      return r;
    }

    case FlipType::quad_quad: {
      if (refl.edge_label(mesh, h) != EdgeLabel::perpendicular) {
        const Index x = refl.face_label(mesh, h) == FaceLabel::sym_quad ? h : o;
        r.h[9] = x;
        r.h[6] = mesh.prev(x);
        r.h[7] = mesh.next(x);
        r.h[8] = mesh.next(r.h[7]);
        r.h[0] = mesh.opp(r.h[9]);
        r.h[1] = mesh.next(r.h[0]);
        r.h[2] = mesh.next(r.h[1]);
        r.h[3] = mesh.opp(r.h[8]);
        r.h[4] = mesh.next(r.h[3]);
        r.h[5] = mesh.next(r.h[4]);
        r.kept_park = mesh.parked_of(x);
        if (refl(r.h[6]) != r.h[6] || refl(r.h[7]) != r.h[7] || refl(r.h[8]) != r.h[9] || refl(r.h[0]) != r.h[3])
          inconsistent("asymmetric (1,1,q) neighbourhood", h);
        if (mesh.face_degree(r.h[0]) != 3 || mesh.face_degree(r.h[3]) != 3)
          inconsistent("(1,1,q) next to a non-triangle", h);
      } else {
        r.reverse = true;
        r.h[0] = h;
        r.h[2] = mesh.next(h);
        r.h[7] = mesh.next(r.h[2]);
        r.h[4] = mesh.next(r.h[7]);
        r.h[3] = o;
        r.h[5] = mesh.next(o);
        r.h[6] = mesh.next(r.h[5]);
        r.h[1] = mesh.next(r.h[6]);
        r.kept_park = mesh.parked_of(r.h[0]);
        r.h[8] = mesh.parked_of(r.h[3]);
        if (r.kept_park == kNone || r.h[8] == kNone) inconsistent("quad without parked pair", h);
        r.h[9] = mesh.opp(r.h[8]);
      }
      return r;
    }
  }
  inconsistent("unknown flip type", h);
}

void execute_symmetric_flip(Mesh& mesh, Reflection& refl, const FlipRecord& p) {
  const auto& h = p.h;
  switch (p.type) {
    case FlipType::irrelevant:
      throw TopologyError("attempt to flip an edge that is Delaunay for every symmetric metric");

    case FlipType::standard: {
      execute_asymmetric_flip(mesh, p);
      FlipRecord m;
      for (int i = 0; i < 6; ++i) m.h[i] = p.mirror[i];
      execute_asymmetric_flip(mesh, m);
      // R reverses orientation, so the mirror flip produces R(e) with the
      // opposite halfedge labelling.
      refl.set_pair(h[0], m.h[3]);
      refl.set_pair(h[3], m.h[0]);
      return;
    }

    case FlipType::parallel:
      execute_asymmetric_flip(mesh, p);
      if (!p.reverse) {
        refl.set_fixed(h[0]);
        refl.set_fixed(h[3]);
      } else {
        refl.set_pair(h[0], h[3]);
        refl.set_side(h[0], refl.side(h[2]));
        refl.set_side(h[3], refl.side(h[5]));
      }
      return;

    case FlipType::triangle_quad:
      if (!p.reverse) {
        const Index head0 = mesh.to(h[1]);
        const Index head3 = mesh.to(h[4]);
        set_face(mesh, {h[0], h[2], h[4]}, kNone);
        set_face(mesh, {h[1], h[3], h[5], h[6]}, h[7]);
        mesh.set_opp(h[0], h[3]);
        mesh.park(h[7], h[8]);
        mesh.set_to(h[0], head0);
        mesh.set_to(h[3], head3);
        refl.set_fixed(h[0]);
        refl.set_fixed(h[3]);
        refl.set_fixed(h[7]);
        refl.set_fixed(h[8]);
      } else {
        mesh.unpark(h[7]);
        mesh.unpark(h[8]);
        const Index head0 = mesh.from(h[1]);
        const Index head3 = mesh.from(h[4]);
        set_face(mesh, {h[0], h[1], h[2]}, kNone);
        set_face(mesh, {h[3], h[4], h[5]}, kNone);
        set_face(mesh, {h[6], h[7], h[8]}, kNone);
        mesh.set_opp(h[0], h[7]);
        mesh.set_opp(h[3], h[8]);
        mesh.set_to(h[0], head0);
        mesh.set_to(h[3], head3);
        mesh.set_to(h[7], mesh.to(h[2]));
        mesh.set_to(h[8], mesh.to(h[5]));
        refl.set_pair(h[0], h[3]);
        refl.set_pair(h[7], h[8]);
        refl.set_side(h[0], refl.side(h[1]));
        refl.set_side(h[7], refl.side(h[1]));
        refl.set_side(h[3], refl.side(h[4]));
        refl.set_side(h[8], refl.side(h[4]));
      }
      return;

    case FlipType::quad_quad:
      if (!p.reverse) {
        const Index head0 = mesh.to(h[1]);
        const Index head3 = mesh.to(h[4]);
        set_face(mesh, {h[0], h[2], h[7], h[4]}, p.kept_park);
        set_face(mesh, {h[1], h[3], h[5], h[6]}, h[8]);
        mesh.set_opp(h[0], h[3]);
        mesh.park(h[8], h[9]);
        mesh.set_to(h[0], head0);
        mesh.set_to(h[3], head3);
        refl.set_fixed(h[0]);
        refl.set_fixed(h[3]);
        refl.set_fixed(h[8]);
        refl.set_fixed(h[9]);
      } else {
        mesh.unpark(h[8]);
        mesh.unpark(h[9]);
        const Index head0 = mesh.from(h[1]);
        const Index head3 = mesh.from(h[4]);
        set_face(mesh, {h[0], h[1], h[2]}, kNone);
        set_face(mesh, {h[3], h[4], h[5]}, kNone);
        set_face(mesh, {h[6], h[9], h[7], h[8]}, p.kept_park);
        mesh.set_opp(h[0], h[9]);
        mesh.set_opp(h[3], h[8]);
        mesh.set_to(h[0], head0);
        mesh.set_to(h[3], head3);
        mesh.set_to(h[9], mesh.to(h[2]));
        mesh.set_to(h[8], mesh.to(h[5]));
        refl.set_pair(h[0], h[3]);
        refl.set_pair(h[8], h[9]);
        refl.set_side(h[0], refl.side(h[1]));
        refl.set_side(h[9], refl.side(h[1]));
        refl.set_side(h[3], refl.side(h[4]));
        refl.set_side(h[8], refl.side(h[4]));
      }
      return;
  }
}

}  // namespace dce
