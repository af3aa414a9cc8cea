#include "dce/double_cover.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace dce {

CoverProblem build_double_cover(const Mesh& input, const PennerMetric& input_metric,
                                std::span<const double> theta_hat) {
  if (input.is_closed()) throw InputError("double cover requested for a mesh without boundary");
  const Index nv = input.n_vertices();
  if (static_cast<Index>(theta_hat.size()) != nv) throw InputError("target count differs from vertex count");

  CoverProblem out;
  DoubleCover& dc = out.cover;
  dc.n_input_vertices = nv;
  dc.input_boundary_vertex.assign(nv, 0);
  std::vector<Index> idx(input.n_halfedges(), kNone);
  for (Index h = 0; h < input.n_halfedges(); ++h) {
    if (input.is_parked(h)) continue;
    if (input.is_boundary(h)) {
      dc.input_boundary_vertex[input.to(h)] = 1;
      continue;
    }
    idx[h] = static_cast<Index>(dc.source.size());
    dc.source.push_back(h);
  }
  const Index nc = static_cast<Index>(dc.source.size());
  dc.n_copy = nc;

  Index nv_cover = nv;
  dc.vertex_mirror.resize(nv);
  for (Index v = 0; v < nv; ++v) dc.vertex_mirror[v] = dc.input_boundary_vertex[v] ? v : nv_cover++;
  dc.vertex_mirror.resize(nv_cover);
  for (Index v = 0; v < nv; ++v) dc.vertex_mirror[dc.vertex_mirror[v]] = v;

  std::vector<Index> next(2 * nc), opp(2 * nc), to(2 * nc);
  std::vector<Index> map(2 * nc);
  std::vector<Side> side(2 * nc);
  out.metric.length.resize(2 * nc);
  for (Index k = 0; k < nc; ++k) {
    const Index h = dc.source[k];
    const Index o = input.opp(h);
    const bool glued = input.is_boundary(o);
    next[k] = idx[input.next(h)];
    opp[k] = glued ? nc + k : idx[o];
    to[k] = input.to(h);
    // N(R(h)) = R(N^-1(h)), O(R(h)) = R(O(h)); R(h) runs from R(to h) to R(from h).
    next[nc + k] = nc + idx[input.prev(h)];
    opp[nc + k] = glued ? k : nc + idx[o];
    to[nc + k] = dc.vertex_mirror[input.from(h)];
    map[k] = nc + k;
    map[nc + k] = k;
    side[k] = Side::first;
    side[nc + k] = Side::second;
    out.metric.length[k] = out.metric.length[nc + k] = input_metric[h];
  }
  dc.mesh = Mesh(std::move(next), std::move(opp), std::move(to), std::vector<char>(2 * nc, 0), nv_cover);
  dc.refl = Reflection(std::move(map), std::move(side));
  if (auto diag = validate(dc.mesh); !diag.empty()) throw TopologyError("double cover: " + diag.front().message);

  out.theta_hat.resize(nv_cover);
  for (Index v = 0; v < nv; ++v) {
    const double t = dc.input_boundary_vertex[v] ? 2.0 * theta_hat[v] : theta_hat[v];
    out.theta_hat[v] = t;
    out.theta_hat[dc.vertex_mirror[v]] = t;
  }
  return out;
}

FlipLog symmetric_make_delaunay(DoubleCover& cover, PennerMetric& metric, std::span<const double> u,
                                const DelaunayOptions& options) {
  return make_delaunay(cover.mesh, metric, u, &cover.refl, options);
}

bool is_bitwise_symmetric(const DoubleCover& cover, const PennerMetric& metric, std::span<const double> u) {
  for (Index h = 0; h < cover.mesh.n_halfedges(); ++h) {
    if (cover.mesh.is_parked(h)) continue;
    if (metric[h] != metric[cover.refl(h)]) return false;
  }
  for (Index v = 0; v < cover.mesh.n_vertices(); ++v) {
    if (u[v] != u[cover.vertex_mirror[v]]) return false;
  }
  return true;
}

namespace {

class RestrictionBuilder {
 public:
  RestrictionBuilder(const DoubleCover& cover, const PennerMetric& metric, std::span<const double> u)
      : dc_(cover), mesh_(cover.mesh), metric_(metric), u_(u), perp_(mesh_.n_halfedges(), kNone) {
    for (Index e : mesh_.edges()) {
      if (dc_.refl(e) == e) perp_[e] = perp_[mesh_.opp(e)] = n_perp_++;
    }
  }

  RestrictedMesh run() {
    for (Index f : mesh_.faces()) {
      switch (dc_.refl.face_label(mesh_, f)) {
        case FaceLabel::first: add_plain(f); break;
        case FaceLabel::second: break;
        case FaceLabel::sym_triangle: add_triangle_half(f); break;
        case FaceLabel::sym_quad: add_quad_half(f); break;
      }
    }
    RestrictedMesh out;
    out.n_midpoints = n_perp_;
    std::vector<std::vector<Index>> side_halfedge;
    out.mesh = build_from_glued_faces(faces_, face_edges_, dc_.n_input_vertices + n_perp_, &side_halfedge);
    out.halfedge_length.assign(out.mesh.n_halfedges(), 0.0);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      for (std::size_t k = 0; k < faces_[f].size(); ++k) {
        const Index h = side_halfedge[f][k];
        out.halfedge_length[h] = out.halfedge_length[out.mesh.opp(h)] = lengths_[face_edges_[f][k]];
      }
    }
    out.faces = std::move(faces_);
    out.face_edges = std::move(face_edges_);
    out.edge_length = std::move(lengths_);
    out.u.assign(u_.begin(), u_.begin() + dc_.n_input_vertices);
    return out;
  }

 private:
  double len(Index h) const { return scaled_length(mesh_, metric_, u_, h); }

  Index kept_vertex(Index v) const {
    if (v >= dc_.n_input_vertices) throw TopologyError("restriction reached a copy-2 vertex " + std::to_string(v));
    return v;
  }
  Index midpoint(Index h) const { return dc_.n_input_vertices + perp_[h]; }

  Index fresh(double length) {
    lengths_.push_back(length);
    return static_cast<Index>(lengths_.size()) - 1;
  }
  Index edge_id(Index h) {
    const auto [it, inserted] = ids_.try_emplace(mesh_.edge(h), kNone);
    if (inserted) it->second = fresh(len(h));
    return it->second;
  }
  // Half of a perpendicular edge: the part at the tail of h (first) or at its head.
  Index half_id(Index h, bool first) {
    const bool at_rep_tail = (h == mesh_.edge(h)) == first;
    const Index key = 2 * perp_[h] + (at_rep_tail ? 0 : 1);
    const auto [it, inserted] = half_ids_.try_emplace(key, kNone);
    if (inserted) it->second = fresh(0.5 * len(h));
    return it->second;
  }

  void emit(std::vector<Index> verts, std::vector<Index> edges) {
    faces_.push_back(std::move(verts));
    face_edges_.push_back(std::move(edges));
  }

  void add_plain(Index f) {
    std::vector<Index> verts, edges;
    Index x = f;
    do {
      verts.push_back(kept_vertex(mesh_.from(x)));
      edges.push_back(edge_id(x));
      x = mesh_.next(x);
    } while (x != f);
    emit(std::move(verts), std::move(edges));
  }

  Index fixed_halfedge(Index f) const {
    Index x = f;
    while (dc_.refl(x) != x) {
      x = mesh_.next(x);
      if (x == f) throw TopologyError("symmetric face without a fixed halfedge");
    }
    return x;
  }

  void add_triangle_half(Index f) {
    const Index base = fixed_halfedge(f);
    const Index a = mesh_.next(base);
    const Index b = mesh_.next(a);
    const double c = len(base);
    const double la = len(a);
    const double lb = len(b);
    const Index m = midpoint(base);
    const Index axis = fresh(0.5 * std::sqrt(std::max(0.0, 2.0 * la * la + 2.0 * lb * lb - c * c)));
    const Index apex = kept_vertex(mesh_.to(a));
    if (dc_.refl.side(a) == Side::first) {
      emit({m, kept_vertex(mesh_.to(base)), apex}, {half_id(base, false), edge_id(a), axis});
    } else {
      emit({apex, kept_vertex(mesh_.from(base)), m}, {edge_id(b), half_id(base, true), axis});
    }
  }

  // Isosceles trapezoid with bases fa and fb and legs g, R(g). The kept piece
  // runs mid(fa) -> to(fa) -> to(g) = from(fb) -> mid(fb).
  void add_quad_piece(Index fa, Index g, Index fb) {
    const double ba = len(fa);
    const double bb = len(fb);
    const double s = len(g);
    const double w = 0.5 * std::abs(ba - bb);
    const double height = std::sqrt(std::max(0.0, (s - w) * (s + w)));
    const Index ma = midpoint(fa);
    const Index mb = midpoint(fb);
    const Index p = kept_vertex(mesh_.to(fa));
    const Index q = kept_vertex(mesh_.to(g));
    const Index e_fa = half_id(fa, false);
    const Index e_g = edge_id(g);
    const Index e_fb = half_id(fb, true);
    const Index axis = fresh(height);
    // Right angles at both midpoints; the diagonal through the obtuse corner is Delaunay.
    if (bb <= ba) {
      const Index diag = fresh(std::hypot(0.5 * bb, height));
      emit({ma, p, q}, {e_fa, e_g, diag});
      emit({ma, q, mb}, {diag, e_fb, axis});
    } else {
      const Index diag = fresh(std::hypot(0.5 * ba, height));
      emit({ma, p, mb}, {e_fa, diag, axis});
      emit({p, q, mb}, {e_g, e_fb, diag});
    }
  }

  void add_quad_half(Index f) {
    const Index f1 = fixed_halfedge(f);
    const Index g1 = mesh_.next(f1);
    const Index f2 = mesh_.next(g1);
    const Index g2 = mesh_.next(f2);
    if (dc_.refl(f2) != f2) throw TopologyError("symmetric quad without opposite fixed sides");
    if (dc_.refl.side(g1) == Side::first) {
      add_quad_piece(f1, g1, f2);
    } else {
      add_quad_piece(f2, g2, f1);
    }
  }

  const DoubleCover& dc_;
  const Mesh& mesh_;
  const PennerMetric& metric_;
  std::span<const double> u_;
  std::vector<Index> perp_;
  Index n_perp_ = 0;
  std::map<Index, Index> ids_;
  std::map<Index, Index> half_ids_;
  std::vector<double> lengths_;
  std::vector<std::vector<Index>> faces_;
  std::vector<std::vector<Index>> face_edges_;
};

}  // namespace

RestrictedMesh restrict_to_single_cover(const DoubleCover& cover, const PennerMetric& metric,
                                        std::span<const double> u, double tolerance) {
  const Mesh& mesh = cover.mesh;
  for (Index h = 0; h < mesh.n_halfedges(); ++h) {
    if (mesh.is_parked(h)) continue;
    const double a = metric[h];
    const double b = metric[cover.refl(h)];
    if (std::abs(a - b) > tolerance * std::max(std::abs(a), std::abs(b))) {
      throw TopologyError("asymmetric length at halfedge " + std::to_string(h));
    }
  }
  for (Index v = 0; v < mesh.n_vertices(); ++v) {
    if (std::abs(u[v] - u[cover.vertex_mirror[v]]) > tolerance) {
      throw TopologyError("asymmetric scale factor at vertex " + std::to_string(v));
    }
  }
  return RestrictionBuilder(cover, metric, u).run();
}

}  // namespace dce
