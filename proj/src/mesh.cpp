#include "dce/mesh.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace dce {

Mesh::Mesh(std::vector<Index> next, std::vector<Index> opp, std::vector<Index> to,
           std::vector<char> boundary, Index n_vertices)
    : next_(std::move(next)),
      opp_(std::move(opp)),
      to_(std::move(to)),
      boundary_(std::move(boundary)),
      n_vertices_(n_vertices) {
  const auto n = next_.size();
  prev_.assign(n, kNone);
  for (std::size_t h = 0; h < n; ++h) {
    if (next_[h] >= 0 && static_cast<std::size_t>(next_[h]) < n) prev_[next_[h]] = static_cast<Index>(h);
  }
  parked_.assign(n, 0);
  quad_park_.assign(n, kNone);
}

bool Mesh::is_closed() const {
  for (Index h = 0; h < n_halfedges(); ++h) {
    if (!is_parked(h) && is_boundary(h)) return false;
  }
  return true;
}

Index Mesh::face(Index h) const {
  Index best = h;
  for (Index x = next_[h]; x != h; x = next_[x]) best = std::min(best, x);
  return best;
}

int Mesh::face_degree(Index h) const {
  int d = 1;
  for (Index x = next_[h]; x != h; x = next_[x]) ++d;
  return d;
}

std::vector<Index> Mesh::edges() const {
  std::vector<Index> out;
  for (Index h = 0; h < n_halfedges(); ++h) {
    if (!is_parked(h) && h < opp_[h]) out.push_back(h);
  }
  return out;
}

std::vector<Index> Mesh::faces() const {
  std::vector<Index> out;
  std::vector<char> seen(next_.size(), 0);
  for (Index h = 0; h < n_halfedges(); ++h) {
    if (seen[h] || is_parked(h)) continue;
    Index x = h;
    do {
      seen[x] = 1;
      x = next_[x];
    } while (x != h);
    if (!is_boundary(h)) out.push_back(h);
  }
  return out;
}

std::vector<Index> Mesh::boundary_loops() const {
  std::vector<Index> out;
  std::vector<char> seen(next_.size(), 0);
  for (Index h = 0; h < n_halfedges(); ++h) {
    if (seen[h] || is_parked(h) || !is_boundary(h)) continue;
    Index x = h;
    do {
      seen[x] = 1;
      x = next_[x];
    } while (x != h);
    out.push_back(h);
  }
  return out;
}

Index Mesh::n_edges() const {
  Index n = 0;
  for (Index h = 0; h < n_halfedges(); ++h) {
    if (!is_parked(h)) ++n;
  }
  return n / 2;
}

Index Mesh::n_faces() const { return static_cast<Index>(faces().size()); }

int Mesh::euler_characteristic() const {
  return n_vertices_ - n_edges() + n_faces() + static_cast<int>(boundary_loops().size());
}

std::vector<Index> Mesh::vertex_halfedges() const {
  std::vector<Index> out(n_vertices_, kNone);
  for (Index h = 0; h < n_halfedges(); ++h) {
    if (!is_parked(h) && out[to_[h]] == kNone) out[to_[h]] = h;
  }
  return out;
}

void Mesh::park(Index a, Index b) {
  set_opp(a, b);
  next_[a] = prev_[a] = a;
  next_[b] = prev_[b] = b;
  parked_[a] = parked_[b] = 1;
  boundary_[a] = boundary_[b] = 0;
  quad_park_[a] = quad_park_[b] = kNone;
}

namespace {

std::string describe(const char* what, Index h) {
  std::ostringstream s;
  s << what << " at halfedge " << h;
  return s.str();
}

}  // namespace

std::vector<Diagnostic> validate(const Mesh& mesh) {
  std::vector<Diagnostic> out;
  const Index n = mesh.n_halfedges();
  auto report = [&](const char* what, Index h) { out.push_back({describe(what, h), h}); };
  auto in_range = [&](Index x) { return x >= 0 && x < n; };

  for (Index h = 0; h < n; ++h) {
    const Index o = mesh.opp(h);
    if (!in_range(o)) {
      report("opposite out of range", h);
      continue;
    }
    if (o == h) report("fixed point of opposite", h);
    else if (mesh.opp(o) != h) report("opposite is not an involution", h);
    if (!in_range(mesh.next(h))) report("next out of range", h);
  }
  if (!out.empty()) return out;

  // next restricted to active halfedges must be a bijection.
  std::vector<int> preimages(n, 0);
  for (Index h = 0; h < n; ++h) {
    if (mesh.is_parked(h)) {
      if (mesh.next(h) != h) report("parked halfedge is linked into a face", h);
      if (!mesh.is_parked(mesh.opp(h))) report("parked halfedge paired with an active one", h);
      continue;
    }
    const Index nx = mesh.next(h);
    if (mesh.is_parked(nx)) report("next leads to a parked halfedge", h);
    ++preimages[nx];
    if (mesh.prev(nx) != h) report("prev cache inconsistent with next", h);
    if (mesh.is_boundary(h) && mesh.is_boundary(mesh.opp(h))) report("edge with two boundary sides", h);
  }
  for (Index h = 0; h < n; ++h) {
    if (!mesh.is_parked(h) && preimages[h] != 1) report("next is not a bijection", h);
  }
  if (!out.empty()) return out;

  // Faces.
  std::vector<int> park_refs(n, 0);
  std::vector<char> seen(n, 0);
  for (Index h = 0; h < n; ++h) {
    if (seen[h] || mesh.is_parked(h)) continue;
    int degree = 0;
    Index x = h;
    do {
      seen[x] = 1;
      ++degree;
      if (mesh.is_boundary(x) != mesh.is_boundary(h)) report("boundary flag differs within a face orbit", x);
      if (mesh.parked_of(x) != mesh.parked_of(h)) report("quad record differs within a face orbit", x);
      x = mesh.next(x);
    } while (x != h && degree <= n);
    if (mesh.is_boundary(h)) {
      if (mesh.parked_of(h) != kNone) report("boundary loop carries a quad record", h);
      continue;
    }
    if (degree != 3 && degree != 4) report("face orbit of length other than 3 or 4", h);
    if (degree == 3 && mesh.parked_of(h) != kNone) report("triangle carries a quad record", h);
    if (degree == 4) {
      const Index p = mesh.parked_of(h);
      if (!in_range(p) || !mesh.is_parked(p)) report("quad without a parked halfedge pair", h);
      else ++park_refs[std::min(p, mesh.opp(p))];
    }
  }
  for (Index h = 0; h < n; ++h) {
    if (mesh.is_parked(h) && h < mesh.opp(h) && park_refs[h] != 1)
      report("parked pair not owned by exactly one quad", h);
  }

  // Vertices: C-orbits share their head vertex and vertex ids are unique.
  std::fill(seen.begin(), seen.end(), 0);
  std::vector<int> orbit_count(std::max<Index>(mesh.n_vertices(), 0), 0);
  for (Index h = 0; h < n; ++h) {
    if (seen[h] || mesh.is_parked(h)) continue;
    const Index v = mesh.to(h);
    if (v < 0 || v >= mesh.n_vertices()) {
      report("vertex id out of range", h);
      continue;
    }
    ++orbit_count[v];
    Index x = h;
    int guard = 0;
    do {
      seen[x] = 1;
      if (mesh.to(x) != v) report("circulator orbit mixes vertex ids", x);
      x = mesh.circulate(x);
    } while (x != h && ++guard <= n);
  }
  for (Index v = 0; v < mesh.n_vertices(); ++v) {
    if (orbit_count[v] == 0) out.push_back({"vertex " + std::to_string(v) + " has no halfedges", kNone});
    if (orbit_count[v] > 1) out.push_back({"vertex " + std::to_string(v) + " is non-manifold", kNone});
  }
  return out;
}

Mesh build_from_glued_faces(std::span<const std::vector<Index>> faces,
                            std::span<const std::vector<Index>> face_edges, Index n_vertices,
                            std::vector<std::vector<Index>>* halfedge_of_side) {
  if (faces.size() != face_edges.size()) throw InputError("face and face-edge lists differ in length");
  std::vector<Index> next, to, side_from;
  std::map<Index, std::vector<Index>> by_edge;
  if (halfedge_of_side) halfedge_of_side->assign(faces.size(), {});
  Index max_vertex = -1;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& poly = faces[f];
    const auto& ids = face_edges[f];
    if (poly.size() < 3) throw InputError("face " + std::to_string(f) + " has fewer than three vertices");
    if (ids.size() != poly.size()) throw InputError("face " + std::to_string(f) + " has mismatched edge ids");
    const auto base = static_cast<Index>(next.size());
    const auto k = static_cast<Index>(poly.size());
    for (Index i = 0; i < k; ++i) {
      const Index a = poly[i];
      const Index b = poly[(i + 1) % k];
      if (a < 0 || b < 0) throw InputError("negative vertex index in face " + std::to_string(f));
      max_vertex = std::max({max_vertex, a, b});
      next.push_back(base + (i + 1) % k);
      to.push_back(b);
      side_from.push_back(a);
      by_edge[ids[i]].push_back(base + i);
      if (halfedge_of_side) (*halfedge_of_side)[f].push_back(base + i);
    }
  }
  if (n_vertices == kNone) n_vertices = max_vertex + 1;
  if (max_vertex >= n_vertices) throw InputError("vertex index exceeds vertex count");

  const auto n_interior = static_cast<Index>(next.size());
  std::vector<Index> opp(n_interior, kNone);
  std::vector<Index> boundary_halfedges;
  for (const auto& [id, hs] : by_edge) {
    if (hs.size() > 2) throw InputError("non-manifold edge " + std::to_string(id));
    if (hs.size() == 2) {
      const Index a = hs[0], b = hs[1];
      if (side_from[a] != to[b] || to[a] != side_from[b])
        throw InputError("inconsistent orientation at edge " + std::to_string(id));
      opp[a] = b;
      opp[b] = a;
    } else {
      const Index a = hs[0];
      const auto bh = static_cast<Index>(next.size());
      next.push_back(kNone);
      to.push_back(side_from[a]);
      opp.push_back(a);
      opp[a] = bh;
      boundary_halfedges.push_back(bh);
    }
  }
  std::vector<char> boundary(next.size(), 0);
  for (Index bh : boundary_halfedges) boundary[bh] = 1;

  // Boundary successor: rotate around the head vertex through interior faces
  // until the next boundary halfedge leaving it is found.
  std::vector<Index> prev_interior(next.size(), kNone);
  for (Index h = 0; h < n_interior; ++h) prev_interior[next[h]] = h;
  for (Index bh : boundary_halfedges) {
    Index cand = opp[bh];  // interior, leaves head(bh)
    for (std::size_t guard = 0;; ++guard) {
      if (guard > next.size()) throw InputError("non-manifold vertex on boundary");
      const Index in = prev_interior[cand];
      const Index out = opp[in];
      if (boundary[out]) {
        next[bh] = out;
        break;
      }
      cand = out;
    }
  }
  Mesh mesh(std::move(next), std::move(opp), std::move(to), std::move(boundary), n_vertices);
  auto problems = validate(mesh);
  if (!problems.empty()) throw InputError("invalid mesh: " + problems.front().message);
  return mesh;
}

Mesh build_from_face_lists(std::span<const std::vector<Index>> faces, Index n_vertices) {
  std::map<std::pair<Index, Index>, Index> ids;
  std::map<std::pair<Index, Index>, int> directed;
  std::vector<std::vector<Index>> face_edges;
  face_edges.reserve(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& poly = faces[f];
    std::vector<Index> e;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Index a = poly[i];
      const Index b = poly[(i + 1) % poly.size()];
      if (a == b) throw InputError("degenerate side in face " + std::to_string(f));
      const auto key = std::minmax(a, b);
      auto [it, inserted] = ids.try_emplace({key.first, key.second}, static_cast<Index>(ids.size()));
      e.push_back(it->second);
      ++directed[{a, b}];
    }
    face_edges.push_back(std::move(e));
  }
  for (const auto& [key, count] : directed) {
    const auto [a, b] = key;
    const auto rev = directed.find({b, a});
    const int total = count + (rev == directed.end() ? 0 : rev->second);
    if (total > 2)
      throw InputError("non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    if (count > 1)
      throw InputError("inconsistent orientation at edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  return build_from_glued_faces(faces, face_edges, n_vertices);
}

}  // namespace dce
