#include "dce/pipeline.h"

#include <numeric>

namespace dce {

namespace {

void check_connected(const Mesh& mesh) {
  std::vector<Index> parent(mesh.n_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<char> used(mesh.n_vertices(), 0);
  for (Index h = 0; h < mesh.n_halfedges(); ++h) {
    if (mesh.is_parked(h)) continue;
    used[mesh.to(h)] = 1;
    parent[find(mesh.to(h))] = find(mesh.from(h));
  }
  for (Index v = 0; v < mesh.n_vertices(); ++v) {
    if (!used[v]) throw InputError("vertex " + std::to_string(v) + " is not used by any face");
    if (find(v) != find(0)) throw InputError("mesh is not connected");
  }
}

std::vector<char> boundary_vertices(const Mesh& mesh) {
  std::vector<char> out(mesh.n_vertices(), 0);
  for (Index h = 0; h < mesh.n_halfedges(); ++h)
    if (!mesh.is_parked(h) && mesh.is_boundary(h)) out[mesh.to(h)] = 1;
  return out;
}

}  // namespace

Problem make_problem(const MeshInput& input, const TargetSpec& targets, double gauss_bonnet_tolerance) {
  Problem p;
  p.mesh = build_from_face_lists(input.faces, input.n_vertices);
  check_connected(p.mesh);
  p.metric = input_metric(p.mesh, input);
  p.theta_hat = resolve_targets(p.mesh, targets);
  enforce_gauss_bonnet(p.mesh, p.theta_hat, gauss_bonnet_tolerance);
  return p;
}

Problem make_problem(const GeneratedProblem& generated, double gauss_bonnet_tolerance) {
  Problem p;
  p.mesh = build_from_face_lists(generated.geometry.faces, static_cast<Index>(generated.geometry.positions.size()));
  check_connected(p.mesh);
  p.metric = metric_from_positions(p.mesh, generated.geometry.positions);
  p.theta_hat = generated.theta_hat;
  enforce_gauss_bonnet(p.mesh, p.theta_hat, gauss_bonnet_tolerance);
  return p;
}

Problem load_problem(const std::string& mesh_path, const std::string& targets_path, double gauss_bonnet_tolerance) {
  const MeshInput input = read_obj_file(mesh_path);
  const TargetSpec targets = targets_path.empty() ? TargetSpec{} : read_targets_file(targets_path);
  return make_problem(input, targets, gauss_bonnet_tolerance);
}

void export_mesh(const Mesh& mesh, std::span<const double> halfedge_length, ResultBundle& out) {
  out.n_vertices = mesh.n_vertices();
  std::vector<Index> id(mesh.n_halfedges(), kNone);
  for (Index e : mesh.edges()) {
    id[e] = id[mesh.opp(e)] = static_cast<Index>(out.edge_length.size());
    out.edge_vertices.push_back({mesh.from(e), mesh.to(e)});
    out.edge_length.push_back(halfedge_length[e]);
  }
  for (Index f : mesh.faces()) {
    std::vector<Index> verts, edges;
    Index x = f;
    do {
      verts.push_back(mesh.from(x));
      edges.push_back(id[x]);
      x = mesh.next(x);
    } while (x != f);
    if (verts.size() == 4) out.quad_diagonals.emplace_back(static_cast<Index>(out.faces.size()), halfedge_length[mesh.parked_of(f)]);
    out.faces.push_back(std::move(verts));
    out.face_edges.push_back(std::move(edges));
  }
}

PipelineResult solve_problem(Problem problem, const PipelineOptions& options) {
  PipelineResult result;
  result.theta_hat = problem.theta_hat;
  result.boundary_vertex = boundary_vertices(problem.mesh);
  ResultBundle& b = result.bundle;
  b.has_report = true;

  if (problem.mesh.is_closed()) {
    ConformalState state(std::move(problem.mesh), std::move(problem.metric));
    b.report = find_conformal_metric(state, problem.theta_hat, options.solver, options.observer);
    b.kind = "closed";
    export_mesh(state.mesh(), state.scaled_lengths(), b);
    b.u.assign(state.u().begin(), state.u().end());
    result.angles = state.angle_sums();
    b.flip_summary = b.report.total_flips;
    return result;
  }

  result.has_boundary = true;
  CoverProblem cp = build_double_cover(problem.mesh, problem.metric, problem.theta_hat);
  ConformalState state(std::move(cp.cover.mesh), std::move(cp.metric), {}, std::move(cp.cover.refl));
  b.report = find_conformal_metric(state, cp.theta_hat, options.solver, options.observer);
  b.flip_summary = b.report.total_flips;
  if (options.keep_double_cover) {
    b.kind = "double_cover";
    export_mesh(state.mesh(), state.scaled_lengths(), b);
    b.u.assign(state.u().begin(), state.u().end());
    return result;
  }

  const std::vector<double> u(state.u().begin(), state.u().end());
  DoubleCover dc = std::move(cp.cover);
  dc.mesh = std::move(state).release_mesh();
  const PennerMetric metric = std::move(state).release_metric();
  dc.refl = *std::move(state).release_reflection();
  RestrictedMesh rm = restrict_to_single_cover(dc, metric, u);

  b.kind = "restricted";
  b.n_vertices = rm.mesh.n_vertices();
  b.edge_length = rm.edge_length;
  b.edge_vertices.assign(rm.edge_length.size(), {kNone, kNone});
  for (std::size_t f = 0; f < rm.faces.size(); ++f) {
    const auto& fv = rm.faces[f];
    for (std::size_t k = 0; k < fv.size(); ++k) {
      auto& ev = b.edge_vertices[rm.face_edges[f][k]];
      if (ev[0] == kNone) ev = {fv[k], fv[(k + 1) % fv.size()]};
    }
  }
  b.faces = rm.faces;
  b.face_edges = rm.face_edges;
  b.u = rm.u;
  PennerMetric out_metric{rm.halfedge_length};
  const std::vector<double> zero(rm.mesh.n_vertices(), 0.0);
  result.angles = vertex_angle_sums(rm.mesh, out_metric, zero);
  result.angles.resize(dc.n_input_vertices);
  return result;
}

ResultBundle delaunay_bundle(Problem problem, const DelaunayOptions& options) {
  const std::vector<double> zero(problem.mesh.n_vertices(), 0.0);
  const FlipLog log = make_delaunay(problem.mesh, problem.metric, zero, nullptr, options);
  ResultBundle b;
  b.kind = "delaunay";
  export_mesh(problem.mesh, problem.metric.length, b);
  b.u = zero;
  b.flip_summary = log.counts;
  return b;
}

int exit_code_for(const SolverReport& report) { return report.converged() ? kExitConverged : kExitNotConverged; }

}  // namespace dce
