#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include "dce/generators.h"
#include "dce/mesh.h"
#include "dce/metric.h"
#include "dce/solver.h"

namespace dce {

// Face-vertex text input. Supported lines:
//   v <x> <y> <z>            vertex position
//   f <i> <j> <k> ...        face, 1-based vertex indices (a/b/c tokens allowed)
//   el <i> <j> <length>      explicit length of edge ij, 1-based
// Anything else ('#', vn, vt, o, g, s, ...) is ignored.
struct MeshInput {
  Index n_vertices = 0;
  std::vector<std::array<double, 3>> positions;  // empty if no 'v' lines carry positions
  std::vector<std::vector<Index>> faces;         // 0-based
  std::vector<std::tuple<Index, Index, double>> edge_lengths;  // 0-based
};

MeshInput read_obj(std::istream& in);
MeshInput read_obj_file(const std::string& path);
void write_obj(std::ostream& out, const Geometry& geometry);

// Per-halfedge lengths: explicit 'el' lengths where given, Euclidean distances
// otherwise. Throws InputError for missing lengths, non-positive lengths, or
// faces violating the triangle inequality.
PennerMetric input_metric(const Mesh& mesh, const MeshInput& input);

// Target sidecar. Lines "v <index> <theta_hat>" or "k <index> <kappa_hat>",
// 0-based indices, radians; '#' starts a comment.
struct TargetSpec {
  std::vector<std::pair<Index, double>> theta;
  std::vector<std::pair<Index, double>> kappa;
};
TargetSpec read_targets(std::istream& in);
TargetSpec read_targets_file(const std::string& path);
void write_targets(std::ostream& out, const std::vector<double>& theta_hat);

// Θ̂ per vertex: interior θ = 2π − κ̂, boundary θ = π − κ̂ (boundary angle).
// Unlisted vertices are flat (2π interior, π boundary).
std::vector<double> resolve_targets(const Mesh& mesh, const TargetSpec& spec);

// Checks Σ Θ̂ = π·|F|. Deviations up to `tolerance` are spread evenly over the
// vertices; larger ones throw InputError naming the deviation.
void enforce_gauss_bonnet(const Mesh& mesh, std::vector<double>& theta_hat, double tolerance);

// Exact text form of a double ("%a") and its inverse.
std::string hex_double(double x);
double parse_hex_double(const std::string& s);

// Solver output document. Lengths and u are stored as hexadecimal floats
// (authoritative) next to decimal copies.
struct ResultBundle {
  std::string kind;  // "closed", "restricted", "double_cover" or "delaunay"
  Index n_vertices = 0;
  std::vector<std::vector<Index>> faces;
  std::vector<std::vector<Index>> face_edges;
  std::vector<std::array<Index, 2>> edge_vertices;
  std::vector<double> edge_length;
  std::vector<double> u;
  std::vector<std::pair<Index, double>> quad_diagonals;  // (face index, scaled length)
  bool has_report = false;
  SolverReport report;
  FlipCounts flip_summary;
};

std::string write_bundle(const ResultBundle& bundle);
ResultBundle read_bundle(const std::string& text);
ResultBundle read_bundle_file(const std::string& path);

// One row per iteration record: step,max_error,halvings,flips_111,flips_par,flips_t,flips_q
std::string report_csv(const SolverReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dce
