#pragma once

#include <string>
#include <vector>

#include "dce/double_cover.h"
#include "dce/generators.h"
#include "dce/io.h"
#include "dce/solver.h"

namespace dce {

// Exit codes of the command line front end.
enum ExitCode : int { kExitConverged = 0, kExitInput = 2, kExitNotConverged = 3, kExitInvariant = 4 };

struct Problem {
  Mesh mesh;
  PennerMetric metric;
  std::vector<double> theta_hat;  // boundary vertices: boundary angle π − κ̂
};

Problem make_problem(const MeshInput& input, const TargetSpec& targets, double gauss_bonnet_tolerance = 1e-6);
Problem make_problem(const GeneratedProblem& generated, double gauss_bonnet_tolerance = 1e-6);
Problem load_problem(const std::string& mesh_path, const std::string& targets_path,
                     double gauss_bonnet_tolerance = 1e-6);

struct PipelineOptions {
  SolverConfig solver;
  bool keep_double_cover = false;
  SolverObserver observer;
};

struct PipelineResult {
  ResultBundle bundle;
  bool has_boundary = false;
  // Angle sums of the output metric at the input vertices (boundary angles at
  // boundary vertices); empty when the double cover is kept.
  std::vector<double> angles;
  std::vector<double> theta_hat;
  std::vector<char> boundary_vertex;
};

// Closed input: solve directly. Input with boundary: double cover, solve,
// restrict to copy 1 (unless keep_double_cover).
PipelineResult solve_problem(Problem problem, const PipelineOptions& options = {});

// Connectivity export of an arbitrary mesh with per-halfedge lengths.
void export_mesh(const Mesh& mesh, std::span<const double> halfedge_length, ResultBundle& out);

// Plain Delaunay retriangulation at u = 0.
ResultBundle delaunay_bundle(Problem problem, const DelaunayOptions& options = {});

int exit_code_for(const SolverReport& report);

}  // namespace dce
