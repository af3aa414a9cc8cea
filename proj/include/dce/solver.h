#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "dce/mesh.h"
#include "dce/metric.h"
#include "dce/reflection.h"

namespace dce {

struct SolverConfig {
  double eps_tol = 1e-10;        // max-norm angle error
  int max_newton_steps = 50;
  int max_halvings = 40;         // per line search
  double min_decrement = 0.0;    // stop when |<d, g>| falls below this
  long long flip_budget_factor = 100;
  double eps_flip = 1e-12;
  double linear_residual_tol = 1e-10;  // relative to |g|
};

enum class Termination { converged, max_steps, max_halvings, min_decrement, linear_failure, flip_budget };
const char* to_string(Termination t);

// Record 0 describes the initial Delaunay state; record k the state after
// Newton step k.
struct IterationRecord {
  int step = 0;
  double max_error = 0.0;
  int halvings = 0;
  FlipCounts flips;          // all flips performed since the previous record
  double decrement = 0.0;    // <d, g> of the step (0 for record 0)
  double step_size = 0.0;    // accepted λ (0 for record 0)
  double linear_residual = 0.0;
};

struct SolverReport {
  std::vector<IterationRecord> iterations;
  Termination termination = Termination::max_steps;
  double final_residual = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  FlipCounts total_flips;
  std::string message;

  bool converged() const { return termination == Termination::converged; }
  int newton_steps() const { return static_cast<int>(iterations.size()) - 1; }
};

// Mesh, original metric and scale factors of one optimization problem. The
// gradient and Hessian are only available while the triangulation is known to
// be Delaunay for the current u; changing u clears that flag until
// make_delaunay() runs again.
class ConformalState {
 public:
  ConformalState(Mesh mesh, PennerMetric metric, std::vector<double> u = {},
                 std::optional<Reflection> refl = std::nullopt);

  const Mesh& mesh() const { return mesh_; }
  const PennerMetric& metric() const { return metric_; }
  std::span<const double> u() const { return u_; }
  const Reflection* reflection() const { return refl_ ? &*refl_ : nullptr; }
  // Induced vertex involution (identity without reflection).
  const std::vector<Index>& vertex_mirror() const { return vertex_mirror_; }
  bool delaunay_valid() const { return delaunay_valid_; }

  void set_u(std::vector<double> u);
  FlipLog make_delaunay(const DelaunayOptions& options = {});

  std::vector<double> angle_sums() const;
  // Θ̂ − Θ(u).
  std::vector<double> gradient(std::span<const double> theta_hat) const;
  // Cotangent Laplacian with H_ij = −½(cot α + cot β) and zero row sums.
  // Quads are split along their stored diagonal.
  Eigen::SparseMatrix<double> hessian() const;

  // Final scaled lengths, one per halfedge (quad diagonals in parked slots).
  std::vector<double> scaled_lengths() const;

  Mesh release_mesh() && { return std::move(mesh_); }
  PennerMetric release_metric() && { return std::move(metric_); }
  std::optional<Reflection> release_reflection() && { return std::move(refl_); }

 private:
  void require_delaunay(const char* what) const;

  Mesh mesh_;
  PennerMetric metric_;
  std::vector<double> u_;
  std::optional<Reflection> refl_;
  std::vector<Index> vertex_mirror_;
  bool delaunay_valid_ = false;
};

// Cotangent Laplacian of an arbitrary state, ignoring the Delaunay flag.
Eigen::SparseMatrix<double> cotan_hessian(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u);

struct NewtonDirection {
  std::vector<double> d;
  double residual = 0.0;  // |H d + g_0|_2 / |g_0|_2, g_0 = g minus its mean
  bool ok = false;
};

// Solves H d = −g on the complement of the constants and returns zero-mean d.
// With a vertex mirror, d is averaged over mirrored pairs, which makes it
// exactly symmetric.
NewtonDirection newton_direction(const Eigen::SparseMatrix<double>& H, std::span<const double> g,
                                 std::span<const Index> vertex_mirror = {}, int refinement_steps = 3);

enum class SolverEventKind { delaunay, iteration };

struct SolverEvent {
  SolverEventKind kind;
  const ConformalState& state;
  const FlipLog* flips;              // delaunay events
  const IterationRecord* iteration;  // iteration events
  std::span<const double> gradient;  // iteration events
};

using SolverObserver = std::function<void(const SolverEvent&)>;

// Newton's method with backtracking line search. Each trial point is made
// Delaunay before the gradient is evaluated; a trial is accepted when
// <d, g(u + λd)> <= 0 or when it already meets the tolerance.
SolverReport find_conformal_metric(ConformalState& state, std::span<const double> theta_hat,
                                   const SolverConfig& config = {}, const SolverObserver& observer = {});

}  // namespace dce
