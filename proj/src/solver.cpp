#include "dce/solver.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SparseCholesky>

#include "dce/scalar_kernel.h"

namespace dce {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_steps: return "max_steps";
    case Termination::max_halvings: return "max_halvings";
    case Termination::min_decrement: return "min_decrement";
    case Termination::linear_failure: return "linear_failure";
    case Termination::flip_budget: return "flip_budget";
  }
  return "?";
}

ConformalState::ConformalState(Mesh mesh, PennerMetric metric, std::vector<double> u,
                               std::optional<Reflection> refl)
    : mesh_(std::move(mesh)), metric_(std::move(metric)), u_(std::move(u)), refl_(std::move(refl)) {
  if (u_.empty()) u_.assign(mesh_.n_vertices(), 0.0);
  if (static_cast<Index>(u_.size()) != mesh_.n_vertices()) throw InputError("scale factor count differs from vertex count");
  if (refl_) {
    vertex_mirror_ = refl_->vertex_map(mesh_);
  } else {
    vertex_mirror_.resize(mesh_.n_vertices());
    std::iota(vertex_mirror_.begin(), vertex_mirror_.end(), 0);
  }
}

void ConformalState::set_u(std::vector<double> u) {
  u_ = std::move(u);
  delaunay_valid_ = false;
}

FlipLog ConformalState::make_delaunay(const DelaunayOptions& options) {
  delaunay_valid_ = false;
  FlipLog log = dce::make_delaunay(mesh_, metric_, u_, refl_ ? &*refl_ : nullptr, options);
  delaunay_valid_ = true;
  return log;
}

void ConformalState::require_delaunay(const char* what) const {
  if (!delaunay_valid_) throw ContractError(std::string(what) + " requested on a triangulation not made Delaunay for u");
}

std::vector<double> ConformalState::angle_sums() const { return vertex_angle_sums(mesh_, metric_, u_); }

std::vector<double> ConformalState::gradient(std::span<const double> theta_hat) const {
  require_delaunay("gradient");
  std::vector<double> g = angle_sums();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = theta_hat[i] - g[i];
  return g;
}

Eigen::SparseMatrix<double> ConformalState::hessian() const {
  require_delaunay("hessian");
  return cotan_hessian(mesh_, metric_, u_);
}

std::vector<double> ConformalState::scaled_lengths() const {
  std::vector<double> out(mesh_.n_halfedges(), 0.0);
  for (Index h = 0; h < mesh_.n_halfedges(); ++h) {
    if (mesh_.is_parked(h)) continue;
    out[h] = scaled_length(mesh_, metric_, u_, h);
    if (mesh_.parked_of(h) != kNone) {
      const Index p = mesh_.parked_of(h);
      out[p] = out[mesh_.opp(p)] = scaled_diagonal(mesh_, metric_, u_, h);
    }
  }
  return out;
}

Eigen::SparseMatrix<double> cotan_hessian(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u) {
  const Index n = mesh.n_vertices();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.n_halfedges()) * 4);
  for_each_virtual_triangle(mesh, metric, u, [&](const VirtualTriangle& t) {
    for (int j = 0; j < 3; ++j) {
      // Side j joins vertex[j+2] to vertex[j] and faces the corner at vertex[j+1].
      const double w = 0.5 * kernel::cot_opposite(t.length[(j + 1) % 3], t.length[(j + 2) % 3], t.length[j]);
      const Index a = t.vertex[j];
      const Index b = t.vertex[(j + 2) % 3];
      trip.emplace_back(a, b, -w);
      trip.emplace_back(b, a, -w);
      trip.emplace_back(a, a, w);
      trip.emplace_back(b, b, w);
    }
  });
  Eigen::SparseMatrix<double> H(n, n);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

NewtonDirection newton_direction(const Eigen::SparseMatrix<double>& H, std::span<const double> g,
                                 std::span<const Index> vertex_mirror, int refinement_steps) {
  const Index n = static_cast<Index>(H.rows());
  NewtonDirection out;
  out.d.assign(n, 0.0);
  Eigen::VectorXd g0(n);
  // Mirrored angle sums agree only up to roundoff; the right-hand side is
  // symmetrized so that the symmetrized d still solves the system.
  for (Index i = 0; i < n; ++i) g0[i] = vertex_mirror.empty() ? g[i] : (g[i] + g[vertex_mirror[i]]) * 0.5;
  g0.array() -= g0.mean();
  const double gnorm = g0.norm();
  if (gnorm == 0.0 || n < 2) {
    out.ok = true;
    return out;
  }

  // Pin vertex 0: the reduced matrix is positive definite on a connected mesh.
  const Eigen::SparseMatrix<double> Hr = H.bottomRightCorner(n - 1, n - 1);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Hr);
  if (ldlt.info() != Eigen::Success) return out;

  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd rhs = -g0;
  for (int it = 0; it <= refinement_steps; ++it) {
    const Eigen::VectorXd r = rhs - H * d;
    if (it > 0 && r.norm() <= 1e-14 * gnorm) break;
    const Eigen::VectorXd step = ldlt.solve(r.tail(n - 1));
    if (ldlt.info() != Eigen::Success) return out;
    d.tail(n - 1) += step;
  }

  if (!vertex_mirror.empty()) {
    Eigen::VectorXd s(n);
    for (Index i = 0; i < n; ++i) s[i] = (d[i] + d[vertex_mirror[i]]) * 0.5;
    d = s;
  }
  d.array() -= d.mean();
  out.residual = (H * d + g0).norm() / gnorm;
  out.ok = d.allFinite();
  for (Index i = 0; i < n; ++i) out.d[i] = d[i];
  return out;
}

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SolverReport find_conformal_metric(ConformalState& state, std::span<const double> theta_hat,
                                   const SolverConfig& config, const SolverObserver& observer) {
  SolverReport report;
  DelaunayOptions dopt;
  dopt.eps_flip = config.eps_flip;
  dopt.flip_budget_factor = config.flip_budget_factor;

  auto delaunay = [&](FlipCounts& acc) {
    const FlipLog log = state.make_delaunay(dopt);
    acc += log.counts;
    report.total_flips += log.counts;
    if (observer) observer(SolverEvent{SolverEventKind::delaunay, state, &log, nullptr, {}});
  };
  auto finish = [&](Termination t, std::span<const double> g) {
    report.termination = t;
    report.final_residual = max_abs(g);
    const auto u = state.u();
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    report.u_min = u.empty() ? 0.0 : *lo;
    report.u_max = u.empty() ? 0.0 : *hi;
    return report;
  };
  auto record = [&](IterationRecord rec, std::span<const double> g) {
    report.iterations.push_back(rec);
    if (observer) observer(SolverEvent{SolverEventKind::iteration, state, nullptr, &report.iterations.back(), g});
  };

  IterationRecord rec0;
  try {
    delaunay(rec0.flips);
  } catch (const FlipBudgetExceeded& e) {
    report.message = e.what();
    return finish(Termination::flip_budget, {});
  }
  std::vector<double> g = state.gradient(theta_hat);
  rec0.max_error = max_abs(g);
  record(rec0, g);

  for (int step = 1;; ++step) {
    if (max_abs(g) <= config.eps_tol) return finish(Termination::converged, g);
    if (step > config.max_newton_steps) return finish(Termination::max_steps, g);

    const NewtonDirection nd = newton_direction(state.hessian(), g, state.vertex_mirror());
    if (!nd.ok || nd.residual > config.linear_residual_tol) {
      report.message = "linear solve residual " + std::to_string(nd.residual);
      return finish(Termination::linear_failure, g);
    }
    const std::vector<double>& d = nd.d;
    const double decrement = dot(d, g);
    if (std::abs(decrement) < config.min_decrement) return finish(Termination::min_decrement, g);

    IterationRecord rec;
    rec.step = step;
    rec.decrement = decrement;
    rec.linear_residual = nd.residual;
    const std::vector<double> u0(state.u().begin(), state.u().end());
    double lambda = 1.0;
    std::vector<double> trial(u0.size());
    for (;;) {
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = u0[i] + lambda * d[i];
      state.set_u(trial);
      try {
        delaunay(rec.flips);
      } catch (const FlipBudgetExceeded& e) {
        report.message = e.what();
        return finish(Termination::flip_budget, g);
      }
      std::vector<double> gt = state.gradient(theta_hat);
      if (dot(d, gt) <= 0.0 || max_abs(gt) <= config.eps_tol) {
        g = std::move(gt);
        break;
      }
      if (rec.halvings >= config.max_halvings) {
        state.set_u(u0);
        try {
          delaunay(rec.flips);
        } catch (const FlipBudgetExceeded& e) {
          report.message = e.what();
          return finish(Termination::flip_budget, g);
        }
        g = state.gradient(theta_hat);
        rec.max_error = max_abs(g);
        record(rec, g);
        return finish(Termination::max_halvings, g);
      }
      ++rec.halvings;
      lambda *= 0.5;
    }
    rec.step_size = lambda;
    rec.max_error = max_abs(g);
    record(rec, g);
  }
}

}  // namespace dce
