#include "dce/metric.h"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dce/scalar_kernel.h"

namespace dce {

double scaled_length(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u, Index h) {
  return kernel::scale(metric[h], u[mesh.to(h)], u[mesh.from(h)]);
}

double scaled_diagonal(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u, Index h) {
  return kernel::scale(metric.diagonal(mesh, h), u[mesh.from(h)], u[mesh.to(mesh.next(h))]);
}

void for_each_virtual_triangle(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u,
                               const std::function<void(const VirtualTriangle&)>& fn) {
  for (Index f : mesh.faces()) {
    const Index x0 = f;
    const Index x1 = mesh.next(x0);
    const Index x2 = mesh.next(x1);
    if (mesh.next(x2) == x0) {
      fn(VirtualTriangle{{x0, x1, x2},
                         {mesh.to(x0), mesh.to(x1), mesh.to(x2)},
                         {scaled_length(mesh, metric, u, x0), scaled_length(mesh, metric, u, x1),
                          scaled_length(mesh, metric, u, x2)}});
      continue;
    }
    const Index x3 = mesh.next(x2);
    const double d = scaled_diagonal(mesh, metric, u, x0);
    fn(VirtualTriangle{{x0, x1, kNone},
                       {mesh.to(x0), mesh.to(x1), mesh.to(x3)},
                       {scaled_length(mesh, metric, u, x0), scaled_length(mesh, metric, u, x1), d}});
    fn(VirtualTriangle{{x2, x3, kNone},
                       {mesh.to(x2), mesh.to(x3), mesh.to(x1)},
                       {scaled_length(mesh, metric, u, x2), scaled_length(mesh, metric, u, x3), d}});
  }
}

std::vector<double> vertex_angle_sums(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u) {
  std::vector<double> theta(mesh.n_vertices(), 0.0);
  for_each_virtual_triangle(mesh, metric, u, [&](const VirtualTriangle& t) {
    for (int k = 0; k < 3; ++k) {
      theta[t.vertex[k]] += kernel::corner_angle(t.length[k], t.length[(k + 1) % 3], t.length[(k + 2) % 3]);
    }
  });
  return theta;
}

double total_angle_target(const Mesh& mesh) {
  double sum = 0.0;
  for (Index f : mesh.faces()) sum += (mesh.face_degree(f) - 2) * kPi;
  return sum;
}

namespace {

// Half of the Delaunay value contributed by the face of x. Evaluated in long
// double so that co-circular quadrilaterals rarely test negative from both
// diagonals; rounding the sum to double keeps its sign.
long double side_term(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u, Index x) {
  using L = long double;
  const auto scaled = [&](double l, Index i, Index j) { return kernel::scale<L>(l, u[i], u[j]); };
  const L e = scaled(metric[x], mesh.from(x), mesh.to(x));
  const Index n = mesh.next(x);
  const L a = scaled(metric[n], mesh.from(n), mesh.to(n));
  L b;
  if (mesh.face_degree(x) == 3) {
    const Index p = mesh.prev(x);
    b = scaled(metric[p], mesh.from(p), mesh.to(p));
  } else {
    b = scaled(metric.diagonal(mesh, x), mesh.from(x), mesh.to(n));
  }
  return kernel::delaunay_term(a, b, e);
}

}  // namespace

double delaunay_value(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u, Index h) {
  return static_cast<double>(side_term(mesh, metric, u, h) + side_term(mesh, metric, u, mesh.opp(h)));
}

bool is_delaunay(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u, Index h,
                 const Reflection* refl) {
  if (mesh.is_boundary_edge(h)) return true;
  if (refl != nullptr && classify_flip(mesh, *refl, h) == FlipType::irrelevant) return true;
  return delaunay_value(mesh, metric, u, h) >= 0.0;
}

double min_delaunay_value(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u) {
  double best = std::numeric_limits<double>::infinity();
  for (Index e : mesh.edges()) {
    if (mesh.is_boundary_edge(e)) continue;
    best = std::min(best, delaunay_value(mesh, metric, u, e));
  }
  return best;
}

double min_triangle_slack(const Mesh& mesh, const PennerMetric& metric, std::span<const double> u) {
  double best = std::numeric_limits<double>::infinity();
  for_each_virtual_triangle(mesh, metric, u, [&](const VirtualTriangle& t) {
    for (int k = 0; k < 3; ++k) {
      best = std::min(best, t.length[k] + t.length[(k + 1) % 3] - t.length[(k + 2) % 3]);
    }
  });
  return best;
}

double ptolemy_flip_length(const Mesh& mesh, const PennerMetric& metric, Index h) {
  const FlipRecord p = plan_asymmetric_flip(mesh, h);
  const auto& x = p.h;
  return kernel::ptolemy(metric[x[1]], metric[x[2]], metric[x[4]], metric[x[5]], metric[x[0]]);
}

FlipRecord flip_with_length(Mesh& mesh, PennerMetric& metric, Index h) {
  const FlipRecord p = plan_asymmetric_flip(mesh, h);
  const auto& x = p.h;
  const double v = kernel::ptolemy(metric[x[1]], metric[x[2]], metric[x[4]], metric[x[5]], metric[x[0]]);
  execute_asymmetric_flip(mesh, p);
  metric.set_edge(mesh, x[0], v);
  return p;
}

FlipRecord symmetric_flip_with_lengths(Mesh& mesh, Reflection& refl, PennerMetric& metric, Index h) {
  const FlipRecord p = plan_symmetric_flip(mesh, refl, h);
  const auto& x = p.h;
  const auto L = [&](int k) { return metric[x[k]]; };
  auto& len = metric.length;
  switch (p.type) {
    case FlipType::standard: {
      const double v = kernel::ptolemy(L(1), L(2), L(4), L(5), L(0));
      execute_symmetric_flip(mesh, refl, p);
      metric.set_edge(mesh, x[0], v);
      metric.set_edge(mesh, p.mirror[0], v);
      break;
    }
    case FlipType::parallel: {
      const double v = kernel::ptolemy(L(1), L(2), L(4), L(5), L(0));
      execute_symmetric_flip(mesh, refl, p);
      metric.set_edge(mesh, x[0], v);
      break;
    }
    case FlipType::triangle_quad:
      if (!p.reverse) {
        // Flip ap (inside the pentagon a, c, p, p', c') to cp', then ap' to cc'.
        const double cp2 = kernel::ptolemy(L(2), L(1), L(6), L(8), L(7));
        const double cc2 = kernel::ptolemy(cp2, L(2), L(4), L(5), L(8));
        execute_symmetric_flip(mesh, refl, p);
        metric.set_edge(mesh, x[0], cc2);
        len[x[7]] = len[x[8]] = cp2;
      } else {
        const double d = L(7);
        const double ap2 = kernel::ptolemy(d, L(2), L(4), L(5), L(0));
        execute_symmetric_flip(mesh, refl, p);
        metric.set_edge(mesh, x[0], ap2);
        metric.set_edge(mesh, x[3], ap2);
      }
      break;
    case FlipType::quad_quad:
      if (!p.reverse) {
        const double D = len[p.kept_park];
        const double cp2 = kernel::ptolemy(L(2), L(1), L(6), D, L(9));
        const double ca2 = kernel::ptolemy(cp2, L(2), L(7), L(8), D);
        const double cc2 = kernel::ptolemy(ca2, cp2, L(5), L(4), L(8));
        execute_symmetric_flip(mesh, refl, p);
        metric.set_edge(mesh, x[0], cc2);
        len[p.kept_park] = len[mesh.opp(p.kept_park)] = ca2;
        len[x[8]] = len[x[9]] = cp2;
      } else {
        const double d1 = len[p.kept_park];
        const double d2 = L(8);
        const double pa2 = kernel::ptolemy(d1, d2, L(5), L(4), L(0));
        const double D = kernel::ptolemy(d2, L(2), L(7), pa2, d1);
        execute_symmetric_flip(mesh, refl, p);
        metric.set_edge(mesh, x[0], pa2);
        metric.set_edge(mesh, x[3], pa2);
        len[p.kept_park] = len[mesh.opp(p.kept_park)] = D;
      }
      break;
    case FlipType::irrelevant:
      break;
  }
  return p;
}

FlipLog make_delaunay(Mesh& mesh, PennerMetric& metric, std::span<const double> u, Reflection* refl,
                      const DelaunayOptions& options) {
  FlipLog log;
  const Index n = mesh.n_halfedges();
  const long long budget = options.flip_budget_factor * static_cast<long long>(mesh.n_edges());
  std::vector<char> queued(n, 0);
  std::vector<Index> stack;
  const auto push = [&](Index h) {
    if (mesh.is_parked(h)) return;
    const Index e = mesh.edge(h);
    if (!queued[e]) {
      queued[e] = 1;
      stack.push_back(e);
    }
  };
  const std::vector<Index> edges = mesh.edges();
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) push(*it);

  long long flips = 0;
  while (!stack.empty()) {
    const Index h = stack.back();
    stack.pop_back();
    queued[h] = 0;
    if (mesh.is_parked(h) || mesh.is_boundary_edge(h)) continue;
    if (mesh.face(h) == mesh.face(mesh.opp(h))) continue;  // self-adjacent: always Delaunay
    FlipType type = FlipType::standard;
    if (refl != nullptr) {
      type = classify_flip(mesh, *refl, h);
      if (type == FlipType::irrelevant) continue;
    }
    const double value = delaunay_value(mesh, metric, u, h);
    if (!(value < 0.0)) continue;
    if (++flips > budget) {
      throw FlipBudgetExceeded("flip budget of " + std::to_string(budget) + " flips exceeded");
    }

    const auto flip = [&](Index x) {
      return refl != nullptr ? symmetric_flip_with_lengths(mesh, *refl, metric, x) : flip_with_length(mesh, metric, x);
    };
    Index mirror_edge = kNone;
    if (refl != nullptr && (*refl)(h) != h && (*refl)(h) != mesh.opp(h)) mirror_edge = mesh.edge((*refl)(h));
    // Within eps_flip of zero the quadrilateral is co-circular up to roundoff.
    // The flip stands only if it settles the sign; otherwise it is undone and
    // the lengths restored bit for bit (rare, so a full copy is fine).
    const bool tie = value >= -options.eps_flip;
    std::vector<double> saved;
    if (tie) saved = metric.length;
    const FlipRecord rec = flip(h);
    if (tie && !(delaunay_value(mesh, metric, u, rec.h[0]) >= 0.0)) {
      flip(rec.h[0]);
      metric.length = std::move(saved);
      continue;
    }
    switch (rec.type) {
      case FlipType::standard: ++log.counts.standard; break;
      case FlipType::parallel: ++log.counts.parallel; break;
      case FlipType::triangle_quad: ++log.counts.triangle_quad; break;
      case FlipType::quad_quad: ++log.counts.quad_quad; break;
      case FlipType::irrelevant: break;
    }
    if (options.record_events) log.events.push_back({rec.type, rec.reverse, h, mirror_edge});
    for (Index x : rec.h) {
      if (x != kNone && x != rec.h[0] && x != rec.h[3]) push(x);
    }
    for (Index x : rec.mirror) {
      if (x != kNone && x != rec.mirror[0] && x != rec.mirror[3]) push(x);
    }
  }
  return log;
}

}  // namespace dce
