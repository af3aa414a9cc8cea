// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "dce/double_cover.h"
#include "dce/pipeline.h"
#include "support.h"

using namespace dce;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Suite-wide checks run on every solver event.
struct SuiteMonitor {
  // Delaunay post-condition
  long long delaunay_passes = 0;
  long long edges_checked = 0;
  long long delaunay_violations = 0;
  double min_value = INFINITY;
  // Bitwise symmetry
  long long symmetric_states = 0;
  long long symmetry_violations = 0;
  // Gauss-Bonnet conservation
  long long iterations = 0;
  long long gb_violations = 0;
  double worst_gb_ratio = 0.0;  // |Σg| / (1e-10·V)

  SolverObserver observer() {
    return [this](const SolverEvent& e) {
      const Mesh& m = e.state.mesh();
      const PennerMetric& l = e.state.metric();
      const auto u = e.state.u();
      const Reflection* r = e.state.reflection();
      if (e.kind == SolverEventKind::delaunay) {
        ++delaunay_passes;
        for (Index h : m.edges()) {
          if (m.is_boundary_edge(h)) continue;
          ++edges_checked;
          if (!is_delaunay(m, l, u, h, r)) ++delaunay_violations;
          if (!r || classify_flip(m, *r, h) != FlipType::irrelevant)
            min_value = std::min(min_value, delaunay_value(m, l, u, h));
        }
      } else {
        ++iterations;
        const double sum = std::accumulate(e.gradient.begin(), e.gradient.end(), 0.0);
        const double ratio = std::abs(sum) / (1e-10 * m.n_vertices());
        worst_gb_ratio = std::max(worst_gb_ratio, ratio);
        if (ratio > 1.0) ++gb_violations;
      }
      if (r) {
        ++symmetric_states;
        if (!bitwise_symmetric(m, *r, l, u, e.state.vertex_mirror())) ++symmetry_violations;
      }
    };
  }

  static bool bitwise_symmetric(const Mesh& m, const Reflection& r, const PennerMetric& l, std::span<const double> u,
                                const std::vector<Index>& mirror) {
    for (Index v = 0; v < m.n_vertices(); ++v)
      if (u[v] != u[mirror[v]]) return false;
    for (Index h = 0; h < m.n_halfedges(); ++h) {
      if (m.is_parked(h)) continue;
      if (l[h] != l[r(h)]) return false;
      if (m.parked_of(h) != kNone && l[m.parked_of(h)] != l[m.parked_of(r(h))]) return false;
    }
    return true;
  }
};

// Average ranks (ties share the mean rank).
std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// --- 1: random sphere targets -------------------------------------------------
Outcome sphere_protocol(SuiteMonitor& mon) {
  const auto t0 = Clock::now();
  int converged = 0, worst_steps = 0;
  double worst_residual = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const GeneratedProblem gp = sphere_random_angles(seed, 10);
    PipelineOptions opt;
    opt.observer = mon.observer();
    const PipelineResult r = solve_problem(make_problem(gp), opt);
    const SolverReport& rep = r.bundle.report;
    if (rep.converged() && rep.final_residual <= 1e-10 && rep.newton_steps() <= 50) ++converged;
    worst_steps = std::max(worst_steps, rep.newton_steps());
    worst_residual = std::max(worst_residual, rep.final_residual);
  }
  const double secs = seconds_since(t0);
  return {converged >= 49 && secs <= 300.0,
          fmt("%d/50 instances (1002 vertices) reached 1e-10; max %d Newton steps; max residual %.2e; %.1f s total",
              converged, worst_steps, worst_residual, secs)};
}

// --- 2: random boundary curvature ----------------------------------------------
Outcome disk_protocol(SuiteMonitor& mon, std::map<std::string, long long>& flip_totals) {
  int converged = 0;
  double worst_angle = 0.0;
  std::vector<double> flips, range;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const GeneratedProblem gp = disk_random_boundary(seed, 18);
    PipelineOptions opt;
    opt.observer = mon.observer();
    const PipelineResult r = solve_problem(make_problem(gp), opt);
    const SolverReport& rep = r.bundle.report;
    if (rep.converged() && rep.final_residual <= 1e-10) ++converged;
    for (std::size_t v = 0; v < r.angles.size(); ++v)
      if (r.boundary_vertex[v]) worst_angle = std::max(worst_angle, std::abs(r.angles[v] - r.theta_hat[v]));
    flips.push_back(static_cast<double>(rep.total_flips.total()));
    range.push_back(gp.curvature_range);
    flip_totals["(1,1,1)"] += rep.total_flips.standard;
    flip_totals["(1,par,2)"] += rep.total_flips.parallel;
    flip_totals["(1,1,t)"] += rep.total_flips.triangle_quad;
    flip_totals["(1,1,q)"] += rep.total_flips.quad_quad;
  }
  const double rho = spearman(flips, range);
  return {converged == 50 && worst_angle <= 1e-9 && rho > 0.5,
          fmt("%d/50 instances (1027 vertices) reached 1e-10; max boundary angle error %.2e; Spearman rho(flips, "
              "curvature range) = %.3f; flips by type 111/par/t/q = %lld/%lld/%lld/%lld",
              converged, worst_angle, rho, flip_totals["(1,1,1)"], flip_totals["(1,par,2)"], flip_totals["(1,1,t)"],
              flip_totals["(1,1,q)"])};
}

// --- 4: sequential evolution oracle ------------------------------------------------
Outcome oracle_equivalence() {
  int matched = 0, meshes = 0;
  double worst = 0.0;
  long long flips = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    test::SmallMesh a;
    if (seed % 4 == 0) {
      // Genus-one slab, 32 vertices.
      Geometry g = genus_slab(1, 1);
      Rng rng(seed);
      jitter(g, 0.05, rng);
      a.mesh = build_from_face_lists(g.faces);
      a.metric = metric_from_positions(a.mesh, g.positions);
    } else {
      a = test::small_sphere(seed + 1000, 2, 0.2);
    }
    if (a.mesh.n_vertices() > 50) continue;
    ++meshes;
    Rng rng(seed * 7 + 1);
    std::vector<double> u0(a.mesh.n_vertices(), 0.0);
    make_delaunay(a.mesh, a.metric, u0);
    // Two consecutive random steps per mesh.
    bool ok = true;
    for (int step = 0; step < 2; ++step) {
      std::vector<double> u1(u0.size());
      for (double& x : u1) x = rng.uniform(-1.0, 1.0);
      auto b = a;
      flips += make_delaunay(a.mesh, a.metric, u1).counts.total();
      test::sequential_evolution(b.mesh, b.metric, u0, u1, 10000);
      const double d = test::max_relative_difference(test::sorted_scaled_lengths(a.mesh, a.metric, u1),
                                                     test::sorted_scaled_lengths(b.mesh, b.metric, u1));
      worst = std::max(worst, d);
      ok = ok && d <= 1e-9;
      u0 = u1;
    }
    matched += ok;
  }
  return {matched == 20 && meshes == 20,
          fmt("%d/%d meshes (<= 50 vertices, two random steps each, 10^4 substeps) match; max relative "
              "length difference %.2e; %lld single-shot flips",
              matched, meshes, worst, flips)};
}

// --- 5: Ptolemy involution ---------------------------------------------------------------
Outcome ptolemy_involution() {
  Rng rng(2024);
  double worst = 0.0;
  long long pairs = 0;
  // Plain flips with arbitrary positive lengths spanning six orders of magnitude.
  auto s = test::small_sphere(5, 4);
  while (pairs < 100000) {
    const std::vector<Index> edges = s.mesh.edges();
    const Index e = edges[rng.below(edges.size())];
    if (s.mesh.face(e) == s.mesh.face(s.mesh.opp(e))) continue;
    for (Index h : {e, s.mesh.next(e), s.mesh.prev(e), s.mesh.next(s.mesh.opp(e)), s.mesh.prev(s.mesh.opp(e))})
      s.metric.set_edge(s.mesh, h, std::pow(10.0, rng.uniform(-3.0, 3.0)));
    const double before = s.metric[e];
    const FlipRecord r = flip_with_length(s.mesh, s.metric, e);
    flip_with_length(s.mesh, s.metric, r.h[0]);
    worst = std::max(worst, std::abs(s.metric[r.h[0]] - before) / before);
    ++pairs;
  }
  // Symmetric flips on a double cover, each followed by the opposite flip of the new edge.
  long long sym_pairs = 0;
  for (std::uint64_t seed = 1; sym_pairs < 10000; ++seed) {
    Geometry g = hex_disk(3);
    Rng jr(seed);
    jitter(g, 0.15, jr);
    for (auto& p : g.positions) p[2] = 0.0;
    const Mesh m = build_from_face_lists(g.faces);
    CoverProblem cp = build_double_cover(m, metric_from_positions(m, g.positions),
                                         std::vector<double>(m.n_vertices(), kTwoPi));
    for (int it = 0; it < 2000 && sym_pairs < 10000; ++it) {
      const Index h = static_cast<Index>(rng.below(cp.cover.mesh.n_halfedges()));
      if (cp.cover.mesh.is_parked(h) || classify_flip(cp.cover.mesh, cp.cover.refl, h) == FlipType::irrelevant) continue;
      const double before = cp.metric[h];
      const FlipRecord r = symmetric_flip_with_lengths(cp.cover.mesh, cp.cover.refl, cp.metric, h);
      const FlipRecord back = symmetric_flip_with_lengths(cp.cover.mesh, cp.cover.refl, cp.metric, r.h[0]);
      worst = std::max(worst, std::abs(cp.metric[back.h[0]] - before) / before);
      ++sym_pairs;
      // Leave the configuration changed half of the time so that later pairs see varied types.
      if (rng.uniform() < 0.5) symmetric_flip_with_lengths(cp.cover.mesh, cp.cover.refl, cp.metric, back.h[0]);
    }
  }
  return {worst <= 1e-12, fmt("%lld plain + %lld symmetric flip/unflip pairs; max relative length error %.2e", pairs,
                              sym_pairs, worst)};
}

// --- 6: Hessian against finite differences ---------------------------------------------
Outcome hessian_check() {
  int configs = 0, tried = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; configs < 10 && tried < 100; ++seed) {
    ++tried;
    auto s = test::small_sphere(seed + 500, 3, 0.2);  // 92 vertices
    Rng rng(seed);
    std::vector<double> u(s.mesh.n_vertices());
    for (double& x : u) x = rng.uniform(-0.5, 0.5);
    make_delaunay(s.mesh, s.metric, u);
    const Index n = s.mesh.n_vertices();
    const double h = 1e-6;
    // The configuration is flip-free when no edge would flip anywhere in the
    // stencil.
    bool flip_free = true;
    std::vector<std::vector<double>> col(n);
    for (Index j = 0; j < n && flip_free; ++j) {
      auto up = u, dn = u;
      up[j] += h;
      dn[j] -= h;
      flip_free = min_delaunay_value(s.mesh, s.metric, up) >= -1e-12 && min_delaunay_value(s.mesh, s.metric, dn) >= -1e-12;
      const auto tp = vertex_angle_sums(s.mesh, s.metric, up);
      const auto tm = vertex_angle_sums(s.mesh, s.metric, dn);
      col[j].resize(n);
      // Jacobian of g = Θ̂ − Θ.
      for (Index i = 0; i < n; ++i) col[j][i] = -(tp[i] - tm[i]) / (2 * h);
    }
    if (!flip_free) continue;
    ++configs;
    const Eigen::MatrixXd H = Eigen::MatrixXd(cotan_hessian(s.mesh, s.metric, u));
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (std::abs(H(i, j)) > 1e-8) worst = std::max(worst, std::abs(col[j][i] - H(i, j)) / std::abs(H(i, j)));
  }
  return {configs == 10 && worst <= 1e-5,
          fmt("%d flip-free configurations (92 vertices); max entrywise relative error of the central-difference "
              "Jacobian of g against the cotangent Hessian %.2e",
              configs, worst)};
}

// --- 8: always-Delaunay symmetric types ---------------------------------------------
std::string triple(const Mesh& m, const Reflection& r, Index h) {
  const auto face = [&](Index x) -> std::string {
    switch (r.face_label(m, x)) {
      case FaceLabel::sym_triangle: return "t";
      case FaceLabel::sym_quad: return "q";
      default: return "s";
    }
  };
  const EdgeLabel el = r.edge_label(m, h);
  std::string a = face(h), b = face(m.opp(h));
  if (a < b) std::swap(a, b);  // t before q
  const std::string mid = el == EdgeLabel::parallel ? "par" : el == EdgeLabel::perpendicular ? "perp" : "1";
  return "(" + a + "," + mid + "," + b + ")";
}

// Virtual triangles touching the faces of the edge of h all satisfy the
// triangle inequality.
bool local_triangles_valid(const Mesh& m, const PennerMetric& l, std::span<const double> u, Index h) {
  const Index fa = m.face(h), fb = m.face(m.opp(h));
  bool ok = true;
  for_each_virtual_triangle(m, l, u, [&](const VirtualTriangle& t) {
    bool touches = false;
    for (Index x : t.halfedge) touches = touches || (x != kNone && (m.face(x) == fa || m.face(x) == fb));
    if (!touches) return;
    const auto& s = t.length;
    if (!(s[0] < s[1] + s[2] && s[1] < s[0] + s[2] && s[2] < s[0] + s[1])) ok = false;
  });
  return ok;
}

Outcome always_delaunay() {
  const std::vector<std::string> wanted{"(t,par,t)", "(q,par,q)", "(t,1,t)", "(t,1,q)", "(q,1,q)"};
  struct Sample {
    Mesh mesh;
    PennerMetric metric;
    Reflection refl;
    std::vector<double> u;
    std::vector<Index> mirror;
    Index h;
  };
  std::map<std::string, std::vector<Sample>> found;
  // Configurations come from symmetric Delaunay retriangulations of jittered
  // disk covers under random symmetric scale factors.
  Rng rng(99);
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    bool done = true;
    for (const auto& w : wanted) done = done && found[w].size() >= 3;
    if (done) break;
    Geometry g = hex_disk(3);
    Rng jr(seed);
    jitter(g, 0.15, jr);
    for (auto& p : g.positions) p[2] = 0.0;
    const Mesh m0 = build_from_face_lists(g.faces);
    CoverProblem cp = build_double_cover(m0, metric_from_positions(m0, g.positions),
                                         std::vector<double>(m0.n_vertices(), kTwoPi));
    const auto mirror = cp.cover.refl.vertex_map(cp.cover.mesh);
    std::vector<double> u(cp.cover.mesh.n_vertices());
    const double amp = rng.uniform(0.5, 3.0);
    for (Index v = 0; v < cp.cover.mesh.n_vertices(); ++v)
      if (mirror[v] >= v) u[v] = u[mirror[v]] = rng.uniform(-amp, amp);
    symmetric_make_delaunay(cp.cover, cp.metric, u);
    const Mesh& m = cp.cover.mesh;
    for (Index h : m.edges()) {
      if (classify_flip(m, cp.cover.refl, h) != FlipType::irrelevant) continue;
      const std::string t = triple(m, cp.cover.refl, h);
      if (found[t].size() < 3 && local_triangles_valid(m, cp.metric, u, h))
        found[t].push_back(Sample{m, cp.metric, cp.cover.refl, u, mirror, h});
    }
  }
  // Some triples, (t,1,q) in particular, only arise along flip sequences that
  // no Delaunay retriangulation takes: random symmetric flips reach them.
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    bool done = true;
    for (const auto& w : wanted) done = done && found[w].size() >= 3;
    if (done) break;
    Geometry g = hex_disk(2);
    Rng jr(seed + 1000);
    jitter(g, 0.15, jr);
    for (auto& p : g.positions) p[2] = 0.0;
    const Mesh m0 = build_from_face_lists(g.faces);
    CoverProblem cp = build_double_cover(m0, metric_from_positions(m0, g.positions),
                                         std::vector<double>(m0.n_vertices(), kTwoPi));
    Mesh& m = cp.cover.mesh;
    const auto mirror = cp.cover.refl.vertex_map(m);
    const std::vector<double> u(m.n_vertices(), 0.0);
    for (int it = 0; it < 400; ++it) {
      const Index x = static_cast<Index>(rng.below(m.n_halfedges()));
      if (m.is_parked(x) || classify_flip(m, cp.cover.refl, x) == FlipType::irrelevant) continue;
      symmetric_flip_with_lengths(m, cp.cover.refl, cp.metric, x);
      for (Index h : m.edges()) {
        if (classify_flip(m, cp.cover.refl, h) != FlipType::irrelevant) continue;
        const std::string t = triple(m, cp.cover.refl, h);
        if (found[t].size() < 3 && local_triangles_valid(m, cp.metric, u, h))
          found[t].push_back(Sample{m, cp.metric, cp.cover.refl, u, mirror, h});
      }
    }
  }

  bool pass = true;
  std::string detail;
  for (const auto& w : wanted) {
    const auto& samples = found[w];
    long long accepted = 0, attempts = 0, negative = 0;
    double min_value = INFINITY;
    for (std::size_t k = 0; !samples.empty() && accepted < 1000 && attempts < 1000000; ++attempts) {
      const Sample& s = samples[k++ % samples.size()];
      // Random symmetric metric: random symmetric rescaling of a valid one,
      // kept when the faces at the edge remain triangles.
      std::vector<double> u = s.u;
      const double amp = std::pow(10.0, rng.uniform(-2.0, 0.5));
      for (Index v = 0; v < s.mesh.n_vertices(); ++v)
        if (s.mirror[v] >= v) u[v] = u[s.mirror[v]] = s.u[v] + rng.uniform(-amp, amp);
      if (!local_triangles_valid(s.mesh, s.metric, u, s.h)) continue;
      ++accepted;
      const double value = delaunay_value(s.mesh, s.metric, u, s.h);
      min_value = std::min(min_value, value);
      if (value < 0.0) ++negative;
    }
    const bool ok = accepted >= 1000 && negative == 0;
    pass = pass && ok;
    detail += fmt("%s %lld metrics, min value %.3g%s; ", w.c_str(), accepted, min_value, samples.empty() ? " (not found)" : "");
  }
  if (!detail.empty()) detail.resize(detail.size() - 2);
  return {pass, detail};
}

// --- 9: single cone on genus two --------------------------------------------------
Outcome single_cone_stress(SuiteMonitor& mon) {
  int converged = 0;
  double worst = 0.0, widest = 0.0;
  int worst_steps = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GeneratedProblem gp = single_cone(2, seed, 4);
    PipelineOptions opt;
    opt.observer = mon.observer();
    const PipelineResult r = solve_problem(make_problem(gp), opt);
    const SolverReport& rep = r.bundle.report;
    if (rep.final_residual <= 1e-8) ++converged;
    worst = std::max(worst, rep.final_residual);
    widest = std::max(widest, rep.u_max - rep.u_min);
    worst_steps = std::max(worst_steps, rep.newton_steps());
  }
  return {converged == 5, fmt("%d/5 genus-2 instances with one 6pi cone reached <= 1e-8 (max residual %.2e, max %d "
                              "Newton steps, widest u range %.2f, i.e. length scales spanning %.1f decades)",
                              converged, worst, worst_steps, widest, widest / std::log(10.0))};
}

}  // namespace

int main() {
  SuiteMonitor mon;
  std::map<std::string, long long> flip_totals;
  std::vector<std::pair<std::string, Outcome>> results;
  const auto t0 = Clock::now();

  auto record = [&](const std::string& name, Outcome o) {
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    results.emplace_back(name, std::move(o));
  };

  record("1 sphere convergence", sphere_protocol(mon));
  record("2 boundary convergence", disk_protocol(mon, flip_totals));
  const Outcome c9 = single_cone_stress(mon);
  record("3 Delaunay after every retriangulation",
         {mon.delaunay_violations == 0,
          fmt("%lld retriangulations, %lld edge checks, %lld violations, smallest value of a flippable edge %.3g",
              mon.delaunay_passes, mon.edges_checked, mon.delaunay_violations, mon.min_value)});
  record("4 sequential evolution oracle", oracle_equivalence());
  record("5 Ptolemy involution", ptolemy_involution());
  record("6 Hessian", hessian_check());
  record("7 bitwise symmetry",
         {mon.symmetric_states > 0 && mon.symmetry_violations == 0,
          fmt("%lld symmetric states checked, %lld asymmetric", mon.symmetric_states, mon.symmetry_violations)});
  record("8 always-Delaunay types", always_delaunay());
  record("9 single cone", c9);
  record("10 Gauss-Bonnet conservation",
         {mon.iterations > 0 && mon.gb_violations == 0,
          fmt("%lld iterations, worst |sum g| = %.3g x 1e-10 V", mon.iterations, mon.worst_gb_ratio)});

  int failed = 0;
  for (const auto& [name, o] : results) failed += !o.pass;
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(results.size()) - failed, results.size(),
              seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
