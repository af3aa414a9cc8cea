#include "dce/generators.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace dce {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Orients every face of a star-shaped closed surface outwards.
void orient_outwards(Geometry& g) {
  for (auto& f : g.faces) {
    const Vec3& a = g.positions[f[0]];
    const Vec3 n = cross(sub(g.positions[f[1]], a), sub(g.positions[f[2]], a));
    if (dot(n, a) < 0) std::swap(f[1], f[2]);
  }
}

}  // namespace

Geometry tetrahedron() {
  Geometry g;
  g.positions = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  g.faces = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  orient_outwards(g);
  return g;
}

Geometry octahedron() {
  Geometry g;
  g.positions = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (Index x : {0, 1})
    for (Index y : {2, 3})
      for (Index z : {4, 5}) g.faces.push_back({x, y, z});
  orient_outwards(g);
  return g;
}

Geometry icosahedron() {
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  Geometry g;
  g.positions = {{-1, p, 0}, {1, p, 0},  {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                 {0, -1, -p}, {0, 1, -p}, {p, 0, -1},  {p, 0, 1},  {-p, 0, -1}, {-p, 0, 1}};
  for (auto& v : g.positions) {
    const double n = norm(v);
    for (double& c : v) c /= n;
  }
  g.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  orient_outwards(g);
  return g;
}

Geometry geodesic_sphere(int frequency) {
  const Geometry ico = icosahedron();
  if (frequency <= 1) return ico;
  const int n = frequency;
  Geometry g;
  // Lattice points are keyed by their (vertex, weight) pairs, so points on
  // shared icosahedron edges are identified combinatorially.
  std::map<std::vector<std::pair<Index, int>>, Index> ids;
  auto point = [&](const std::vector<Index>& f, int i, int j) {
    std::vector<std::pair<Index, int>> key;
    const int w[3] = {n - i - j, i, j};
    for (int k = 0; k < 3; ++k)
      if (w[k] != 0) key.emplace_back(f[k], w[k]);
    std::sort(key.begin(), key.end());
    const auto [it, inserted] = ids.try_emplace(key, static_cast<Index>(g.positions.size()));
    if (inserted) {
      Vec3 p{0, 0, 0};
      for (const auto& [v, wt] : key)
        for (int c = 0; c < 3; ++c) p[c] += wt * ico.positions[v][c];
      const double len = norm(p);
      for (double& c : p) c /= len;
      g.positions.push_back(p);
    }
    return it->second;
  };
  for (const auto& f : ico.faces) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; i + j < n; ++j) {
        g.faces.push_back({point(f, i, j), point(f, i + 1, j), point(f, i, j + 1)});
        if (i + j + 2 <= n) g.faces.push_back({point(f, i + 1, j), point(f, i + 1, j + 1), point(f, i, j + 1)});
      }
    }
  }
  return g;
}

Geometry hex_disk(int rings) {
  const int n = rings;
  Geometry g;
  std::map<std::pair<int, int>, Index> ids;
  auto inside = [n](int q, int r) { return std::abs(q) <= n && std::abs(r) <= n && std::abs(q + r) <= n; };
  for (int r = -n; r <= n; ++r) {
    for (int q = -n; q <= n; ++q) {
      if (!inside(q, r)) continue;
      ids[{q, r}] = static_cast<Index>(g.positions.size());
      g.positions.push_back({q + 0.5 * r, r * std::sqrt(3.0) / 2.0, 0.0});
    }
  }
  for (int r = -n; r <= n; ++r) {
    for (int q = -n; q <= n; ++q) {
      if (inside(q, r) && inside(q + 1, r) && inside(q, r + 1))
        g.faces.push_back({ids[{q, r}], ids[{q + 1, r}], ids[{q, r + 1}]});
      if (inside(q + 1, r) && inside(q + 1, r + 1) && inside(q, r + 1))
        g.faces.push_back({ids[{q + 1, r}], ids[{q + 1, r + 1}], ids[{q, r + 1}]});
    }
  }
  return g;
}

Geometry square_grid(int n) {
  Geometry g;
  auto id = [n](int i, int j) { return static_cast<Index>(j * (n + 1) + i); };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) g.positions.push_back({double(i), double(j), 0.0});
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      g.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      g.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return g;
}

Geometry genus_slab(int genus, int subdivision) {
  const int nx = 2 * genus + 1;
  const int ny = 3;
  const int s = std::max(1, subdivision);
  auto occupied = [&](int x, int y, int z) {
    if (x < 0 || x >= nx || y < 0 || y >= ny || z != 0) return false;
    return !(y == 1 && x % 2 == 1 && x < 2 * genus);
  };
  Geometry g;
  std::map<std::array<int, 3>, Index> ids;
  auto vertex = [&](const std::array<int, 3>& p) {
    const auto [it, inserted] = ids.try_emplace(p, static_cast<Index>(g.positions.size()));
    if (inserted) g.positions.push_back({double(p[0]) / s, double(p[1]) / s, double(p[2]) / s});
    return it->second;
  };
  struct Dir {
    std::array<int, 3> n, t1, t2;
  };
  // t1 × t2 = n for outward orientation.
  const Dir dirs[6] = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},  {{-1, 0, 0}, {0, 0, 1}, {0, 1, 0}},
                       {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},  {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}},
                       {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},  {{0, 0, -1}, {0, 1, 0}, {1, 0, 0}}};
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      if (!occupied(x, y, 0)) continue;
      for (const Dir& d : dirs) {
        if (occupied(x + d.n[0], y + d.n[1], d.n[2])) continue;
        std::array<int, 3> base{x * s, y * s, 0};
        for (int c = 0; c < 3; ++c)
          if (d.n[c] > 0) base[c] += s;
        auto at = [&](int a, int b) {
          std::array<int, 3> p = base;
          for (int c = 0; c < 3; ++c) p[c] += a * d.t1[c] + b * d.t2[c];
          return vertex(p);
        };
        for (int a = 0; a < s; ++a) {
          for (int b = 0; b < s; ++b) {
            const Index p00 = at(a, b), p10 = at(a + 1, b), p11 = at(a + 1, b + 1), p01 = at(a, b + 1);
            if ((a + b) % 2 == 0) {
              g.faces.push_back({p00, p10, p11});
              g.faces.push_back({p00, p11, p01});
            } else {
              g.faces.push_back({p00, p10, p01});
              g.faces.push_back({p10, p11, p01});
            }
          }
        }
      }
    }
  }
  return g;
}

void jitter(Geometry& geometry, double amplitude, Rng& rng) {
  for (auto& p : geometry.positions)
    for (double& c : p) c += rng.uniform(-amplitude, amplitude);
}

void jitter_radius(Geometry& geometry, double amplitude, Rng& rng) {
  for (auto& p : geometry.positions) {
    const double scale = (1.0 + rng.uniform(-amplitude, amplitude)) / norm(p);
    for (double& c : p) c *= scale;
  }
}

PennerMetric metric_from_positions(const Mesh& mesh, const std::vector<std::array<double, 3>>& positions) {
  PennerMetric m;
  m.length.assign(mesh.n_halfedges(), 0.0);
  for (Index h = 0; h < mesh.n_halfedges(); ++h) {
    if (mesh.is_parked(h)) continue;
    const double l = norm(sub(positions[mesh.to(h)], positions[mesh.from(h)]));
    if (!(l > 0.0)) throw InputError("zero-length edge at halfedge " + std::to_string(h));
    m.length[h] = l;
  }
  return m;
}

void normalize_sum(std::vector<double>& values, double target, double lo, double hi) {
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  double room = 0.0;
  if (sum > target) {
    for (double v : values) room += v - lo;
    const double t = (sum - target) / room;
    for (double& v : values) v -= t * (v - lo);
  } else if (sum < target) {
    for (double v : values) room += hi - v;
    const double t = (target - sum) / room;
    for (double& v : values) v += t * (hi - v);
  }
  const double rest = (target - std::accumulate(values.begin(), values.end(), 0.0)) / values.size();
  for (double& v : values) v += rest;
}

GeneratedProblem sphere_random_angles(std::uint64_t seed, int frequency) {
  GeneratedProblem p;
  p.kind = "sphere-random-angles";
  p.geometry = geodesic_sphere(frequency);
  Rng rng(seed);
  p.theta_hat.resize(p.geometry.positions.size());
  for (double& t : p.theta_hat) t = rng.open_uniform(kPi, 3 * kPi);
  normalize_sum(p.theta_hat, kPi * static_cast<double>(p.geometry.faces.size()), kPi, 3 * kPi);
  const auto [lo, hi] = std::minmax_element(p.theta_hat.begin(), p.theta_hat.end());
  p.curvature_range = *hi - *lo;
  return p;
}

GeneratedProblem disk_random_boundary(std::uint64_t seed, int rings) {
  GeneratedProblem p;
  p.kind = "disk-random-boundary";
  p.geometry = hex_disk(rings);
  Rng rng(seed);
  const double r = rng.open_uniform(0.0, kPi);
  std::vector<Index> boundary;
  for (Index v = 0; v < static_cast<Index>(p.geometry.positions.size()); ++v) {
    const auto& x = p.geometry.positions[v];
    // Axial coordinates of the lattice point.
    const int rr = static_cast<int>(std::lround(x[1] * 2.0 / std::sqrt(3.0)));
    const int q = static_cast<int>(std::lround(x[0] - 0.5 * rr));
    if (std::max({std::abs(q), std::abs(rr), std::abs(q + rr)}) == rings) boundary.push_back(v);
  }
  std::vector<double> kappa(boundary.size());
  for (double& k : kappa) k = rng.open_uniform(-r, r);
  normalize_sum(kappa, kTwoPi, -kPi, kPi);
  p.theta_hat.assign(p.geometry.positions.size(), kTwoPi);
  for (std::size_t i = 0; i < boundary.size(); ++i) p.theta_hat[boundary[i]] = kPi - kappa[i];
  const auto [lo, hi] = std::minmax_element(kappa.begin(), kappa.end());
  p.curvature_range = *hi - *lo;
  return p;
}

GeneratedProblem single_cone(int genus, std::uint64_t seed, int subdivision) {
  GeneratedProblem p;
  p.kind = "single-cone-genus-" + std::to_string(genus);
  p.geometry = genus_slab(genus, subdivision);
  Rng rng(seed);
  jitter(p.geometry, 0.1 / subdivision, rng);
  p.theta_hat.assign(p.geometry.positions.size(), kTwoPi);
  p.theta_hat[rng.below(p.geometry.positions.size())] = kTwoPi * (2 * genus - 1);
  p.curvature_range = kTwoPi * (2 * genus - 2);
  return p;
}

}  // namespace dce
