#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

// Length-only triangle formulas. Templated on the real type so that a wider
// floating type with the usual math overloads can be substituted.
namespace dce::kernel {

// ℓ·exp((ui + uj)/2).
template <class Real>
Real scale(Real length, Real ui, Real uj) {
  using std::exp;
  return length * exp((ui + uj) / Real(2));
}

// Angle between sides a and b, opposite side c. Half-angle form: accurate for
// needle triangles. Length triples violating the triangle inequality give the
// limiting value (π when c is too long, 0 otherwise), which is exactly what
// arccos of the clamped cosine returns.
template <class Real>
Real corner_angle(Real a, Real b, Real c) {
  using std::atan2;
  using std::sqrt;
  const Real t1 = c - a + b;
  const Real t2 = c + a - b;
  const Real t3 = a + b + c;
  const Real t4 = a + b - c;
  if (t4 <= Real(0)) return Real(std::numbers::pi);
  if (t1 <= Real(0) || t2 <= Real(0)) return Real(0);
  return Real(2) * atan2(sqrt(t1 * t2), sqrt(t3 * t4));
}

// Twice the cosine of the angle opposite e in the triangle (a, b, e). The sum
// of this term over the two triangles of an edge is the Delaunay value.
template <class Real>
Real delaunay_term(Real a, Real b, Real e) {
  return (a * a + b * b - e * e) / (a * b);
}

// Ptolemy's relation: the second diagonal of a quadrilateral with sides
// (s1, s2, s3, s4) in cyclic order and diagonal d splitting it into (s1, s2, d)
// and (s3, s4, d).
template <class Real>
Real ptolemy(Real s1, Real s2, Real s3, Real s4, Real d) {
  return (s1 * s3 + s2 * s4) / d;
}

// Area via Kahan's stable Heron formula; 0 for degenerate or violating triples.
template <class Real>
Real triangle_area(Real a, Real b, Real c) {
  using std::sqrt;
  if (a < b) std::swap(a, b);
  if (b < c) std::swap(b, c);
  if (a < b) std::swap(a, b);
  const Real p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  if (!(p > Real(0))) return Real(0);
  return sqrt(p) / Real(4);
}

// Cotangent of the angle opposite c. Degenerate triangles contribute 0.
template <class Real>
Real cot_opposite(Real a, Real b, Real c) {
  const Real area = triangle_area(a, b, c);
  if (!(area > Real(0))) return Real(0);
  return (a * a + b * b - c * c) / (Real(4) * area);
}

}  // namespace dce::kernel
