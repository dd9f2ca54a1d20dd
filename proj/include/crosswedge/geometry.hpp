#pragma once

// Planar primitives shared by the domain model: segment projections,
// polygon membership and simplicity tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>

namespace crosswedge {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double cross2(Complex a, Complex b) {
  return a.real() * b.imag() - a.imag() * b.real();
}

inline double dot2(Complex a, Complex b) {
  return a.real() * b.real() + a.imag() * b.imag();
}

inline Complex closest_point_on_segment(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return a;
  const double s = std::clamp(dot2(p - a, ab) / len2, 0.0, 1.0);
  return a + s * ab;
}

inline double distance_to_segment(Complex p, Complex a, Complex b) {
  return std::abs(p - closest_point_on_segment(p, a, b));
}

// +1 left turn, -1 right turn, 0 collinear.
inline int orientation(Complex a, Complex b, Complex c) {
  const double v = cross2(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

inline bool collinear_point_on_segment(Complex a, Complex b, Complex p) {
  return std::min(a.real(), b.real()) <= p.real() &&
         p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() &&
         p.imag() <= std::max(a.imag(), b.imag());
}

// Closed-segment intersection; shared endpoints count as a hit.
inline bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && collinear_point_on_segment(a, b, c)) return true;
  if (o2 == 0 && collinear_point_on_segment(a, b, d)) return true;
  if (o3 == 0 && collinear_point_on_segment(c, d, a)) return true;
  if (o4 == 0 && collinear_point_on_segment(c, d, b)) return true;
  return false;
}

inline double polygon_signed_area(std::span<const Complex> poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    s += cross2(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * s;
}

// Strict interior test; points on the boundary report false.
inline bool point_in_polygon(std::span<const Complex> poly, Complex p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Complex a = poly[j];
    const Complex b = poly[i];
    if (orientation(a, b, p) == 0 && collinear_point_on_segment(a, b, p)) {
      return false;
    }
    if ((b.imag() > p.imag()) != (a.imag() > p.imag())) {
      const double x = b.real() + (p.imag() - b.imag()) * (a.real() - b.real()) /
                                      (a.imag() - b.imag());
      if (p.real() < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace crosswedge
