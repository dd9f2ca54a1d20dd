#pragma once

// Planar domain model: the unit disc, simple polygons and the slit square,
// all with an arc-length boundary parametrization, plus open arc sets on the
// boundary.
//
// Parameter conventions (counterclockwise, unit speed):
//   disc         t in [0, 2pi), boundary point e^{it}, start at +1.
//   polygon      start at the first vertex; edges in ccw order.
//   slit square  square edges first, starting at 1+i (length 8), then the
//                upper side of the slit from (-a,0) to (a,0), then the lower
//                side from (a,0) back to (-a,0); total length 8 + 4a.  Points
//                of the open slit carry two parameters (upper and lower
//                side); the slit tips (+-a, 0) carry one.
//
// Domains are immutable after construction and safe to share across threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "crosswedge/geometry.hpp"

namespace crosswedge {

enum class DomainKind { UnitDisc, Polygon, SlitSquare };

// A boundary point is of type 1 when the domain is locally one-sided there
// and of type 2 when it is two-sided (interior points of a slit).
enum class BoundaryPointType { Type1, Type2 };

// Straight boundary piece traversed with unit speed over
// [param_start, param_start + length).
struct BoundaryPiece {
  Complex from;
  Complex to;
  double param_start = 0.0;
  double length = 0.0;
  bool on_slit = false;
  bool slit_upper = false;  // approached from Im > 0
};

class PlanarDomain {
 public:
  static PlanarDomain unit_disc() {
    PlanarDomain d;
    d.kind_ = DomainKind::UnitDisc;
    d.length_ = kTwoPi;
    return d;
  }

  // Simple polygon; input may be given in either orientation, the stored
  // vertex order is counterclockwise with the first vertex kept first.
  static PlanarDomain polygon(std::vector<Complex> vertices) {
    if (vertices.size() < 3) {
      throw std::invalid_argument("polygon needs at least 3 vertices");
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const Complex a = vertices[i];
      const Complex b = vertices[(i + 1) % vertices.size()];
      if (std::abs(b - a) < 1e-14) {
        throw std::invalid_argument("polygon has repeated consecutive vertices");
      }
    }
    if (polygon_signed_area(vertices) < 0.0) {
      std::reverse(vertices.begin() + 1, vertices.end());
    }
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Complex prev = vertices[(i + n - 1) % n];
      const Complex cur = vertices[i];
      const Complex next = vertices[(i + 1) % n];
      if (orientation(prev, cur, next) == 0 && dot2(cur - prev, next - cur) < 0.0) {
        throw std::invalid_argument("polygon folds back on itself");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
        if (adjacent) continue;
        if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                               vertices[(j + 1) % n])) {
          throw std::invalid_argument("polygon is self-intersecting");
        }
      }
    }
    PlanarDomain d;
    d.kind_ = DomainKind::Polygon;
    d.vertices_ = std::move(vertices);
    d.build_pieces_from_vertices();
    return d;
  }

  // The open square with vertices +-1 +- i minus the closed segment
  // [-a, a] on the real axis.
  static PlanarDomain slit_square(double half_width) {
    if (!(half_width > 0.0) || !(half_width < 1.0)) {
      throw std::invalid_argument("slit half-width must lie in (0, 1)");
    }
    PlanarDomain d;
    d.kind_ = DomainKind::SlitSquare;
    d.slit_a_ = half_width;
    d.vertices_ = {Complex(1, 1), Complex(-1, 1), Complex(-1, -1), Complex(1, -1)};
    d.build_pieces_from_vertices();
    const double a = half_width;
    double t = d.length_;
    d.pieces_.push_back({Complex(-a, 0), Complex(a, 0), t, 2 * a, true, true});
    t += 2 * a;
    d.pieces_.push_back({Complex(a, 0), Complex(-a, 0), t, 2 * a, true, false});
    d.length_ = t + 2 * a;
    return d;
  }

  DomainKind kind() const { return kind_; }
  double boundary_length() const { return length_; }
  double slit_half_width() const { return slit_a_; }
  const std::vector<Complex>& vertices() const { return vertices_; }

  double diameter() const {
    switch (kind_) {
      case DomainKind::UnitDisc:
        return 2.0;
      case DomainKind::SlitSquare:
        return 2.0 * std::sqrt(2.0);
      case DomainKind::Polygon: {
        double d = 0.0;
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
          for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
            d = std::max(d, std::abs(vertices_[i] - vertices_[j]));
          }
        }
        return d;
      }
    }
    return 0.0;
  }

  // Axis-aligned bounding box {x0, x1, y0, y1}.
  std::array<double, 4> bounding_box() const {
    if (kind_ == DomainKind::UnitDisc) return {-1.0, 1.0, -1.0, 1.0};
    double x0 = vertices_[0].real(), x1 = x0;
    double y0 = vertices_[0].imag(), y1 = y0;
    for (const Complex v : vertices_) {
      x0 = std::min(x0, v.real());
      x1 = std::max(x1, v.real());
      y0 = std::min(y0, v.imag());
      y1 = std::max(y1, v.imag());
    }
    return {x0, x1, y0, y1};
  }

  double wrap_param(double t) const {
    double w = std::fmod(t, length_);
    if (w < 0.0) w += length_;
    return w;
  }

  bool contains(Complex z) const {
    switch (kind_) {
      case DomainKind::UnitDisc:
        return std::abs(z) < 1.0;
      case DomainKind::Polygon:
        return point_in_polygon(vertices_, z);
      case DomainKind::SlitSquare: {
        if (std::max(std::abs(z.real()), std::abs(z.imag())) >= 1.0) return false;
        return !(z.imag() == 0.0 && std::abs(z.real()) <= slit_a_);
      }
    }
    return false;
  }

  Complex boundary_point(double t) const {
    t = wrap_param(t);
    if (kind_ == DomainKind::UnitDisc) {
      return Complex(std::cos(t), std::sin(t));
    }
    const BoundaryPiece& p = piece_at(t);
    const double s = (t - p.param_start) / p.length;
    return p.from + s * (p.to - p.from);
  }

  // Distance from any point to the boundary point set (slit counted as a
  // segment).  Defined everywhere, inside or outside.
  double boundary_distance(Complex z) const {
    switch (kind_) {
      case DomainKind::UnitDisc:
        return std::abs(1.0 - std::abs(z));
      case DomainKind::Polygon:
      case DomainKind::SlitSquare: {
        double best = std::numeric_limits<double>::infinity();
        for (const BoundaryPiece& p : pieces_) {
          if (p.on_slit && !p.slit_upper) continue;  // geometric duplicate
          best = std::min(best, distance_to_segment(z, p.from, p.to));
        }
        return best;
      }
    }
    return 0.0;
  }

  double distance_to_boundary(Complex z) const {
    if (!contains(z)) {
      throw std::invalid_argument("distance_to_boundary: point is not in the domain");
    }
    return boundary_distance(z);
  }

  // Parameter of the nearest boundary point.  On the slit the side is decided
  // by the sign of Im z (Im z >= 0 selects the upper side).
  double nearest_boundary_param(Complex z) const {
    if (kind_ == DomainKind::UnitDisc) {
      double t = std::atan2(z.imag(), z.real());
      if (t < 0.0) t += kTwoPi;
      return t >= kTwoPi ? 0.0 : t;
    }
    double best = std::numeric_limits<double>::infinity();
    const BoundaryPiece* best_piece = nullptr;
    Complex best_q;
    for (const BoundaryPiece& p : pieces_) {
      if (p.on_slit && !p.slit_upper) continue;
      const Complex q = closest_point_on_segment(z, p.from, p.to);
      const double d = std::abs(z - q);
      if (d < best) {
        best = d;
        best_piece = &p;
        best_q = q;
      }
    }
    if (best_piece->on_slit && z.imag() < 0.0) {
      // lower side: runs from (a, 0) to (-a, 0)
      const BoundaryPiece& lower = pieces_.back();
      const double s = std::abs(best_q - lower.from);
      return wrap_param(lower.param_start + s);
    }
    const double s = std::abs(best_q - best_piece->from);
    return wrap_param(best_piece->param_start + s);
  }

  BoundaryPointType classify_boundary_point(double t) const {
    if (kind_ != DomainKind::SlitSquare) return BoundaryPointType::Type1;
    const BoundaryPiece& p = piece_at(wrap_param(t));
    if (!p.on_slit) return BoundaryPointType::Type1;
    // slit tips are one-sided; only the open slit is two-sided
    const Complex q = boundary_point(t);
    return std::abs(q.real()) < slit_a_ ? BoundaryPointType::Type2
                                        : BoundaryPointType::Type1;
  }

  bool operator==(const PlanarDomain& other) const {
    return kind_ == other.kind_ && slit_a_ == other.slit_a_ &&
           vertices_ == other.vertices_;
  }

 private:
  void build_pieces_from_vertices() {
    double t = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Complex a = vertices_[i];
      const Complex b = vertices_[(i + 1) % vertices_.size()];
      const double len = std::abs(b - a);
      pieces_.push_back({a, b, t, len, false, false});
      t += len;
    }
    length_ = t;
  }

  const BoundaryPiece& piece_at(double t) const {
    // pieces are sorted by param_start; linear scan is fine at this size
    for (std::size_t i = pieces_.size(); i-- > 0;) {
      if (t >= pieces_[i].param_start) return pieces_[i];
    }
    return pieces_.front();
  }

  DomainKind kind_ = DomainKind::UnitDisc;
  std::vector<Complex> vertices_;
  std::vector<BoundaryPiece> pieces_;
  double slit_a_ = 0.0;
  double length_ = kTwoPi;
};

// Open parameter interval (lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// An open subset of a domain boundary stored as disjoint open parameter
// intervals in [0, L).  Intervals wrapping past L are split; overlapping
// intervals are merged; touching intervals stay separate (the shared endpoint
// is not in the set).
class ArcSet {
 public:
  ArcSet(PlanarDomain owner, const std::vector<Interval>& raw)
      : owner_(std::move(owner)) {
    const double L = owner_.boundary_length();
    for (const Interval& iv : raw) {
      if (!(iv.hi > iv.lo)) {
        throw std::invalid_argument("arc interval must have positive length");
      }
      // length exactly L still misses one point; only longer intervals cover
      if (iv.hi - iv.lo > L) {
        full_ = true;
        break;
      }
      const double lo = owner_.wrap_param(iv.lo);
      const double hi = lo + (iv.hi - iv.lo);
      if (hi <= L) {
        intervals_.push_back({lo, hi});
      } else {
        intervals_.push_back({lo, L});
        intervals_.push_back({0.0, hi - L});
      }
    }
    if (full_) {
      intervals_ = {{0.0, L}};
      return;
    }
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const Interval& iv : intervals_) {
      if (!merged.empty() && iv.lo < merged.back().hi) {
        merged.back().hi = std::max(merged.back().hi, iv.hi);
      } else {
        merged.push_back(iv);
      }
    }
    intervals_ = std::move(merged);
  }

  static ArcSet empty(PlanarDomain owner) { return ArcSet(std::move(owner)); }

  // The entire boundary, including the parameter origin.
  static ArcSet full(PlanarDomain owner) {
    ArcSet a(std::move(owner));
    a.full_ = true;
    a.intervals_ = {{0.0, a.owner_.boundary_length()}};
    return a;
  }

  const PlanarDomain& owner() const { return owner_; }
  const std::vector<Interval>& intervals() const { return intervals_; }
  bool is_empty() const { return intervals_.empty(); }
  bool is_full() const { return full_; }

  bool contains(double t) const {
    if (full_) return true;
    t = owner_.wrap_param(t);
    for (const Interval& iv : intervals_) {
      if (t > iv.lo && t < iv.hi) return true;
      if (iv.lo > t) break;
    }
    return false;
  }

  double total_length() const {
    if (full_) return owner_.boundary_length();
    double s = 0.0;
    for (const Interval& iv : intervals_) s += iv.hi - iv.lo;
    return s;
  }

  // Complementary parameter intervals (closures; endpoint ownership does not
  // matter for integration).
  std::vector<Interval> complement() const {
    const double L = owner_.boundary_length();
    if (full_) return {};
    if (intervals_.empty()) return {{0.0, L}};
    std::vector<Interval> gaps;
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      const double from = intervals_[i].hi;
      const double to =
          (i + 1 < intervals_.size()) ? intervals_[i + 1].lo : intervals_[0].lo + L;
      if (to - from > 0.0) {
        if (to <= L) {
          gaps.push_back({from, to});
        } else {
          if (L - from > 0.0) gaps.push_back({from, L});
          if (to - L > 0.0) gaps.push_back({0.0, to - L});
        }
      }
    }
    return gaps;
  }

  bool same_owner(const PlanarDomain& d) const { return owner_ == d; }

 private:
  explicit ArcSet(PlanarDomain owner) : owner_(std::move(owner)) {}

  PlanarDomain owner_;
  std::vector<Interval> intervals_;
  bool full_ = false;
};

}  // namespace crosswedge
