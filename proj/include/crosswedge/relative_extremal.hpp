#pragma once

// Relative extremal function of an open subset S of the unit disc:
// u = 0 on S, u -> 1 on the circle away from the closure of S, harmonic in
// between.  Solved by SOR relaxation on a Cartesian grid with Shortley-Weller
// stencils at the curved boundary.  Serves as the Dirichlet oracle for the
// disc-functional checks.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "crosswedge/domain.hpp"

namespace crosswedge {

// Open subset of the closed unit disc given as a finite union of open round
// discs (each intersected with the closed unit disc).
struct DiscUnionSet {
  struct Ball {
    Complex center;
    double radius = 0.0;
  };
  std::vector<Ball> balls;

  bool contains(Complex z) const {
    for (const Ball& b : balls) {
      if (std::abs(z - b.center) < b.radius) return true;
    }
    return false;
  }

  // {theta : e^{i theta} in the union}, as an arc set on the unit circle.
  ArcSet boundary_trace() const {
    std::vector<Interval> arcs;
    for (const Ball& b : balls) {
      const double c = std::abs(b.center);
      if (c == 0.0) {
        if (b.radius > 1.0) return ArcSet::full(PlanarDomain::unit_disc());
        continue;
      }
      // |e^{i t} - center| < r  <=>  cos(t - arg center) > kappa
      const double kappa = (1.0 + c * c - b.radius * b.radius) / (2.0 * c);
      if (kappa >= 1.0) continue;
      if (kappa <= -1.0) return ArcSet::full(PlanarDomain::unit_disc());
      const double half = std::acos(kappa);
      const double mid = std::atan2(b.center.imag(), b.center.real());
      arcs.push_back({mid - half, mid + half});
    }
    if (arcs.empty()) return ArcSet::empty(PlanarDomain::unit_disc());
    return ArcSet(PlanarDomain::unit_disc(), arcs);
  }
};

struct ExtremalGridOptions {
  int n = 161;            // grid nodes per axis on [-1, 1]
  double sor = 1.9;       // relaxation factor
  double tol = 1e-9;      // max per-sweep update at convergence
  int max_sweeps = 40000;
};

class DiscExtremalSolver {
 public:
  explicit DiscExtremalSolver(const DiscUnionSet& S,
                              const ExtremalGridOptions& opt = {})
      : n_(opt.n), h_(2.0 / (opt.n - 1)) {
    if (n_ < 16) throw std::invalid_argument("extremal grid too coarse");
    const ArcSet trace = S.boundary_trace();
    const std::size_t total = static_cast<std::size_t>(n_) * n_;
    u_.assign(total, 0.0);
    kind_.assign(total, Outside);
    arm_.assign(total * 4, 1.0);     // E, W, N, S arm lengths in units of h
    bval_.assign(total * 4, 1.0);    // circle value seen at a short arm

    for (int j = 0; j < n_; ++j) {
      for (int i = 0; i < n_; ++i) {
        const std::size_t idx = id(i, j);
        const Complex z(coord(i), coord(j));
        const double r = std::abs(z);
        if (r >= 1.0) continue;
        if (S.contains(z)) {
          kind_[idx] = Clamped;
          u_[idx] = 0.0;
          continue;
        }
        kind_[idx] = Free;
        u_[idx] = 0.5;
        // shorten arms that poke through the circle
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int ii = i + di[k];
          const int jj = j + dj[k];
          Complex nb(coord(ii), coord(jj));
          if (ii < 0 || jj < 0 || ii >= n_ || jj >= n_ || std::abs(nb) >= 1.0) {
            // intersection of the grid ray with the unit circle
            const double alpha = circle_arm(z, di[k], dj[k]);
            arm_[idx * 4 + k] = alpha;
            const Complex hit = z + alpha * h_ * Complex(di[k], dj[k]);
            double t = std::atan2(hit.imag(), hit.real());
            if (t < 0) t += kTwoPi;
            bval_[idx * 4 + k] = trace.contains(t) ? 0.0 : 1.0;
          }
        }
      }
    }
    relax(opt);
  }

  // Bilinear interpolation; z must lie in the closed disc.
  double value(Complex z) const {
    const double r = std::abs(z);
    if (r > 1.0) throw std::invalid_argument("extremal value query outside the disc");
    if (r > 1.0 - 1.5 * h_) z *= (1.0 - 1.5 * h_) / r;
    const double fx = (z.real() + 1.0) / h_;
    const double fy = (z.imag() + 1.0) / h_;
    const int i = std::min(static_cast<int>(fx), n_ - 2);
    const int j = std::min(static_cast<int>(fy), n_ - 2);
    const double ax = fx - i;
    const double ay = fy - j;
    return (1 - ax) * (1 - ay) * u_[id(i, j)] + ax * (1 - ay) * u_[id(i + 1, j)] +
           (1 - ax) * ay * u_[id(i, j + 1)] + ax * ay * u_[id(i + 1, j + 1)];
  }

 private:
  enum NodeKind : unsigned char { Outside, Clamped, Free };

  std::size_t id(int i, int j) const {
    return static_cast<std::size_t>(j) * n_ + i;
  }
  double coord(int i) const { return -1.0 + i * h_; }

  // Fraction alpha in (0, 1] with |z + alpha h dir| = 1 along a grid ray.
  double circle_arm(Complex z, int di, int dj) const {
    const double zx = z.real(), zy = z.imag();
    double alpha = 1.0;
    if (di != 0) {
      const double root = std::sqrt(std::max(0.0, 1.0 - zy * zy));
      const double xhit = di > 0 ? root : -root;
      alpha = (xhit - zx) / (di * h_);
    } else {
      const double root = std::sqrt(std::max(0.0, 1.0 - zx * zx));
      const double yhit = dj > 0 ? root : -root;
      alpha = (yhit - zy) / (dj * h_);
    }
    return std::clamp(alpha, 1e-6, 1.0);
  }

  void relax(const ExtremalGridOptions& opt) {
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
      double max_delta = 0.0;
      for (int j = 1; j + 1 < n_; ++j) {
        for (int i = 1; i + 1 < n_; ++i) {
          const std::size_t idx = id(i, j);
          if (kind_[idx] != Free) continue;
          double num = 0.0, den = 0.0;
          const double aE = arm_[idx * 4 + 0], aW = arm_[idx * 4 + 1];
          const double aN = arm_[idx * 4 + 2], aS = arm_[idx * 4 + 3];
          const bool irregular = aE < 1.0 || aW < 1.0 || aN < 1.0 || aS < 1.0;
          for (int k = 0; k < 4; ++k) {
            const double a = arm_[idx * 4 + k];
            double nb_val;
            if (a < 1.0) {
              nb_val = bval_[idx * 4 + k];
            } else {
              const std::size_t nb = id(i + di[k], j + dj[k]);
              nb_val = kind_[nb] == Outside ? bval_[idx * 4 + k] : u_[nb];
            }
            const double opp = (k < 2) ? (k == 0 ? aW : aE) : (k == 2 ? aS : aN);
            const double coef = 1.0 / (a * (a + opp));
            num += coef * nb_val;
            den += coef;
          }
          const double gs = num / den;
          // SOR only on regular stencils; Shortley-Weller nodes relax plainly
          const double relax = irregular ? 1.0 : opt.sor;
          const double updated = u_[idx] + relax * (gs - u_[idx]);
          max_delta = std::max(max_delta, std::abs(updated - u_[idx]));
          u_[idx] = updated;
        }
      }
      if (max_delta < opt.tol) break;
    }
  }

  int n_;
  double h_;
  std::vector<double> u_;
  std::vector<unsigned char> kind_;
  std::vector<double> arm_;
  std::vector<double> bval_;
};

}  // namespace crosswedge
