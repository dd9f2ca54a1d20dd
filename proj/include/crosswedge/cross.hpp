#pragma once

// Two-fold boundary crosses.  For a pair of planar domains with distinguished
// open boundary arc sets, (D, A) and (G, B), the cross is
//   W = ((D u A) x B) u (A x (B u G)),
// and the wedge is {(z, w) : omega(z, A, D) + omega(w, B, G) < 1} -- the
// region onto which separately holomorphic cross data extends.  Arc points
// carry omega = 0 (the boundary limit of the measure).

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "crosswedge/domain.hpp"
#include "crosswedge/harmonic_measure.hpp"
#include "crosswedge/rng.hpp"

namespace crosswedge {

struct CrossSpec {
  PlanarDomain d;
  ArcSet a;
  PlanarDomain g;
  ArcSet b;
  OmegaOptions opt_d{};
  OmegaOptions opt_g{};

  CrossSpec(PlanarDomain d_, ArcSet a_, PlanarDomain g_, ArcSet b_,
            OmegaOptions od = {}, OmegaOptions og = {})
      : d(std::move(d_)), a(std::move(a_)), g(std::move(g_)), b(std::move(b_)),
        opt_d(od), opt_g(og) {
    if (a.is_empty() || b.is_empty()) {
      throw std::invalid_argument("cross: arc sets must be nonempty");
    }
    if (!a.same_owner(d) || !b.same_owner(g)) {
      throw std::invalid_argument("cross: arc set owners do not match the domains");
    }
  }

  CrossSpec swapped() const { return CrossSpec(g, b, d, a, opt_g, opt_d); }
};

namespace detail {
// omega on D u A: interior points use the solver, points on the arc set give
// the boundary limit 0.
inline MeasureEstimate omega_on_closure(const PlanarDomain& d, const ArcSet& arcs,
                                        Complex z, const OmegaOptions& opt) {
  if (d.contains(z)) return omega(z, d, arcs, opt);
  if (d.boundary_distance(z) <= 1e-9 * d.diameter()) {
    const double t = d.nearest_boundary_param(z);
    if (arcs.contains(t)) return {0.0, 0.0, 0, OmegaMethod::ClosedForm};
  }
  throw std::invalid_argument("cross: point is neither in the domain nor on its arcs");
}
}  // namespace detail

inline MeasureEstimate omega_sum(const CrossSpec& spec, Complex z, Complex w) {
  const MeasureEstimate ez = detail::omega_on_closure(spec.d, spec.a, z, spec.opt_d);
  const MeasureEstimate ew = detail::omega_on_closure(spec.g, spec.b, w, spec.opt_g);
  MeasureEstimate out;
  out.value = ez.value + ew.value;
  out.std_error = std::sqrt(ez.std_error * ez.std_error + ew.std_error * ew.std_error);
  out.n_samples = ez.n_samples + ew.n_samples;
  out.method = (ez.method == OmegaMethod::Wos || ew.method == OmegaMethod::Wos)
                   ? OmegaMethod::Wos
                   : (ez.method == OmegaMethod::Quadrature ||
                              ew.method == OmegaMethod::Quadrature
                          ? OmegaMethod::Quadrature
                          : OmegaMethod::ClosedForm);
  return out;
}

// Strict inequality defines the wedge; sums within 1e-9 of 1 classify "out".
inline Containment wedge_verdict(const MeasureEstimate& sum) {
  const double threshold = 1.0 - 1e-9;
  if (sum.value + 3.0 * sum.std_error < threshold) return Containment::In;
  if (sum.value - 3.0 * sum.std_error >= threshold) return Containment::Out;
  return Containment::Uncertain;
}

inline Containment wedge_contains(const CrossSpec& spec, Complex z, Complex w) {
  return wedge_verdict(omega_sum(spec, z, w));
}

// ---------------------------------------------------------------------------
// Sampling functions on the cross.

enum class Stratum { AxG, DxB, AxB };

inline const char* to_string(Stratum s) {
  switch (s) {
    case Stratum::AxG: return "AxG";
    case Stratum::DxB: return "DxB";
    case Stratum::AxB: return "AxB";
  }
  return "?";
}

struct CrossSample {
  Complex z;
  Complex w;
  Complex value;
  Stratum stratum = Stratum::AxB;
};

struct CrossSamples {
  std::vector<CrossSample> samples;
  double sup_w_norm = 0.0;   // empirical |f|_W
  double sup_ab_norm = 0.0;  // empirical |f|_{A x B}
  std::uint64_t seed = 0;
};

struct StratumCounts {
  std::size_t a_g = 0;
  std::size_t d_b = 0;
  std::size_t a_b = 0;
};

namespace detail {

inline double arc_param_at_fraction(const ArcSet& arcs, double frac) {
  const double target = frac * arcs.total_length();
  double acc = 0.0;
  for (const Interval& iv : arcs.intervals()) {
    const double len = iv.hi - iv.lo;
    if (target < acc + len) return iv.lo + (target - acc);
    acc += len;
  }
  const Interval& last = arcs.intervals().back();
  return 0.5 * (last.lo + last.hi);
}

inline Complex sample_arc_point(const ArcSet& arcs, RandomStream& rng) {
  return arcs.owner().boundary_point(arc_param_at_fraction(arcs, rng.next_double()));
}

inline Complex sample_interior_point(const PlanarDomain& d, RandomStream& rng) {
  const auto bb = d.bounding_box();
  for (int it = 0; it < 100000; ++it) {
    const Complex z(bb[0] + (bb[1] - bb[0]) * rng.next_double(),
                    bb[2] + (bb[3] - bb[2]) * rng.next_double());
    if (d.contains(z)) return z;
  }
  throw std::runtime_error("interior sampling failed (degenerate domain?)");
}

}  // namespace detail

using CrossFunction = std::function<Complex(Complex, Complex)>;

inline CrossSamples sample_cross(const CrossSpec& spec, const CrossFunction& f,
                                 const StratumCounts& counts, std::uint64_t seed) {
  CrossSamples out;
  out.seed = seed;
  out.samples.reserve(counts.a_g + counts.d_b + counts.a_b);
  std::uint64_t stream = 0;

  const auto push = [&](Complex z, Complex w, Stratum s) {
    const Complex v = f(z, w);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::runtime_error("cross function evaluation failed");
    }
    out.samples.push_back({z, w, v, s});
    const double mag = std::abs(v);
    out.sup_w_norm = std::max(out.sup_w_norm, mag);
    if (s == Stratum::AxB) out.sup_ab_norm = std::max(out.sup_ab_norm, mag);
  };

  for (std::size_t i = 0; i < counts.a_g; ++i) {
    RandomStream rng(seed, stream++);
    push(detail::sample_arc_point(spec.a, rng),
         detail::sample_interior_point(spec.g, rng), Stratum::AxG);
  }
  for (std::size_t i = 0; i < counts.d_b; ++i) {
    RandomStream rng(seed, stream++);
    push(detail::sample_interior_point(spec.d, rng),
         detail::sample_arc_point(spec.b, rng), Stratum::DxB);
  }
  for (std::size_t i = 0; i < counts.a_b; ++i) {
    RandomStream rng(seed, stream++);
    push(detail::sample_arc_point(spec.a, rng),
         detail::sample_arc_point(spec.b, rng), Stratum::AxB);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wedge slice {z : omega(z, A, D) < 1 - omega(w, B, G)} at fixed w.

struct SliceCell {
  double omega_sum = 0.0;
  double std_error = 0.0;
  Containment verdict = Containment::Uncertain;
};

struct WedgeSlice {
  GridSpec grid;
  Complex w;
  std::vector<std::optional<SliceCell>> cells;  // row-major j * nx + i
};

inline WedgeSlice wedge_slice(const CrossSpec& spec, Complex w, const GridSpec& grid,
                              unsigned threads = 0) {
  const MeasureEstimate ew = detail::omega_on_closure(spec.g, spec.b, w, spec.opt_g);
  WedgeSlice slice{grid, w, {}};
  slice.cells.assign(grid.size(), std::nullopt);
  parallel_for_blocks(grid.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int i = static_cast<int>(idx % grid.nx);
      const int j = static_cast<int>(idx / grid.nx);
      const Complex z = grid.point(i, j);
      if (!spec.d.contains(z)) continue;
      OmegaOptions local = spec.opt_d;
      local.wos.threads = 1;
      local.wos.seed = derive_stream_seed(spec.opt_d.wos.seed, idx);
      const MeasureEstimate ez = omega(z, spec.d, spec.a, local);
      SliceCell cell;
      cell.omega_sum = ez.value + ew.value;
      cell.std_error =
          std::sqrt(ez.std_error * ez.std_error + ew.std_error * ew.std_error);
      MeasureEstimate sum;
      sum.value = cell.omega_sum;
      sum.std_error = cell.std_error;
      cell.verdict = wedge_verdict(sum);
      slice.cells[idx] = cell;
    }
  });
  return slice;
}

}  // namespace crosswedge
