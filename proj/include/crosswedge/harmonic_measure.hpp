#pragma once

// Harmonic measure omega(z, A, D): the bounded harmonic function on D with
// boundary values 0 on the open arc set A and 1 on the rest of the boundary;
// equivalently the probability that Brownian motion started at z first exits
// D through boundary \ A.  On the unit disc it is evaluated by adaptive
// Poisson-kernel quadrature, elsewhere by walk-on-spheres.
//
// Also here: level domains D_eps = {omega < 1 - eps}, the rescaling identity
// omega(z, A, D_eps) = omega(z, A, D) / (1 - eps), and boundary-limit checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crosswedge/domain.hpp"
#include "crosswedge/parallel.hpp"
#include "crosswedge/quadrature.hpp"
#include "crosswedge/rng.hpp"

namespace crosswedge {

enum class OmegaMethod { ClosedForm, Quadrature, Wos };
enum class Containment { In, Out, Uncertain };

inline const char* to_string(OmegaMethod m) {
  switch (m) {
    case OmegaMethod::ClosedForm: return "closed-form";
    case OmegaMethod::Quadrature: return "quadrature";
    case OmegaMethod::Wos: return "wos";
  }
  return "?";
}

inline const char* to_string(Containment c) {
  switch (c) {
    case Containment::In: return "in";
    case Containment::Out: return "out";
    case Containment::Uncertain: return "uncertain";
  }
  return "?";
}

struct MeasureEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for deterministic methods
  std::uint64_t n_samples = 0;
  OmegaMethod method = OmegaMethod::ClosedForm;
};

struct WosOptions {
  std::uint64_t n = 100000;
  double shell = 0.0;  // absolute shell width; 0 selects 1e-6 * diam(D)
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct OmegaOptions {
  double quad_tol = 1e-10;
  WosOptions wos{};
};

// ---------------------------------------------------------------------------
// Unit disc: Poisson integral of the indicator of boundary \ A.

inline MeasureEstimate omega_disc(Complex z, const ArcSet& arcs,
                                  double quad_tol = 1e-10) {
  if (arcs.owner().kind() != DomainKind::UnitDisc) {
    throw std::invalid_argument("omega_disc: arc set does not live on the unit disc");
  }
  if (!(std::abs(z) < 1.0)) {
    throw std::invalid_argument("omega_disc: point is not inside the unit disc");
  }
  const std::vector<Interval> comp = arcs.complement();
  if (z == Complex(0.0, 0.0)) {
    double len = 0.0;
    for (const Interval& iv : comp) len += iv.hi - iv.lo;
    return {len / kTwoPi, 0.0, 0, OmegaMethod::ClosedForm};
  }
  const double r2 = std::norm(z);
  const auto kernel = [&](double theta) {
    const Complex e(std::cos(theta), std::sin(theta));
    return (1.0 - r2) / (kTwoPi * std::norm(e - z));
  };
  double total_len = 0.0;
  for (const Interval& iv : comp) total_len += iv.hi - iv.lo;
  double value = 0.0;
  for (const Interval& iv : comp) {
    const double share = (iv.hi - iv.lo) / std::max(total_len, 1e-300);
    value += integrate_adaptive(kernel, iv.lo, iv.hi, quad_tol * share);
  }
  value = std::clamp(value, 0.0, 1.0);
  return {value, 0.0, 0, OmegaMethod::Quadrature};
}

// ---------------------------------------------------------------------------
// Walk-on-spheres.  One SplitMix64 stream per walk, integer hit counts, so the
// result is bit-identical for any thread count.

inline MeasureEstimate omega_wos(Complex z, const PlanarDomain& d,
                                 const ArcSet& arcs, const WosOptions& opt = {}) {
  if (!arcs.same_owner(d)) {
    throw std::invalid_argument("omega_wos: arc set belongs to a different domain");
  }
  if (!d.contains(z)) {
    throw std::invalid_argument("omega_wos: point is not in the domain");
  }
  if (opt.n < 1) throw std::invalid_argument("omega_wos: need at least one walk");
  const double shell = opt.shell > 0.0 ? opt.shell : 1e-6 * d.diameter();
  if (!(shell > 0.0) || !(shell < d.diameter())) {
    throw std::invalid_argument("omega_wos: shell width out of range");
  }

  const unsigned workers = resolve_thread_count(opt.threads);

  const auto run_block = [&](std::size_t begin, std::size_t end,
                             std::uint64_t& hits) {
    std::uint64_t h = 0;
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream rng(opt.seed, i);
      Complex pos = z;
      for (int step = 0; step < 1000000; ++step) {
        const double dist = d.boundary_distance(pos);
        if (dist <= shell) {
          const double t = d.nearest_boundary_param(pos);
          if (!arcs.contains(t)) ++h;
          break;
        }
        const double a = kTwoPi * rng.next_double();
        pos += dist * Complex(std::cos(a), std::sin(a));
      }
    }
    hits = h;
  };

  // Partition manually so each worker owns one counter; the sum of integer
  // hit counts is independent of the partition.
  std::vector<std::uint64_t> counters(workers, 0);
  unsigned used = 0;
  {
    const std::size_t n = static_cast<std::size_t>(opt.n);
    const std::size_t w = std::min<std::size_t>(workers, n);
    std::vector<std::thread> pool;
    std::size_t chunk = n / w, extra = n % w, begin = 0;
    for (std::size_t t = 0; t < w; ++t) {
      const std::size_t end = begin + chunk + (t < extra ? 1 : 0);
      if (t + 1 == w) {
        run_block(begin, end, counters[t]);
      } else {
        pool.emplace_back([&run_block, &counters, t, begin, end] {
          run_block(begin, end, counters[t]);
        });
      }
      begin = end;
      ++used;
    }
    for (auto& th : pool) th.join();
  }
  std::uint64_t hits = 0;
  for (unsigned t = 0; t < used; ++t) hits += counters[t];

  const double p = static_cast<double>(hits) / static_cast<double>(opt.n);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(opt.n));
  return {p, se, opt.n, OmegaMethod::Wos};
}

// Dispatcher: quadrature on the disc, walk-on-spheres elsewhere.
inline MeasureEstimate omega(Complex z, const PlanarDomain& d, const ArcSet& arcs,
                             const OmegaOptions& opt = {}) {
  if (d.kind() == DomainKind::UnitDisc) {
    return omega_disc(z, arcs, opt.quad_tol);
  }
  return omega_wos(z, d, arcs, opt.wos);
}

// ---------------------------------------------------------------------------
// Fields on rectangular grids.

struct GridSpec {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
  int nx = 21, ny = 21;

  double x(int i) const {
    return nx > 1 ? x0 + (x1 - x0) * i / (nx - 1) : 0.5 * (x0 + x1);
  }
  double y(int j) const {
    return ny > 1 ? y0 + (y1 - y0) * j / (ny - 1) : 0.5 * (y0 + y1);
  }
  Complex point(int i, int j) const { return Complex(x(i), y(j)); }
  std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
};

struct HarmonicMeasureField {
  GridSpec grid;
  std::vector<std::optional<MeasureEstimate>> cells;  // row-major j * nx + i

  const std::optional<MeasureEstimate>& at(int i, int j) const {
    return cells[static_cast<std::size_t>(j) * grid.nx + i];
  }
};

inline HarmonicMeasureField omega_field(const PlanarDomain& d, const ArcSet& arcs,
                                        const GridSpec& grid,
                                        const OmegaOptions& opt = {},
                                        unsigned threads = 0) {
  HarmonicMeasureField field{grid, {}};
  field.cells.assign(grid.size(), std::nullopt);
  parallel_for_blocks(grid.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int i = static_cast<int>(idx % grid.nx);
      const int j = static_cast<int>(idx / grid.nx);
      const Complex z = grid.point(i, j);
      if (!d.contains(z)) continue;
      OmegaOptions local = opt;
      local.wos.threads = 1;
      local.wos.seed = derive_stream_seed(opt.wos.seed, idx);
      field.cells[idx] = omega(z, d, arcs, local);
    }
  });
  return field;
}

// ---------------------------------------------------------------------------
// Level domains D_eps = {z in D : omega(z, A, D) < 1 - eps}.

struct LevelSetSpec {
  PlanarDomain domain;
  ArcSet arcs;
  double epsilon = 0.0;  // in [0, 1)
};

inline Containment level_set_contains(const LevelSetSpec& spec, Complex z,
                                      const OmegaOptions& opt = {}) {
  if (!spec.domain.contains(z)) {
    throw std::invalid_argument("level_set_contains: point is not in the domain");
  }
  const MeasureEstimate est = omega(z, spec.domain, spec.arcs, opt);
  const double threshold = 1.0 - spec.epsilon;
  if (est.value + 3.0 * est.std_error < threshold) return Containment::In;
  if (est.value - 3.0 * est.std_error >= threshold) return Containment::Out;
  return Containment::Uncertain;
}

// ---------------------------------------------------------------------------
// Fast omega lookup on the disc: bilinear table used as the level-crossing
// detector inside verify_level_identity.  Radii are clamped to r_max; the
// walks that need accuracy live well inside the disc.

class DiscOmegaTable {
 public:
  explicit DiscOmegaTable(const ArcSet& arcs, int n = 321, double quad_tol = 1e-8,
                          double r_max = 0.995, unsigned threads = 0)
      : n_(n), r_max_(r_max), values_(static_cast<std::size_t>(n) * n, 0.0) {
    parallel_for_blocks(values_.size(), threads,
                        [&](std::size_t begin, std::size_t end) {
                          for (std::size_t idx = begin; idx < end; ++idx) {
                            const int i = static_cast<int>(idx % n_);
                            const int j = static_cast<int>(idx / n_);
                            Complex z(coord(i), coord(j));
                            const double r = std::abs(z);
                            if (r > r_max_) z *= r_max_ / r;
                            values_[idx] = omega_disc(z, arcs, quad_tol).value;
                          }
                        });
  }

  double value(Complex z) const {
    const double r = std::abs(z);
    if (r > r_max_) z *= r_max_ / r;
    const double h = 2.0 / (n_ - 1);
    double fx = (z.real() + 1.0) / h;
    double fy = (z.imag() + 1.0) / h;
    int i = std::clamp(static_cast<int>(fx), 0, n_ - 2);
    int j = std::clamp(static_cast<int>(fy), 0, n_ - 2);
    const double ax = std::clamp(fx - i, 0.0, 1.0);
    const double ay = std::clamp(fy - j, 0.0, 1.0);
    const double v00 = values_[static_cast<std::size_t>(j) * n_ + i];
    const double v10 = values_[static_cast<std::size_t>(j) * n_ + i + 1];
    const double v01 = values_[static_cast<std::size_t>(j + 1) * n_ + i];
    const double v11 = values_[static_cast<std::size_t>(j + 1) * n_ + i + 1];
    return (1 - ax) * (1 - ay) * v00 + ax * (1 - ay) * v10 +
           (1 - ax) * ay * v01 + ax * ay * v11;
  }

  // Central-difference gradient magnitude of the interpolated field.
  double gradient_norm(Complex z) const {
    const double h = 2.0 / (n_ - 1);
    const double gx = (value(z + Complex(h, 0)) - value(z - Complex(h, 0))) / (2 * h);
    const double gy = (value(z + Complex(0, h)) - value(z - Complex(0, h))) / (2 * h);
    return std::sqrt(gx * gx + gy * gy);
  }

 private:
  double coord(int i) const { return -1.0 + 2.0 * i / (n_ - 1); }

  int n_;
  double r_max_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Rescaling identity for level domains.
//
// LHS: walk-on-spheres inside D_eps.  The distance to the level curve
// {omega = 1 - eps} is estimated as gap / |grad omega| with
// gap = (1 - eps) - omega(z), the gradient taken from the omega table; a
// safety factor plus the hard bound |grad omega| <= 4 / (pi d) (harmonic,
// range [0, 1]) keeps steps essentially inside D_eps, and any overshoot is
// caught by the per-step crossing check.  A walk scores 1 when absorbed at
// the level curve (gap below gap_tol) and 0 when it lands on A.

struct LevelIdentityOptions {
  std::uint64_t n = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double shell = 0.0;      // near-boundary absorption; 0 selects 1e-6 diam
  double gap_tol = 5e-4;   // level-curve absorption threshold
  double quad_tol = 1e-10; // reference omega values
  int table_n = 321;       // disc detector resolution
  std::uint64_t eval_n = 4000;  // per-step omega walks on non-disc domains
};

struct LevelIdentityPoint {
  Complex z;
  double lhs = 0.0;
  double lhs_std_error = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

struct LevelIdentityReport {
  double epsilon = 0.0;
  std::vector<LevelIdentityPoint> points;
  double max_rel_err = 0.0;
};

inline LevelIdentityReport verify_level_identity(
    const PlanarDomain& d, const ArcSet& arcs, double eps,
    std::span<const Complex> pts, const LevelIdentityOptions& opt = {}) {
  if (!(eps >= 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("verify_level_identity: eps must lie in [0, 1)");
  }
  const double shell = opt.shell > 0.0 ? opt.shell : 1e-6 * d.diameter();
  const double threshold = 1.0 - eps;

  // reference omega used for the right-hand side and for point validation
  OmegaOptions ref_opt;
  ref_opt.quad_tol = opt.quad_tol;
  ref_opt.wos.n = std::max<std::uint64_t>(opt.n, 100000);
  ref_opt.wos.seed = derive_stream_seed(opt.seed, 0xEFull);
  ref_opt.wos.threads = opt.threads;

  std::optional<DiscOmegaTable> table;
  if (d.kind() == DomainKind::UnitDisc) {
    table.emplace(arcs, opt.table_n, 1e-8, 0.995, opt.threads);
  }
  const auto fast_omega = [&](Complex p, std::uint64_t walk,
                              std::uint64_t step) -> double {
    if (table) return table->value(p);
    WosOptions w;
    w.n = opt.eval_n;
    w.seed = derive_stream_seed(opt.seed, detail::mix64(walk * 0x10001ull + step));
    w.threads = 1;
    return omega_wos(p, d, arcs, w).value;
  };
  const auto grad_norm = [&](Complex p) -> double {
    if (table) return table->gradient_norm(p);
    return 1e300;  // non-disc backends fall back to the hard cap
  };

  LevelIdentityReport report;
  report.epsilon = eps;
  for (const Complex z : pts) {
    const MeasureEstimate ref = omega(z, d, arcs, ref_opt);
    if (!(ref.value + 3.0 * ref.std_error < threshold)) {
      throw std::invalid_argument(
          "verify_level_identity: test point is outside the level domain");
    }

    const unsigned workers = resolve_thread_count(opt.threads);
    const std::size_t n = static_cast<std::size_t>(opt.n);
    const std::size_t w = std::min<std::size_t>(workers, n);
    std::vector<std::uint64_t> counters(w, 0);
    const auto run_block = [&](std::size_t begin, std::size_t end,
                               std::uint64_t& hits) {
      std::uint64_t h = 0;
      for (std::size_t i = begin; i < end; ++i) {
        RandomStream rng(derive_stream_seed(opt.seed, 1), i);
        Complex pos = z;
        for (std::uint64_t step = 0; step < 4000000; ++step) {
          const double dist = d.boundary_distance(pos);
          if (dist <= shell) {
            const double t = d.nearest_boundary_param(pos);
            // landing off A means the walk crossed the level curve first
            if (!arcs.contains(t)) ++h;
            break;
          }
          const double om = fast_omega(pos, i, step);
          if (om >= threshold) {
            ++h;
            break;
          }
          const double gap = threshold - om;
          if (gap <= opt.gap_tol) {
            ++h;
            break;
          }
          // sharp local estimate of the distance to the level curve; the
          // crossing check above catches any overshoot
          const double gn = std::max(grad_norm(pos), 1e-12);
          const double rho = std::min(0.5 * dist, 0.6 * gap / gn);
          const double a = kTwoPi * rng.next_double();
          pos += rho * Complex(std::cos(a), std::sin(a));
        }
      }
      hits = h;
    };
    {
      std::vector<std::thread> pool;
      std::size_t chunk = n / w, extra = n % w, begin = 0;
      for (std::size_t t = 0; t < w; ++t) {
        const std::size_t end = begin + chunk + (t < extra ? 1 : 0);
        if (t + 1 == w) {
          run_block(begin, end, counters[t]);
        } else {
          pool.emplace_back([&run_block, &counters, t, begin, end] {
            run_block(begin, end, counters[t]);
          });
        }
        begin = end;
      }
      for (auto& th : pool) th.join();
    }
    std::uint64_t hits = 0;
    for (const std::uint64_t c : counters) hits += c;

    LevelIdentityPoint pt;
    pt.z = z;
    pt.lhs = static_cast<double>(hits) / static_cast<double>(opt.n);
    pt.lhs_std_error =
        std::sqrt(pt.lhs * (1.0 - pt.lhs) / static_cast<double>(opt.n));
    pt.rhs = ref.value / (1.0 - eps);
    pt.rel_err = std::abs(pt.lhs - pt.rhs) / std::max(std::abs(pt.rhs), 1e-12);
    report.max_rel_err = std::max(report.max_rel_err, pt.rel_err);
    report.points.push_back(pt);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Boundary limit: omega(z, A, D) -> 0 as z approaches a point of A.

struct BoundaryLimitOptions {
  OmegaOptions omega{};
  double tol = 0.05;
};

struct BoundaryLimitStep {
  Complex z;
  MeasureEstimate estimate;
};

struct BoundaryLimitReport {
  double zeta_param = 0.0;
  std::vector<BoundaryLimitStep> steps;
  bool decreasing_trend = false;
  double final_value = 0.0;
  bool limit_ok = false;
};

inline BoundaryLimitReport boundary_limit_check(const PlanarDomain& d,
                                                const ArcSet& arcs,
                                                double zeta_param,
                                                std::span<const Complex> seq,
                                                const BoundaryLimitOptions& opt = {}) {
  if (!arcs.contains(zeta_param)) {
    throw std::invalid_argument("boundary_limit_check: zeta is not in the arc set");
  }
  BoundaryLimitReport report;
  report.zeta_param = zeta_param;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    OmegaOptions local = opt.omega;
    local.wos.seed = derive_stream_seed(opt.omega.wos.seed, k);
    report.steps.push_back({seq[k], omega(seq[k], d, arcs, local)});
  }
  report.decreasing_trend = true;
  for (std::size_t k = 0; k + 1 < report.steps.size(); ++k) {
    const MeasureEstimate& a = report.steps[k].estimate;
    const MeasureEstimate& b = report.steps[k + 1].estimate;
    if (b.value > a.value + 3.0 * (a.std_error + b.std_error)) {
      report.decreasing_trend = false;
    }
  }
  if (!report.steps.empty()) {
    report.final_value = report.steps.back().estimate.value;
    report.limit_ok = report.final_value < opt.tol;
  }
  return report;
}

}  // namespace crosswedge
