#pragma once

// Numerical continuation of cross data onto the wedge.  A tensor-product
// holomorphic basis (monomials z^j w^k on the bidisc) is fitted to samples of
// f on the cross by ridge-regularized least squares.  Because the difference
// between the fit and the true extension is itself a cross function, the
// two-constants estimate
//   |g(z, w)| <= |g|_{AxB}^{1 - omega} |g|_W^{omega},  omega = omega-sum,
// turns the fit's residual sups on W and on AxB into a pointwise error bound
// on the wedge.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crosswedge/cross.hpp"
#include "crosswedge/linalg.hpp"

namespace crosswedge {

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TensorFit {
  int deg_z = 0;
  int deg_w = 0;
  std::vector<Complex> coef;  // (deg_z+1) x (deg_w+1), row-major c[j][k]
  std::string basis = "monomial-bidisc";
  double eps_w = 0.0;        // sup residual over all cross samples
  double eps_ab = 0.0;       // sup residual over the AxB samples
  double sup_w_norm = 0.0;   // empirical |f|_W of the data
  double sup_ab_norm = 0.0;  // empirical |f|_{AxB} of the data
  double ridge = 0.0;
  double condition = 0.0;    // normal-system diagnostic
  std::uint64_t seed = 0;

  Complex at(int j, int k) const {
    return coef[static_cast<std::size_t>(j) * (deg_w + 1) + k];
  }

  Complex evaluate(Complex z, Complex w) const {
    // Horner in z of Horner-in-w rows
    Complex acc(0, 0);
    for (int j = deg_z; j >= 0; --j) {
      Complex row(0, 0);
      for (int k = deg_w; k >= 0; --k) {
        row = row * w + at(j, k);
      }
      acc = acc * z + row;
    }
    return acc;
  }
};

// Weighted ridge least squares with `calibration_rounds` deterministic
// reweighting passes (weights proportional to the previous residual
// magnitudes).  Plain least squares leaves the residual sup a factor ~3 above
// what the coefficient space supports; two reweighting rounds close most of
// that gap while staying a linear solve per pass.
inline TensorFit fit_extension(const CrossSamples& samples, int deg_z, int deg_w,
                               double ridge = 1e-10, int calibration_rounds = 2) {
  if (deg_z < 0 || deg_w < 0) throw std::invalid_argument("fit: negative degree");
  const int m = (deg_z + 1) * (deg_w + 1);
  const std::size_t n = samples.samples.size();
  bool have_ab = false, have_w = false;
  for (const CrossSample& s : samples.samples) {
    if (s.stratum == Stratum::AxB) have_ab = true;
    else have_w = true;
  }
  if (!have_ab || !have_w) {
    throw std::invalid_argument("fit: need samples in both AxB and the open strata");
  }
  if (n < static_cast<std::size_t>(4 * m)) {
    throw std::invalid_argument("fit: need at least 4 samples per coefficient");
  }

  // precompute basis rows
  std::vector<Complex> rows(n * static_cast<std::size_t>(m));
  for (std::size_t s = 0; s < n; ++s) {
    Complex* row = &rows[s * m];
    Complex zp(1, 0);
    int idx = 0;
    for (int j = 0; j <= deg_z; ++j) {
      Complex wp(1, 0);
      for (int k = 0; k <= deg_w; ++k) {
        row[idx++] = zp * wp;
        wp *= samples.samples[s].w;
      }
      zp *= samples.samples[s].z;
    }
  }

  std::vector<double> weight(n, 1.0);
  std::vector<Complex> gram, rhs, chol, coef;
  for (int round = 0; round <= calibration_rounds; ++round) {
    gram.assign(static_cast<std::size_t>(m) * m, Complex(0, 0));
    rhs.assign(m, Complex(0, 0));
    double wsum = 0.0;
    for (const double v : weight) wsum += v;
    for (std::size_t s = 0; s < n; ++s) {
      const double wgt = weight[s] * static_cast<double>(n) / wsum;
      const Complex* row = &rows[s * m];
      const Complex value = samples.samples[s].value;
      for (int i = 0; i < m; ++i) {
        const Complex ci = std::conj(row[i]) * wgt;
        rhs[i] += ci * value;
        Complex* g = &gram[static_cast<std::size_t>(i) * m];
        for (int k = i; k < m; ++k) {
          g[k] += ci * row[k];
        }
      }
    }
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < i; ++k) {
        gram[static_cast<std::size_t>(i) * m + k] =
            std::conj(gram[static_cast<std::size_t>(k) * m + i]);
      }
      gram[static_cast<std::size_t>(i) * m + i] += ridge;
    }
    chol = gram;
    if (!cholesky_factor(chol, m)) {
      throw NumericalError("fit: normal system is rank-deficient beyond ridge rescue");
    }
    coef = rhs;
    cholesky_solve(chol, m, coef);
    if (round == calibration_rounds) break;
    for (std::size_t s = 0; s < n; ++s) {
      const Complex* row = &rows[s * m];
      Complex acc(0, 0);
      for (int i = 0; i < m; ++i) acc += row[i] * coef[i];
      weight[s] *= std::max(std::abs(acc - samples.samples[s].value), 1e-18);
    }
  }

  TensorFit fit;
  fit.deg_z = deg_z;
  fit.deg_w = deg_w;
  fit.coef = std::move(coef);
  fit.ridge = ridge;
  fit.seed = samples.seed;
  fit.sup_w_norm = samples.sup_w_norm;
  fit.sup_ab_norm = samples.sup_ab_norm;
  fit.condition = hpd_condition_estimate(gram, chol, m);
  for (const CrossSample& s : samples.samples) {
    const double r = std::abs(fit.evaluate(s.z, s.w) - s.value);
    fit.eps_w = std::max(fit.eps_w, r);
    if (s.stratum == Stratum::AxB) fit.eps_ab = std::max(fit.eps_ab, r);
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Two-constants machinery.

inline double two_constants_bound(double eps_ab, double eps_w, double omega) {
  if (eps_ab <= 0.0 && eps_w <= 0.0) return 0.0;
  return std::pow(std::max(eps_ab, 1e-300), 1.0 - omega) *
         std::pow(std::max(eps_w, 1e-300), omega);
}

struct CertifiedValue {
  Complex value;
  double omega_sum = 0.0;       // estimate (before the 3-sigma widening)
  double bound = 0.0;           // two-constants bound on |fit - extension|
  double magnitude_bound = 0.0; // a-priori bound on |f-hat| itself
};

// Residual sups are sampled, not true sups; `safety` inflates them before
// they enter the exponents.  The default covers the measured sup-vs-sample
// gap (about 2x) and the off-sample bias of the calibrated fit (another 2x);
// it is a heuristic margin, not a theorem.
struct CertifyOptions {
  double safety = 4.0;
};

inline CertifiedValue certify_error(const TensorFit& fit, const CrossSpec& spec,
                                    Complex z, Complex w,
                                    const CertifyOptions& opt = {}) {
  const MeasureEstimate sum = omega_sum(spec, z, w);
  if (wedge_verdict(sum) != Containment::In) {
    throw std::domain_error("certify_error: point is not certifiably inside the wedge");
  }
  const double omega_eff = std::min(sum.value + 3.0 * sum.std_error, 1.0);
  CertifiedValue out;
  out.value = fit.evaluate(z, w);
  out.omega_sum = sum.value;
  out.bound = two_constants_bound(opt.safety * fit.eps_ab, opt.safety * fit.eps_w,
                                  omega_eff);
  out.magnitude_bound =
      two_constants_bound(fit.sup_ab_norm, fit.sup_w_norm, omega_eff);
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise verification of the magnitude estimate
//   |f-hat(z, w)| <= |f|_{AxB}^{1 - omega} |f|_W^{omega}
// over all wedge pairs formed from a planar grid (z and w both range over the
// grid nodes inside their factors).

struct TwoConstantsRow {
  Complex z;
  Complex w;
  double omega_sum = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double excess = 0.0;  // lhs - rhs
};

struct TwoConstantsReport {
  std::size_t checked = 0;
  std::vector<TwoConstantsRow> violations;
  double max_excess = -1e300;
  double norm_ab = 0.0;
  double norm_w = 0.0;
};

struct TwoConstantsOptions {
  double tol = 1e-9;          // ignorable excess
  int norm_arc_samples = 512; // per arc factor for the sup norms
  int norm_grid = 41;         // interior grid per factor for |f|_W
};

namespace detail {

// Empirical sup norms of f over AxB and over the whole cross.
inline void empirical_cross_norms(const CrossFunction& f, const CrossSpec& spec,
                                  const TwoConstantsOptions& opt, double& norm_ab,
                                  double& norm_w) {
  const int na = opt.norm_arc_samples;
  std::vector<Complex> a_pts(na), b_pts(na);
  for (int i = 0; i < na; ++i) {
    const double fa = (i + 0.5) / na;
    a_pts[i] = spec.d.boundary_point(arc_param_at_fraction(spec.a, fa));
    b_pts[i] = spec.g.boundary_point(arc_param_at_fraction(spec.b, fa));
  }
  norm_ab = 0.0;
  for (const Complex& za : a_pts) {
    for (const Complex& wb : b_pts) {
      norm_ab = std::max(norm_ab, std::abs(f(za, wb)));
    }
  }
  norm_w = norm_ab;
  const auto interior_points = [&](const PlanarDomain& dom) {
    std::vector<Complex> pts;
    const auto bb = dom.bounding_box();
    for (int j = 0; j < opt.norm_grid; ++j) {
      for (int i = 0; i < opt.norm_grid; ++i) {
        const Complex p(bb[0] + (bb[1] - bb[0]) * (i + 0.5) / opt.norm_grid,
                        bb[2] + (bb[3] - bb[2]) * (j + 0.5) / opt.norm_grid);
        if (dom.contains(p)) pts.push_back(p);
      }
    }
    return pts;
  };
  for (const Complex& za : a_pts) {
    for (const Complex& wg : interior_points(spec.g)) {
      norm_w = std::max(norm_w, std::abs(f(za, wg)));
    }
  }
  for (const Complex& wb : b_pts) {
    for (const Complex& zd : interior_points(spec.d)) {
      norm_w = std::max(norm_w, std::abs(f(zd, wb)));
    }
  }
}

template <class Eval>
TwoConstantsReport two_constants_scan(const Eval& value_at, double norm_ab,
                                      double norm_w, const CrossSpec& spec,
                                      const GridSpec& grid,
                                      const TwoConstantsOptions& opt) {
  TwoConstantsReport report;
  report.norm_ab = norm_ab;
  report.norm_w = norm_w;

  std::vector<std::pair<Complex, MeasureEstimate>> zs, ws;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Complex p = grid.point(i, j);
      if (spec.d.contains(p)) zs.emplace_back(p, omega(p, spec.d, spec.a, spec.opt_d));
      if (spec.g.contains(p)) ws.emplace_back(p, omega(p, spec.g, spec.b, spec.opt_g));
    }
  }
  for (const auto& [z, ez] : zs) {
    for (const auto& [w, ew] : ws) {
      MeasureEstimate sum;
      sum.value = ez.value + ew.value;
      sum.std_error = std::sqrt(ez.std_error * ez.std_error +
                                ew.std_error * ew.std_error);
      if (wedge_verdict(sum) != Containment::In) continue;
      const double omega_eff = std::min(sum.value + 3.0 * sum.std_error, 1.0);
      TwoConstantsRow row;
      row.z = z;
      row.w = w;
      row.omega_sum = sum.value;
      row.lhs = std::abs(value_at(z, w));
      row.rhs = two_constants_bound(norm_ab, norm_w, omega_eff);
      row.excess = row.lhs - row.rhs;
      ++report.checked;
      report.max_excess = std::max(report.max_excess, row.excess);
      if (row.excess > opt.tol) report.violations.push_back(row);
    }
  }
  return report;
}

}  // namespace detail

// Analytic test mode: f itself is the extension.
inline TwoConstantsReport two_constants_report(const CrossFunction& f,
                                               const CrossSpec& spec,
                                               const GridSpec& grid,
                                               const TwoConstantsOptions& opt = {}) {
  double norm_ab = 0.0, norm_w = 0.0;
  detail::empirical_cross_norms(f, spec, opt, norm_ab, norm_w);
  return detail::two_constants_scan(
      [&](Complex z, Complex w) { return f(z, w); }, norm_ab, norm_w, spec, grid, opt);
}

// Fitted mode: the fit plays f-hat and the recorded data norms play the f
// norms.
inline TwoConstantsReport two_constants_report(const TensorFit& fit,
                                               const CrossSpec& spec,
                                               const GridSpec& grid,
                                               const TwoConstantsOptions& opt = {}) {
  return detail::two_constants_scan(
      [&](Complex z, Complex w) { return fit.evaluate(z, w); }, fit.sup_ab_norm,
      fit.sup_w_norm, spec, grid, opt);
}

// ---------------------------------------------------------------------------
// Uniqueness: two independent samplings of the same f must produce fits that
// agree within the sum of their certificates everywhere on the wedge.

struct UniquenessRow {
  Complex z;
  Complex w;
  double diff = 0.0;
  double allowance = 0.0;
};

struct UniquenessReport {
  std::vector<UniquenessRow> rows;
  std::size_t probes_requested = 0;
  bool pass = false;
  double max_ratio = 0.0;  // diff / allowance
};

struct UniquenessOptions {
  StratumCounts counts{800, 800, 400};
  int deg_z = 12;
  int deg_w = 12;
  double ridge = 1e-10;
  int probes = 50;
  std::uint64_t probe_seed = 99;
  CertifyOptions certify{};
};

inline UniquenessReport uniqueness_check(const CrossSpec& spec, const CrossFunction& f,
                                         std::uint64_t seed1, std::uint64_t seed2,
                                         const UniquenessOptions& opt = {}) {
  const TensorFit fit1 =
      fit_extension(sample_cross(spec, f, opt.counts, seed1), opt.deg_z, opt.deg_w,
                    opt.ridge);
  const TensorFit fit2 =
      fit_extension(sample_cross(spec, f, opt.counts, seed2), opt.deg_z, opt.deg_w,
                    opt.ridge);

  UniquenessReport report;
  report.probes_requested = static_cast<std::size_t>(opt.probes);
  report.pass = true;
  std::uint64_t stream = 0;
  int attempts = 0;
  while (report.rows.size() < static_cast<std::size_t>(opt.probes) &&
         attempts < 1000 * opt.probes) {
    ++attempts;
    RandomStream rng(opt.probe_seed, stream++);
    const Complex z = detail::sample_interior_point(spec.d, rng);
    const Complex w = detail::sample_interior_point(spec.g, rng);
    const MeasureEstimate sum = omega_sum(spec, z, w);
    if (wedge_verdict(sum) != Containment::In) continue;  // probes outside are excluded
    const CertifiedValue c1 = certify_error(fit1, spec, z, w, opt.certify);
    const CertifiedValue c2 = certify_error(fit2, spec, z, w, opt.certify);
    UniquenessRow row;
    row.z = z;
    row.w = w;
    row.diff = std::abs(c1.value - c2.value);
    row.allowance = c1.bound + c2.bound;
    report.max_ratio = std::max(
        report.max_ratio, row.diff / std::max(row.allowance, 1e-300));
    if (row.diff > row.allowance) report.pass = false;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace crosswedge
