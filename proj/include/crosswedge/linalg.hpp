#pragma once

// Dense Hermitian positive-definite solves for the tensor least-squares
// normal equations, plus a rough condition diagnostic.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "crosswedge/geometry.hpp"

namespace crosswedge {

// In-place lower Cholesky of a row-major Hermitian matrix.  Returns false
// when a pivot is not safely positive.
inline bool cholesky_factor(std::vector<Complex>& a, int n) {
  for (int j = 0; j < n; ++j) {
    double diag = a[static_cast<std::size_t>(j) * n + j].real();
    for (int k = 0; k < j; ++k) {
      diag -= std::norm(a[static_cast<std::size_t>(j) * n + k]);
    }
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    const double ljj = std::sqrt(diag);
    a[static_cast<std::size_t>(j) * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      Complex s = a[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) {
        s -= a[static_cast<std::size_t>(i) * n + k] *
             std::conj(a[static_cast<std::size_t>(j) * n + k]);
      }
      a[static_cast<std::size_t>(i) * n + j] = s / ljj;
    }
  }
  return true;
}

// Solves L L^H x = b with the factor produced above; b is overwritten.
inline void cholesky_solve(const std::vector<Complex>& chol, int n,
                           std::vector<Complex>& b) {
  for (int i = 0; i < n; ++i) {
    Complex s = b[i];
    for (int k = 0; k < i; ++k) {
      s -= chol[static_cast<std::size_t>(i) * n + k] * b[k];
    }
    b[i] = s / chol[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    Complex s = b[i];
    for (int k = i + 1; k < n; ++k) {
      s -= std::conj(chol[static_cast<std::size_t>(k) * n + i]) * b[k];
    }
    b[i] = s / chol[static_cast<std::size_t>(i) * n + i];
  }
}

// 2-norm condition estimate of a Hermitian positive-definite matrix via
// power iteration (largest eigenvalue) and inverse iteration through the
// Cholesky factor (smallest).  Good to a factor of a few.
inline double hpd_condition_estimate(const std::vector<Complex>& a,
                                     const std::vector<Complex>& chol, int n,
                                     int iters = 32) {
  if (n == 0) return 1.0;
  std::vector<Complex> v(n, Complex(1.0, 0.0)), t(n);
  const auto normalize = [&](std::vector<Complex>& x) {
    double norm = 0.0;
    for (const Complex c : x) norm += std::norm(c);
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (Complex& c : x) c /= norm;
    return norm;
  };
  normalize(v);
  double lambda_max = 0.0;
  for (int it = 0; it < iters; ++it) {
    for (int i = 0; i < n; ++i) {
      Complex s(0, 0);
      for (int k = 0; k < n; ++k) {
        s += a[static_cast<std::size_t>(i) * n + k] * v[k];
      }
      t[i] = s;
    }
    v = t;
    lambda_max = normalize(v);
  }
  std::vector<Complex> w(n, Complex(1.0, 0.0));
  normalize(w);
  double growth = 1.0;
  for (int it = 0; it < iters; ++it) {
    cholesky_solve(chol, n, w);
    growth = normalize(w);
  }
  const double lambda_min = growth > 0.0 ? 1.0 / growth : 0.0;
  return lambda_min > 0.0 ? lambda_max / lambda_min : 1e300;
}

}  // namespace crosswedge
