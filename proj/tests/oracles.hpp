#pragma once

// Reference implementations for the tests. Nothing here calls into the
// library under test: correlations are naive long-double double loops,
// special functions come from Boost.Math, integrals from adaptive
// Gauss-Kronrod quadrature.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

// Correlation of two length-n columns, two-pass in long double.
inline long double corr(const double* x, const double* y, std::size_t n, bool centered) {
  long double mx = 0, my = 0;
  if (centered) {
    for (std::size_t k = 0; k < n; ++k) mx += x[k], my += y[k];
    mx /= n;
    my /= n;
  }
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const long double a = x[k] - mx, b = y[k] - my;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  return sxy / std::sqrt(sxx * syy);
}

struct Max {
  double value = -1;
  std::size_t i = 0, j = 0;
};

// O(np²) scan of a column-major matrix; the first maximizer in (i, j)
// lexicographic order wins.
inline Max naive_coherence(std::span<const double> data, std::size_t n, std::size_t p, bool centered) {
  Max m;
  long double best = -1;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const long double v = std::fabs(corr(&data[i * n], &data[j * n], n, centered));
      if (v > best) {
        best = v;
        m.i = i;
        m.j = j;
      }
    }
  m.value = static_cast<double>(best > 1 ? 1 : best);
  return m;
}

// Effective dimension d: n − 1 centered, n uncentered.
inline double corr_pdf(int d, double r) {
  using boost::math::lgamma;
  return std::exp(lgamma(d / 2.0) - lgamma((d - 1) / 2.0)) / std::sqrt(M_PI) *
         std::pow(1 - r * r, (d - 3) / 2.0);
}

inline double corr_cdf(int d, double x) {
  const double half_tail = 0.5 * boost::math::ibetac(0.5, (d - 1) / 2.0, x * x);
  return x >= 0 ? 1 - half_tail : half_tail;
}

// ∫_a^b f for [a, b] ⊂ [−1, 1], through x = sin θ so that the (1 − x²)^(−1/2)
// endpoint behaviour of the low-dimension densities becomes smooth.
inline double integrate(const std::function<double(double)>& f, double a, double b) {
  const auto g = [&f](double th) {
    const double x = std::sin(th);
    return std::fabs(x) >= 1 ? 0.0 : f(x) * std::cos(th);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, std::asin(a), std::asin(b), 20, 1e-14);
}

// ∫_t^1 (1 − x²)^(m/2) dx by quadrature, as ∫ cos^(m+1) θ over [asin t, π/2].
inline double tail_integral(double m, double t) {
  const auto g = [m](double th) { return std::pow(std::cos(th), m + 1); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, std::asin(t), M_PI / 2, 20, 1e-14);
}

// Root of increasing f on [lo, hi] at f = target.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double target) {
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
