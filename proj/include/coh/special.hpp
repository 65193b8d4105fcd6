#pragma once

namespace coh::special {

/// log Γ(x + d) − log Γ(x) for x > 0, x + d > 0. Uses a Stirling-series
/// difference for x >= 10 so the result keeps full relative accuracy
/// when both gammas are huge (x ~ 1e6).
double log_gamma_ratio(double x, double d);

/// log B(a, b).
double lbeta(double a, double b);

/// Regularized incomplete beta I_x(a, b) and its complement 1 − I_x(a, b).
/// `y` must equal 1 − x; passing it separately keeps the complement
/// accurate when x is close to 1. Evaluated by the Lentz continued
/// fraction on whichever side converges fast.
double ibeta(double a, double b, double x, double y);
double ibetac(double a, double b, double x, double y);

inline double ibeta(double a, double b, double x) {
  return ibeta(a, b, x, 1.0 - x);
}
inline double ibetac(double a, double b, double x) {
  return ibetac(a, b, x, 1.0 - x);
}

}  // namespace coh::special
