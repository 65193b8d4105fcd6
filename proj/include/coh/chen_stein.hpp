#pragma once

namespace coh {

/// Poisson approximation P(L ≤ t) ≈ e^{−λ} for the number of pairs whose
/// correlation exceeds t in absolute value.
struct PoissonApprox {
  double t = 0.0;
  /// p(p−1)/2 · P(|ρ₁₂| > t), from the exact tail probability.
  double lambda = 0.0;
  /// e^{−λ}
  double prob = 1.0;
  /// 64λ²/p, times 1/λ when λ > 1.
  double error_bound = 0.0;
  double h_n = 0.0;
  /// Set when (n−4)·t² < 10: the tail integral is far from its
  /// large-deviation form and h_n no longer tracks λ.
  bool accuracy_flag = false;
};

/// Pairs are pairwise independent under spherical columns, so the
/// dependent-neighbourhood term of the bound vanishes. DomainError unless
/// n >= 3 (centered) or n >= 2 (uncentered), p >= 2 and t in [0, 1].
PoissonApprox poisson_approx(int n, double p, double t, bool centered = true);

/// h_n = √n p² / √(2π) · ∫_t^1 (1 − x²)^((n−4)/2) dx. Requires n >= 3.
double h_n_value(int n, double p, double t);

/// Smallest t with e^{−λ(t)} >= prob, found by bisection; prob in (0, 1).
double threshold_for_prob(int n, double p, double prob, bool centered = true);

}  // namespace coh
