#pragma once

#include <string_view>

#include "coh/rng.hpp"

namespace coh {

/// Exact law of one sample correlation between two independent columns
/// with a common spherical distribution in R^n.
///
/// The centered (Pearson) correlation behaves like the uncentered one in
/// one dimension less, so both are handled through the effective
/// dimension `dof()` = n − 1 (centered) or n (uncentered). The density is
///
///   Γ(d/2) / (√π Γ((d−1)/2)) · (1 − ρ²)^((d−3)/2),   |ρ| < 1,
///
/// which requires d >= 2. The centered law at n = 2 (d = 1) is the
/// symmetric two-point law on {−1, +1}; see small_n_law.
class CorrLaw {
 public:
  /// Throws ShapeError when n < 2.
  CorrLaw(int n, bool centered);

  int n() const noexcept { return n_; }
  bool centered() const noexcept { return centered_; }
  int dof() const noexcept { return centered_ ? n_ - 1 : n_; }

  /// True for the centered n = 2 law, which has no density.
  bool discrete() const noexcept { return dof() < 2; }

  /// Parameters of ρ² ~ Beta(½, beta_b()).
  double beta_b() const noexcept { return 0.5 * (dof() - 1); }

 private:
  int n_;
  bool centered_;
};

/// Density at rho. DomainError when |rho| >= 1, DiscreteLawError for the
/// centered n = 2 law.
double pdf(const CorrLaw& law, double rho);
double log_pdf(const CorrLaw& law, double rho);

/// P(ρ <= x); clamps to 0 / 1 outside [−1, 1]. Like tail_prob, throws
/// DiscreteLawError for the centered n = 2 law.
double cdf(const CorrLaw& law, double x);

/// P(|ρ| > t) for t in [0, 1].
double tail_prob(const CorrLaw& law, double t);

/// ∫_t^1 (1 − x²)^(m/2) dx, exactly, through the incomplete beta.
double tail_integral(double m, double t);

struct TailAsymptotic {
  double value;
  /// Set when m·t² < 10, outside the regime where the formula is sharp.
  bool low_accuracy;
};

/// (1/(m t)) (1 − t²)^((m+2)/2), the large-m·t² form of tail_integral.
TailAsymptotic tail_integral_asymptotic(double m, double t);

/// Γ((n−1)/2) / Γ((n−2)/2) for n >= 3.
double gamma_ratio(int n);
/// √(n/2), the large-n equivalent of gamma_ratio.
double gamma_ratio_asymptotic(int n);

/// Closed-form correlation laws for 2 <= n <= 5 (centered).
class SmallNLaw {
 public:
  enum class Kind { Bernoulli, Arcsine, Uniform, Semicircle };

  /// RangeError outside 2..5.
  static SmallNLaw for_n(int n);

  Kind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;

  /// Right-continuous CDF of ρ.
  double cdf(double x) const;
  /// Density; DiscreteLawError for the Bernoulli law.
  double pdf(double x) const;
  double sample(Xoshiro256& rng) const;

 private:
  explicit SmallNLaw(Kind kind) : kind_(kind) {}
  Kind kind_;
};

inline SmallNLaw small_n_law(int n) { return SmallNLaw::for_n(n); }

}  // namespace coh
