#include "coh/exact_dist.hpp"

#include <cmath>
#include <numbers>

#include "coh/error.hpp"
#include "coh/special.hpp"

namespace coh {

namespace {

// log(1 − a²) for a in [0, 1).
double log_one_minus_sq(double a) {
  return a > 0.5 ? std::log((1.0 - a) * (1.0 + a)) : std::log1p(-a * a);
}

void require_density(const CorrLaw& law) {
  if (law.discrete())
    throw DiscreteLawError(
        "centered correlation at n = 2 is the two-point law on {-1, +1}; "
        "use small_n_law(2)");
}

}  // namespace

CorrLaw::CorrLaw(int n, bool centered) : n_(n), centered_(centered) {
  if (n < 2) throw ShapeError("correlation law needs n >= 2");
}

double log_pdf(const CorrLaw& law, double rho) {
  require_density(law);
  const double a = std::fabs(rho);
  if (!(a < 1.0)) throw DomainError("correlation density needs |rho| < 1");
  const double d = law.dof();
  return -0.5 * std::log(std::numbers::pi) +
         special::log_gamma_ratio(0.5 * (d - 1.0), 0.5) +
         0.5 * (d - 3.0) * log_one_minus_sq(a);
}

double pdf(const CorrLaw& law, double rho) { return std::exp(log_pdf(law, rho)); }

double tail_prob(const CorrLaw& law, double t) {
  require_density(law);
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("tail_prob needs t in [0, 1]");
  if (t == 0.0) return 1.0;
  if (t == 1.0) return 0.0;
  return special::ibetac(0.5, law.beta_b(), t * t, (1.0 - t) * (1.0 + t));
}

double cdf(const CorrLaw& law, double x) {
  require_density(law);
  if (std::isnan(x)) throw DomainError("cdf of NaN");
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x == 0.0) return 0.5;
  const double half_tail = 0.5 * tail_prob(law, std::fabs(x));
  return x < 0.0 ? half_tail : 1.0 - half_tail;
}

double tail_integral(double m, double t) {
  if (!(m > -2.0)) throw DomainError("tail_integral needs m > -2");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("tail_integral needs t in [0, 1]");
  if (t == 1.0) return 0.0;
  // x = √y turns the integral into ½ B(½, m/2 + 1) times a Beta tail.
  const double b = 0.5 * m + 1.0;
  const double half_beta = 0.5 * std::exp(special::lbeta(0.5, b));
  if (t == 0.0) return half_beta;
  return half_beta * special::ibetac(0.5, b, t * t, (1.0 - t) * (1.0 + t));
}

TailAsymptotic tail_integral_asymptotic(double m, double t) {
  if (!(m >= 1.0)) throw DomainError("tail_integral_asymptotic needs m >= 1");
  if (!(t > 0.0 && t < 1.0)) throw DomainError("tail_integral_asymptotic needs t in (0, 1)");
  const double log_value = -std::log(m * t) + 0.5 * (m + 2.0) * log_one_minus_sq(t);
  return {std::exp(log_value), m * t * t < 10.0};
}

double gamma_ratio(int n) {
  if (n < 3) throw DomainError("gamma_ratio needs n >= 3");
  return std::exp(special::log_gamma_ratio(0.5 * (n - 2), 0.5));
}

double gamma_ratio_asymptotic(int n) { return std::sqrt(0.5 * n); }

SmallNLaw SmallNLaw::for_n(int n) {
  switch (n) {
    case 2: return SmallNLaw(Kind::Bernoulli);
    case 3: return SmallNLaw(Kind::Arcsine);
    case 4: return SmallNLaw(Kind::Uniform);
    case 5: return SmallNLaw(Kind::Semicircle);
    default: throw RangeError("closed-form small-sample laws exist for n = 2..5 only");
  }
}

std::string_view SmallNLaw::name() const noexcept {
  switch (kind_) {
    case Kind::Bernoulli: return "bernoulli";
    case Kind::Arcsine: return "arcsine";
    case Kind::Uniform: return "uniform";
    case Kind::Semicircle: return "semicircle";
  }
  return "";
}

double SmallNLaw::cdf(double x) const {
  if (x < -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  switch (kind_) {
    case Kind::Bernoulli: return 0.5;
    case Kind::Arcsine: return 0.5 + std::asin(x) / pi;
    case Kind::Uniform: return 0.5 * (x + 1.0);
    case Kind::Semicircle:
      return 0.5 + (x * std::sqrt((1.0 - x) * (1.0 + x)) + std::asin(x)) / pi;
  }
  return 0.0;
}

double SmallNLaw::pdf(double x) const {
  constexpr double pi = std::numbers::pi;
  if (kind_ == Kind::Bernoulli) throw DiscreteLawError("bernoulli law has no density");
  if (kind_ == Kind::Arcsine) {
    if (!(std::fabs(x) < 1.0)) throw DomainError("arcsine density needs |x| < 1");
    return 1.0 / (pi * std::sqrt((1.0 - x) * (1.0 + x)));
  }
  if (std::fabs(x) > 1.0) return 0.0;
  if (kind_ == Kind::Uniform) return 0.5;
  return 2.0 / pi * std::sqrt((1.0 - x) * (1.0 + x));
}

double SmallNLaw::sample(Xoshiro256& rng) const {
  constexpr double pi = std::numbers::pi;
  const double u = rng.uniform();
  switch (kind_) {
    case Kind::Bernoulli: return u < 0.5 ? -1.0 : 1.0;
    case Kind::Arcsine: return std::cos(pi * u);
    case Kind::Uniform: return 2.0 * u - 1.0;
    case Kind::Semicircle:
      // First coordinate of a uniform point in the unit disk.
      return std::sqrt(u) * std::cos(2.0 * pi * rng.uniform());
  }
  return 0.0;
}

}  // namespace coh
