#include "coh/chen_stein.hpp"

#include <cmath>
#include <numbers>

#include "coh/error.hpp"
#include "coh/exact_dist.hpp"

namespace coh {

namespace {

void check_args(int n, double p, double t, bool centered) {
  if (n < (centered ? 3 : 2))
    throw DomainError("Poisson approximation needs n >= 3 (centered) or n >= 2 (uncentered)");
  if (!(p >= 2.0)) throw DomainError("Poisson approximation needs p >= 2");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("threshold t must lie in [0, 1]");
}

double pairs(double p) { return 0.5 * p * (p - 1.0); }

}  // namespace

PoissonApprox poisson_approx(int n, double p, double t, bool centered) {
  check_args(n, p, t, centered);
  PoissonApprox out;
  out.t = t;
  out.lambda = pairs(p) * tail_prob(CorrLaw(n, centered), t);
  out.prob = std::exp(-out.lambda);
  const double b = 64.0 * out.lambda * out.lambda / p;
  out.error_bound = out.lambda > 1.0 ? b / out.lambda : b;
  out.h_n = n >= 3 ? h_n_value(n, p, t) : NAN;
  out.accuracy_flag = (n - 4.0) * t * t < 10.0;
  return out;
}

double h_n_value(int n, double p, double t) {
  if (n < 3) throw DomainError("h_n needs n >= 3");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("threshold t must lie in [0, 1]");
  return std::sqrt(static_cast<double>(n)) * p * p / std::sqrt(2.0 * std::numbers::pi) *
         tail_integral(n - 4.0, t);
}

double threshold_for_prob(int n, double p, double prob, bool centered) {
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("probability must lie in (0, 1)");
  check_args(n, p, 0.0, centered);
  const CorrLaw law(n, centered);
  const double target = -std::log(prob);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (pairs(p) * tail_prob(law, mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace coh
