#include "coh/inference.hpp"

#include <algorithm>
#include <cmath>

#include "coh/chen_stein.hpp"
#include "coh/error.hpp"

namespace coh {

std::string_view to_string(TestMethod method) {
  return method == TestMethod::AsymptoticLaw ? "AsymptoticLaw" : "ChenSteinFiniteN";
}

namespace {

double l_scale(const LawSpec& spec, double y) {
  try {
    return threshold_from_y(spec, y).coherence();
  } catch (const InfeasibleThresholdError&) {
    return NAN;
  }
}

void asymptotic(TestReport& r) {
  const double L = r.coherence.value;
  const LawSpec& spec = r.regime;
  switch (spec.regime) {
    case Regime::SubExp:
    case Regime::Transitional: {
      const double a = spec.regime == Regime::SubExp ? 0.0 : spec.alpha;
      r.statistic = transitional_stat(L, spec.n, spec.p).value;
      r.threshold = transitional_quantile(1.0 - r.alpha, a);
      // Upper tail: 1 − exp(−K e^{−(y + 8a²)/2}).
      r.p_value = -std::expm1(-subexp_k() * std::exp(-0.5 * (r.statistic + 8.0 * a * a)));
      LawSpec trans = spec;
      trans.regime = Regime::Transitional;
      r.coherence_threshold = l_scale(trans, r.threshold);
      break;
    }
    case Regime::Exponential:
    case Regime::SuperExp: {
      r.statistic = pivotal(spec, L).value;
      r.threshold = law_quantile(spec, r.alpha);
      r.p_value = law_cdf(spec, r.statistic);
      r.coherence_threshold = l_scale(spec, r.threshold);
      break;
    }
  }
  r.p_value_low = r.p_value_high = r.p_value;
}

void finite_n(TestReport& r) {
  const auto& c = r.coherence;
  const int n = static_cast<int>(c.n);
  const double p = static_cast<double>(c.p);
  const auto pa = poisson_approx(n, p, c.value, c.centered);
  r.statistic = c.value;
  r.p_value = -std::expm1(-pa.lambda);
  r.p_value_low = std::max(0.0, r.p_value - pa.error_bound);
  r.p_value_high = std::min(1.0, r.p_value + pa.error_bound);
  r.threshold = threshold_for_prob(n, p, 1.0 - r.alpha, c.centered);
  r.coherence_threshold = r.threshold;
}

}  // namespace

TestReport independence_test(const CoherenceResult& coherence, const TestOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (coherence.n < 3) throw DomainError("independence test needs n >= 3");
  const int n = static_cast<int>(coherence.n);
  const double p = static_cast<double>(coherence.p);

  TestReport r;
  r.alpha = options.alpha;
  r.method = options.method;
  r.coherence = coherence;
  const auto cls = classify_regime(n, p, options.thresholds);
  r.regime = LawSpec{options.regime.value_or(cls.regime), cls.alpha_hat, cls.beta_hat,
                     !coherence.centered, n, p};
  r.regime_ambiguous = cls.ambiguous && !options.regime;
  r.candidates = options.regime ? std::vector<Regime>{*options.regime} : cls.candidates;

  if (options.method == TestMethod::AsymptoticLaw)
    asymptotic(r);
  else
    finite_n(r);
  r.reject = r.p_value <= r.alpha;
  return r;
}

TestReport independence_test(const SampleMatrix& m, const TestOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (m.n() < 3) throw DomainError("independence test needs n >= 3");
  return independence_test(coherence(m, !options.uncentered, options.kernel), options);
}

MipReport mip_report(double L, std::size_t n, double p, std::span<const std::int64_t> ks) {
  if (!(L >= 0.0 && L <= 1.0)) throw DomainError("coherence must lie in [0, 1]");
  MipReport r;
  r.coherence = L;
  r.asymptotic_k = 0.25 * std::sqrt(static_cast<double>(n) / std::log(p));
  const auto holds = [L](std::int64_t k) { return static_cast<double>(2 * k - 1) * L < 1.0; };
  if (L > 0.0) {
    auto k = static_cast<std::int64_t>(std::ceil((1.0 / L + 1.0) / 2.0)) - 1;
    while (holds(k + 1)) ++k;
    while (k > 0 && !holds(k)) --k;
    r.k_max = k;
  }
  for (std::int64_t k : ks) r.holds.emplace_back(k, holds(k));
  return r;
}

MipReport mip_report(const CoherenceResult& c, std::span<const std::int64_t> ks) {
  if (c.centered) throw ParameterError("the MIP condition uses the uncentered coherence");
  return mip_report(c.value, c.n, static_cast<double>(c.p), ks);
}

MipReport mip_report(const SampleMatrix& m, std::span<const std::int64_t> ks,
                     const KernelOptions& kernel) {
  return mip_report(coherence(m, false, kernel), ks);
}

SampleMatrix make_sensing_matrix(std::size_t n, std::size_t p, std::uint64_t seed, unsigned threads) {
  return sample_matrix(Gaussian{1.0 / std::sqrt(static_cast<double>(n))}, n, p, seed, threads);
}

}  // namespace coh
