#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coh/coherence.hpp"
#include "coh/limit_laws.hpp"
#include "coh/sampler.hpp"

namespace coh {

enum class TestMethod { AsymptoticLaw, ChenSteinFiniteN };

std::string_view to_string(TestMethod method);

struct TestOptions {
  double alpha = 0.05;
  TestMethod method = TestMethod::AsymptoticLaw;
  /// Overrides the classifier's choice.
  std::optional<Regime> regime;
  /// Test on L̃ (known zero means) instead of L.
  bool uncentered = false;
  RegimeThresholds thresholds;
  KernelOptions kernel;
};

/// Level-α test of H0: all columns independent (zero correlations).
///
/// AsymptoticLaw: the regime's pivotal statistic against its limit law.
///   SubExp, Transitional   statistic nL² − 4 log p + log log p, upper
///                          tail, law transitional_cdf(·, α) with α = 0
///                          for SubExp;
///   Exponential, SuperExp  statistic D (the log(1 − L²) form), lower tail.
/// ChenSteinFiniteN: statistic L, p-value q = 1 − e^{−λ(L)} bracketed by
/// the Poisson error bound.
struct TestReport {
  double statistic = 0.0;
  LawSpec regime{};
  bool regime_ambiguous = false;
  std::vector<Regime> candidates;
  /// Boundary on the statistic's own scale.
  double threshold = 0.0;
  /// The same boundary on the L-scale; NaN when infeasible.
  double coherence_threshold = 0.0;
  bool reject = false;
  double p_value = 1.0;
  double p_value_low = 1.0;
  double p_value_high = 1.0;
  TestMethod method = TestMethod::AsymptoticLaw;
  double alpha = 0.05;
  CoherenceResult coherence;
};

/// DomainError when alpha is outside (0, 1) or n < 3.
TestReport independence_test(const CoherenceResult& coherence, const TestOptions& options = {});
TestReport independence_test(const SampleMatrix& m, const TestOptions& options = {});

struct MipReport {
  double coherence = 0.0;
  /// Largest k with (2k − 1)·L̃ < 1; empty when L̃ = 0 (no bound).
  std::optional<std::int64_t> k_max;
  double asymptotic_k = 0.0;
  /// (k, (2k − 1)·L̃ < 1) for each queried k.
  std::vector<std::pair<std::int64_t, bool>> holds;
  bool unbounded() const { return !k_max.has_value(); }
};

/// DomainError unless coherence is in [0, 1].
MipReport mip_report(double coherence, std::size_t n, double p, std::span<const std::int64_t> ks = {});
/// ParameterError for a centered result: the MIP is a statement about L̃.
MipReport mip_report(const CoherenceResult& coherence, std::span<const std::int64_t> ks = {});
MipReport mip_report(const SampleMatrix& m, std::span<const std::int64_t> ks = {},
                     const KernelOptions& kernel = {});

/// Entries i.i.d. N(0, 1/n).
SampleMatrix make_sensing_matrix(std::size_t n, std::size_t p, std::uint64_t seed, unsigned threads = 0);

}  // namespace coh
