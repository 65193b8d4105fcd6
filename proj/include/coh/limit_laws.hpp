#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace coh {

/// Growth regime of p relative to n.
///   SubExp        (log p)/n → 0
///   Transitional  (log p)/√n → α ∈ [0, ∞)
///   Exponential   (log p)/n → β ∈ (0, ∞)
///   SuperExp      (log p)/n → ∞
enum class Regime { SubExp, Transitional, Exponential, SuperExp };

std::string_view to_string(Regime regime);
/// Accepts "sub", "trans", "exp", "super" and the full enum names.
Regime parse_regime(std::string_view text);

/// Band edges used to pick a regime for a finite (n, p).
struct RegimeThresholds {
  double subexp_alpha_max = 0.3;        // α̂ below this: SubExp
  double transitional_alpha_max = 3.0;  // α̂ up to this (with β̂ small): Transitional
  double transitional_beta_max = 0.1;   // β̂ below this is not Exponential
  double exponential_beta_max = 10.0;   // β̂ above this: SuperExp
  /// A plug-in within this factor of a band edge is reported ambiguous.
  double ambiguity_factor = 3.0;
};

struct RegimeClassification {
  Regime regime;
  double alpha_hat;  // (log p)/√n
  double beta_hat;   // (log p)/n
  bool ambiguous;
  /// The chosen regime first, then the neighbour(s) across nearby edges.
  std::vector<Regime> candidates;
};

RegimeClassification classify_regime(int n, double p, const RegimeThresholds& thresholds = {});

/// A regime together with the finite-sample plug-ins it is evaluated at.
struct LawSpec {
  Regime regime;
  double alpha;  // (log p)/√n
  double beta;   // (log p)/n
  bool uncentered;
  int n;
  double p;
};

/// Classifies (n, p) unless `regime` overrides the choice. DomainError
/// unless n >= 3 and p >= 2.
LawSpec make_law_spec(int n, double p, bool uncentered = false,
                      std::optional<Regime> regime = std::nullopt,
                      const RegimeThresholds& thresholds = {});

/// 1/√(8π), the sub-exponential extreme-value constant.
double subexp_k();
/// 1/√(2π), the super-exponential constant.
double superexp_k();
/// K(β) = (β / (2π(1 − e^{−4β})))^{1/2}; DomainError for β <= 0.
double k_beta(double beta);

/// F(y) = 1 − exp(−K e^{y/2}), K = 1/√(8π); law of nT + 4 log p − log log p.
double subexp_cdf(double y);
/// exp(−K e^{−(y + 8α²)/2}); law of nL² − 4 log p + log log p.
double transitional_cdf(double y, double alpha);
/// 1 − exp(−K(β) e^{(y + 8β)/2}).
double exp_cdf(double y, double beta);
/// 1 − exp(−e^{y/2}/√(2π)).
double superexp_cdf(double y);

double subexp_quantile(double prob);
double transitional_quantile(double prob, double alpha);
double exp_quantile(double prob, double beta);
double superexp_quantile(double prob);

/// The CDF / quantile matching spec.regime, with the plug-in α or β.
double law_cdf(const LawSpec& spec, double y);
double law_quantile(const LawSpec& spec, double prob);

/// A coherence mapped to the statistic whose limit law is parameter-free.
struct PivotalStat {
  double value;
  /// The additive constant applied (e.g. 4 log p − log log p).
  double centering;
  std::string_view scale_note;
};

/// n log(1 − L²) + 4 log p − log log p (sub-exponential and exponential).
PivotalStat subexp_stat(double L, int n, double p);
/// n L² − 4 log p + log log p.
PivotalStat transitional_stat(double L, int n, double p);
/// n log(1 − L²) + (4n/(n−2)) log p − log n, or 4n/(n−1) when uncentered.
/// Value is −∞ when L = 1.
PivotalStat superexp_stat(double L, int n, double p, bool uncentered);
/// The statistic belonging to spec.regime.
PivotalStat pivotal(const LawSpec& spec, double L);

struct LlnPrediction {
  double coherence;          // predicted limit of L
  double scaled_log_stat;    // predicted limit of (n / log p)·T, always −4
};

LlnPrediction lln_prediction(const LawSpec& spec);

/// Rejection boundary of the regime's statistic on the L-scale.
struct LevelThreshold {
  double y;  // statistic quantile
  double s;  // squared coherence boundary s_n
  double coherence() const;
  /// True for the log(1 − L²) statistics, where statistic <= y ⇔ L >= √s.
  /// False for the transitional nL² statistic, where statistic <= y ⇔ L <= √s.
  bool statistic_decreasing_in_l;
};

/// Maps a statistic value y onto the L² scale. InfeasibleThresholdError
/// when s_n falls outside (0, 1].
LevelThreshold threshold_from_y(const LawSpec& spec, double y);
/// Inverts the regime CDF at prob, then maps to the L-scale.
LevelThreshold threshold_from_level(const LawSpec& spec, double prob);

}  // namespace coh
