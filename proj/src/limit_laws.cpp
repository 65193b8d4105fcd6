#include "coh/limit_laws.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "coh/coherence.hpp"
#include "coh/error.hpp"

namespace coh {

namespace {

void check_prob(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("probability must lie in (0, 1)");
}

// 4 log p − log log p
double subexp_centering(double p) {
  const double lp = std::log(p);
  return 4.0 * lp - std::log(lp);
}

double superexp_centering(int n, double p, bool uncentered) {
  const double shift = uncentered ? 1.0 : 2.0;
  return 4.0 * n / (n - shift) * std::log(p) - std::log(static_cast<double>(n));
}

void check_np(int n, double p) {
  if (n < 3) throw DomainError("limit laws need n >= 3");
  if (!(p >= 2.0)) throw DomainError("limit laws need p >= 2");
}

bool near(double v, double edge, double factor) { return v >= edge / factor && v <= edge * factor; }

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::SubExp: return "SubExp";
    case Regime::Transitional: return "Transitional";
    case Regime::Exponential: return "Exponential";
    case Regime::SuperExp: return "SuperExp";
  }
  return "?";
}

Regime parse_regime(std::string_view text) {
  if (text == "sub" || text == "SubExp") return Regime::SubExp;
  if (text == "trans" || text == "Transitional") return Regime::Transitional;
  if (text == "exp" || text == "Exponential") return Regime::Exponential;
  if (text == "super" || text == "SuperExp") return Regime::SuperExp;
  throw ParameterError("unknown regime '" + std::string(text) + "'");
}

RegimeClassification classify_regime(int n, double p, const RegimeThresholds& th) {
  check_np(n, p);
  const double lp = std::log(p);
  const double a = lp / std::sqrt(static_cast<double>(n));
  const double b = lp / n;

  RegimeClassification out{Regime::SubExp, a, b, false, {}};
  if (b > th.exponential_beta_max)
    out.regime = Regime::SuperExp;
  else if (b >= th.transitional_beta_max)
    out.regime = Regime::Exponential;
  else if (a >= th.subexp_alpha_max && a <= th.transitional_alpha_max)
    out.regime = Regime::Transitional;
  else
    // Below the α band, or above it with β̂ still small: log p = o(n) either way.
    out.regime = Regime::SubExp;

  out.candidates.push_back(out.regime);
  const auto add = [&](Regime r) {
    for (Regime c : out.candidates)
      if (c == r) return;
    out.candidates.push_back(r);
  };
  const double f = th.ambiguity_factor;
  const bool gap = b < th.transitional_beta_max && a > th.transitional_alpha_max;
  if (b < th.transitional_beta_max) {
    if (near(a, th.subexp_alpha_max, f)) {
      add(Regime::SubExp);
      add(Regime::Transitional);
    }
    if (gap || near(a, th.transitional_alpha_max, f)) {
      add(Regime::Transitional);
      add(Regime::SubExp);
    }
  }
  if (near(b, th.transitional_beta_max, f)) {
    add(a >= th.subexp_alpha_max ? Regime::Transitional : Regime::SubExp);
    add(Regime::Exponential);
  }
  if (near(b, th.exponential_beta_max, f)) {
    add(Regime::Exponential);
    add(Regime::SuperExp);
  }
  out.ambiguous = out.candidates.size() > 1;
  return out;
}

LawSpec make_law_spec(int n, double p, bool uncentered, std::optional<Regime> regime,
                      const RegimeThresholds& thresholds) {
  const auto c = classify_regime(n, p, thresholds);
  return LawSpec{regime.value_or(c.regime), c.alpha_hat, c.beta_hat, uncentered, n, p};
}

double subexp_k() { return 1.0 / std::sqrt(8.0 * std::numbers::pi); }
double superexp_k() { return 1.0 / std::sqrt(2.0 * std::numbers::pi); }

double k_beta(double beta) {
  if (!(beta > 0.0)) throw DomainError("K(beta) needs beta > 0");
  return std::sqrt(beta / (2.0 * std::numbers::pi * -std::expm1(-4.0 * beta)));
}

double subexp_cdf(double y) { return -std::expm1(-subexp_k() * std::exp(0.5 * y)); }

double transitional_cdf(double y, double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("transitional law needs alpha >= 0");
  return std::exp(-subexp_k() * std::exp(-0.5 * (y + 8.0 * alpha * alpha)));
}

double exp_cdf(double y, double beta) {
  return -std::expm1(-k_beta(beta) * std::exp(0.5 * (y + 8.0 * beta)));
}

double superexp_cdf(double y) { return -std::expm1(-superexp_k() * std::exp(0.5 * y)); }

double subexp_quantile(double prob) {
  check_prob(prob);
  return 2.0 * std::log(-std::log1p(-prob) / subexp_k());
}

double transitional_quantile(double prob, double alpha) {
  check_prob(prob);
  if (!(alpha >= 0.0)) throw DomainError("transitional law needs alpha >= 0");
  return -2.0 * std::log(-std::log(prob) / subexp_k()) - 8.0 * alpha * alpha;
}

double exp_quantile(double prob, double beta) {
  check_prob(prob);
  return 2.0 * std::log(-std::log1p(-prob) / k_beta(beta)) - 8.0 * beta;
}

double superexp_quantile(double prob) {
  check_prob(prob);
  return 2.0 * std::log(-std::log1p(-prob) / superexp_k());
}

double law_cdf(const LawSpec& spec, double y) {
  switch (spec.regime) {
    case Regime::SubExp: return subexp_cdf(y);
    case Regime::Transitional: return transitional_cdf(y, spec.alpha);
    case Regime::Exponential: return exp_cdf(y, spec.beta);
    case Regime::SuperExp: return superexp_cdf(y);
  }
  return NAN;
}

double law_quantile(const LawSpec& spec, double prob) {
  switch (spec.regime) {
    case Regime::SubExp: return subexp_quantile(prob);
    case Regime::Transitional: return transitional_quantile(prob, spec.alpha);
    case Regime::Exponential: return exp_quantile(prob, spec.beta);
    case Regime::SuperExp: return superexp_quantile(prob);
  }
  return NAN;
}

PivotalStat subexp_stat(double L, int n, double p) {
  check_np(n, p);
  const double c = subexp_centering(p);
  return {n * log_one_minus_square(L) + c, c, "n log(1-L^2) + 4 log p - log log p"};
}

PivotalStat transitional_stat(double L, int n, double p) {
  check_np(n, p);
  const double c = -subexp_centering(p);
  return {n * L * L + c, c, "n L^2 - 4 log p + log log p"};
}

PivotalStat superexp_stat(double L, int n, double p, bool uncentered) {
  if (n < (uncentered ? 2 : 3))
    throw DomainError("super-exponential statistic needs n >= 3 (centered) or n >= 2");
  if (!(p >= 2.0)) throw DomainError("limit laws need p >= 2");
  const double c = superexp_centering(n, p, uncentered);
  return {n * log_one_minus_square(L) + c, c,
          uncentered ? "n log(1-L^2) + 4n/(n-1) log p - log n"
                     : "n log(1-L^2) + 4n/(n-2) log p - log n"};
}

PivotalStat pivotal(const LawSpec& spec, double L) {
  switch (spec.regime) {
    case Regime::SubExp:
    case Regime::Exponential: return subexp_stat(L, spec.n, spec.p);
    case Regime::Transitional: return transitional_stat(L, spec.n, spec.p);
    case Regime::SuperExp: return superexp_stat(L, spec.n, spec.p, spec.uncentered);
  }
  return {NAN, NAN, ""};
}

LlnPrediction lln_prediction(const LawSpec& spec) {
  switch (spec.regime) {
    case Regime::SubExp:
    case Regime::Transitional: return {2.0 * std::sqrt(spec.beta), -4.0};
    case Regime::Exponential: return {std::sqrt(-std::expm1(-4.0 * spec.beta)), -4.0};
    case Regime::SuperExp: return {1.0, -4.0};
  }
  return {NAN, NAN};
}

double LevelThreshold::coherence() const { return std::sqrt(s); }

LevelThreshold threshold_from_y(const LawSpec& spec, double y) {
  LevelThreshold out{y, 0.0, true};
  switch (spec.regime) {
    case Regime::SubExp:
    case Regime::Exponential:
      out.s = -std::expm1((y - subexp_centering(spec.p)) / spec.n);
      break;
    case Regime::SuperExp:
      out.s = -std::expm1((y - superexp_centering(spec.n, spec.p, spec.uncentered)) / spec.n);
      break;
    case Regime::Transitional:
      out.s = (y + subexp_centering(spec.p)) / spec.n;
      out.statistic_decreasing_in_l = false;
      break;
  }
  if (!(out.s > 0.0 && out.s <= 1.0))
    throw InfeasibleThresholdError("level maps to s_n = " + std::to_string(out.s) +
                                   ", outside (0, 1]");
  return out;
}

LevelThreshold threshold_from_level(const LawSpec& spec, double prob) {
  return threshold_from_y(spec, law_quantile(spec, prob));
}

}  // namespace coh
