#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coh/sampler.hpp"

namespace coh {

enum class Statistic {
  L,
  Ltilde,
  PivotalSubExp,        // n log(1 − L²) + 4 log p − log log p
  PivotalTransitional,  // nL² − 4 log p + log log p
  PivotalExp,           // same transform as PivotalSubExp, compared to exp_cdf(·, β̂)
  PivotalSuperExp,      // n log(1 − L²) + 4n/(n−2) log p − log n
  Rho12,
  Rho12Rho13,           // the pair (ρ₁₂, ρ₁₃); samples hold ρ₁₂, `second` holds ρ₁₃
};

std::string_view to_string(Statistic s);
Statistic parse_statistic(std::string_view text);

inline constexpr double kDefaultBudget = 1e12;

struct ExperimentConfig {
  DistributionSpec dist = Gaussian{};
  std::size_t n = 100;
  std::size_t p = 500;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  Statistic statistic = Statistic::PivotalSubExp;
  /// Pivotal statistics on L̃ instead of L (the super-exp centering then
  /// uses 4n/(n−1)).
  bool uncentered = false;
  double budget = kDefaultBudget;
  unsigned threads = 0;
  std::string output;
  std::string format = "csv";
};

/// Throws ParameterError / ShapeError when the statistic does not fit (n, p).
void validate(const ExperimentConfig& config);

/// n·p²·replicates/2, the pair-flop count the guard compares to the budget.
double estimated_flops(const ExperimentConfig& config);

/// Reads "key = value" lines; '#' starts a comment. Keys: dist, n, p,
/// replicates, seed, statistic, uncentered, budget, threads, output, format.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

struct KsResult {
  std::string law;
  double distance = 0.0;
  /// Asymptotic Kolmogorov p-value at the plug-in law.
  double p_value = 1.0;
};

struct EmpiricalDist {
  /// Ascending; −∞ entries (L = 1 under a log transform) come first.
  std::vector<double> samples;
  std::size_t n_eff = 0;
  std::size_t minus_infinity = 0;
  std::optional<KsResult> ks_vs;
  std::string ks_note;

  /// Finite part of samples.
  std::span<const double> finite() const {
    return std::span<const double>(samples).subspan(minus_infinity);
  }
};

struct ExperimentResult {
  ExperimentConfig config;
  EmpiricalDist dist;
  /// Per-replicate values in replicate order.
  std::vector<double> raw;
  /// Per-replicate coherence (L or L̃) for the coherence-based statistics,
  /// ρ₁₃ for Rho12Rho13; empty otherwise.
  std::vector<double> second;
};

/// Deterministic in config.seed: replicate r draws its matrix from
/// substream_seed(seed, r) whatever the thread count. ResourceError when
/// estimated_flops exceeds config.budget.
ExperimentResult run(const ExperimentConfig& config);

/// Sorts values and counts the −∞ entries; n_eff = values.size().
EmpiricalDist make_empirical(std::vector<double> values);

using Cdf = std::function<double(double)>;

/// sup |F̂ − F| over the finite samples using both one-sided envelopes.
double ks_distance(const EmpiricalDist& dist, const Cdf& cdf);
double ks_distance(std::span<const double> sorted, const Cdf& cdf);
/// Asymptotic Kolmogorov tail P(√N D > x) with the small-N correction
/// √N + 0.12 + 0.11/√N.
double ks_p_value(double distance, std::size_t count);
/// Two-sample distance between two ascending arrays.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Independence of paired samples: decile bins of each margin, a
/// bins×bins contingency table and Pearson's chi-square.
ChiSquareResult chi_square_independence(std::span<const double> x, std::span<const double> y,
                                        int bins = 10);

double pearson(std::span<const double> x, std::span<const double> y);
double median(std::span<const double> sorted);
double mean(std::span<const double> values);

struct CriterionResult {
  std::string id;
  std::string description;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool informational = false;
  std::string note;
};

struct SuiteOptions {
  double budget = kDefaultBudget;
  unsigned threads = 0;
  std::uint64_t seed = 20260101;
};

struct SuiteReport {
  std::string name;
  std::vector<CriterionResult> criteria;
  double seconds = 0.0;
  bool passed() const;
  std::string to_json() const;
};

const std::vector<std::string>& suite_names();

/// ParameterError for an unknown name.
SuiteReport verify_suite(std::string_view name, const SuiteOptions& options = {});

std::string to_json(const ExperimentResult& result);
void write_samples_csv(const std::string& path, const ExperimentResult& result);

}  // namespace coh
