#include "coh/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "coh/chen_stein.hpp"
#include "coh/coherence.hpp"
#include "coh/error.hpp"
#include "coh/exact_dist.hpp"
#include "coh/inference.hpp"
#include "coh/limit_laws.hpp"
#include "coh/parallel.hpp"
#include "coh/rng.hpp"

namespace coh {

using nlohmann::json;

namespace {

constexpr std::pair<Statistic, std::string_view> kStatNames[] = {
    {Statistic::L, "L"},
    {Statistic::Ltilde, "Ltilde"},
    {Statistic::PivotalSubExp, "PivotalSubExp"},
    {Statistic::PivotalTransitional, "PivotalTransitional"},
    {Statistic::PivotalExp, "PivotalExp"},
    {Statistic::PivotalSuperExp, "PivotalSuperExp"},
    {Statistic::Rho12, "Rho12"},
    {Statistic::Rho12Rho13, "Rho12Rho13"},
};

bool is_pivotal(Statistic s) {
  return s == Statistic::PivotalSubExp || s == Statistic::PivotalTransitional ||
         s == Statistic::PivotalExp || s == Statistic::PivotalSuperExp;
}

bool centered_for(const ExperimentConfig& c) {
  return c.statistic == Statistic::Ltilde ? false
         : c.statistic == Statistic::L    ? true
                                          : !c.uncentered;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (!in || !in.eof()) throw ParameterError("bad value for '" + key + "': " + value);
  return out;
}

bool parse_bool(const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw ParameterError("bad boolean: " + value);
}

// Reference law for the samples of a run, when there is one.
std::optional<std::pair<std::string, Cdf>> reference_law(const ExperimentConfig& c) {
  const int n = static_cast<int>(c.n);
  const double p = static_cast<double>(c.p);
  const bool centered = centered_for(c);
  switch (c.statistic) {
    case Statistic::Rho12:
    case Statistic::Rho12Rho13: {
      if (centered && n <= 2) return std::nullopt;
      const CorrLaw law(n, centered);
      return std::pair{std::string("exact correlation law"),
                       Cdf([law](double x) { return cdf(law, x); })};
    }
    case Statistic::L:
    case Statistic::Ltilde:
      if (n < (centered ? 3 : 2)) return std::nullopt;
      return std::pair{std::string("Chen-Stein exp(-lambda(t))"), Cdf([=](double t) {
                         return poisson_approx(n, p, std::clamp(t, 0.0, 1.0), centered).prob;
                       })};
    case Statistic::PivotalSubExp: return std::pair{std::string("subexp_cdf"), Cdf(subexp_cdf)};
    case Statistic::PivotalTransitional: {
      const double a = std::log(p) / std::sqrt(static_cast<double>(n));
      return std::pair{std::string("transitional_cdf(alpha_hat)"),
                       Cdf([a](double y) { return transitional_cdf(y, a); })};
    }
    case Statistic::PivotalExp: {
      const double b = std::log(p) / n;
      return std::pair{std::string("exp_cdf(beta_hat)"),
                       Cdf([b](double y) { return exp_cdf(y, b); })};
    }
    case Statistic::PivotalSuperExp:
      return std::pair{std::string("superexp_cdf"), Cdf(superexp_cdf)};
  }
  return std::nullopt;
}

// Kolmogorov distribution tail P(K > x).
double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    const double pi = std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      s += std::exp(-m * m * pi * pi / (8.0 * x * x));
    }
    return 1.0 - std::sqrt(2.0 * pi) / x * s;
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace

std::string_view to_string(Statistic s) {
  for (const auto& [k, v] : kStatNames)
    if (k == s) return v;
  return "?";
}

Statistic parse_statistic(std::string_view text) {
  for (const auto& [k, v] : kStatNames)
    if (v == text) return k;
  throw ParameterError("unknown statistic '" + std::string(text) + "'");
}

void validate(const ExperimentConfig& c) {
  validate(c.dist);
  if (c.replicates < 1) throw ParameterError("replicates must be >= 1");
  if (c.n < 2 || c.p < 2) throw ShapeError("experiments need n >= 2 and p >= 2");
  if (c.statistic == Statistic::Rho12Rho13 && c.p < 3) throw ShapeError("Rho12Rho13 needs p >= 3");
  if (is_pivotal(c.statistic)) {
    const bool super_unc = c.statistic == Statistic::PivotalSuperExp && c.uncentered;
    if (c.n < (super_unc ? 2u : 3u)) throw ShapeError("pivotal statistics need n >= 3");
  }
  if (!(c.budget > 0.0)) throw ParameterError("budget must be positive");
  if (c.format != "csv" && c.format != "json") throw ParameterError("format must be csv or json");
}

double estimated_flops(const ExperimentConfig& c) {
  const double n = static_cast<double>(c.n);
  const double p = static_cast<double>(c.p);
  return n * p * p * static_cast<double>(c.replicates) / 2.0;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "dist") c.dist = parse_distribution(value);
    else if (key == "n") c.n = parse_number<std::size_t>(key, value);
    else if (key == "p") c.p = parse_number<std::size_t>(key, value);
    else if (key == "replicates") c.replicates = parse_number<std::size_t>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "statistic") c.statistic = parse_statistic(value);
    else if (key == "uncentered") c.uncentered = parse_bool(value);
    else if (key == "budget") c.budget = parse_number<double>(key, value);
    else if (key == "threads") c.threads = parse_number<unsigned>(key, value);
    else if (key == "output") c.output = value;
    else if (key == "format") c.format = value;
    else throw ParameterError("unknown config key '" + key + "'");
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

EmpiricalDist make_empirical(std::vector<double> values) {
  EmpiricalDist d;
  d.n_eff = values.size();
  std::sort(values.begin(), values.end());
  d.minus_infinity = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return v == -INFINITY; }));
  d.samples = std::move(values);
  return d;
}

ExperimentResult run(const ExperimentConfig& config) {
  validate(config);
  if (const double est = estimated_flops(config); est > config.budget)
    throw ResourceError(est, config.budget);

  const std::size_t R = config.replicates;
  const int n = static_cast<int>(config.n);
  const double p = static_cast<double>(config.p);
  const bool centered = centered_for(config);
  const bool keep_second = config.statistic != Statistic::Rho12;

  ExperimentResult out;
  out.config = config;
  out.raw.resize(R);
  if (keep_second) out.second.resize(R);

  // One replicate: all parallelism inside it. Otherwise replicates are the tasks.
  const unsigned outer = R == 1 ? 1 : config.threads;
  const unsigned inner = R == 1 ? config.threads : 1;

  parallel_for(R, outer, [&](std::size_t r) {
    const SampleMatrix m = sample_matrix(config.dist, config.n, config.p,
                                         substream_seed(config.seed, r), inner);
    double value = 0.0;
    double second = 0.0;
    switch (config.statistic) {
      case Statistic::Rho12:
      case Statistic::Rho12Rho13: {
        const IndexPair pairs[] = {{0, 1}, {0, 2}};
        const std::size_t k = config.statistic == Statistic::Rho12 ? 1 : 2;
        const auto rho = pair_correlations(m, std::span(pairs, k), centered);
        value = rho[0];
        if (k == 2) second = rho[1];
        break;
      }
      default: {
        const auto c = coherence(m, centered, KernelOptions{inner, 0});
        second = c.value;
        switch (config.statistic) {
          case Statistic::PivotalSubExp:
          case Statistic::PivotalExp: value = subexp_stat(c.value, n, p).value; break;
          case Statistic::PivotalTransitional: value = transitional_stat(c.value, n, p).value; break;
          case Statistic::PivotalSuperExp:
            value = superexp_stat(c.value, n, p, !centered).value;
            break;
          default: value = c.value; break;
        }
      }
    }
    out.raw[r] = value;
    if (keep_second) out.second[r] = second;
  });

  out.dist = make_empirical(out.raw);
  if (out.dist.n_eff < 2) {
    out.dist.ks_note = "KS undefined for a single sample";
  } else if (const auto law = reference_law(config)) {
    const auto finite = out.dist.finite();
    if (finite.empty()) {
      out.dist.ks_note = "no finite samples";
    } else {
      const double d = ks_distance(out.dist, law->second);
      out.dist.ks_vs = KsResult{law->first, d, ks_p_value(d, finite.size())};
      if (out.dist.minus_infinity)
        out.dist.ks_note = std::to_string(out.dist.minus_infinity) + " samples at -inf excluded";
    }
  } else {
    out.dist.ks_note = "no continuous reference law";
  }
  return out;
}

double ks_distance(std::span<const double> sorted, const Cdf& F) {
  const double N = static_cast<double>(sorted.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double f = F(sorted[i]);
    d = std::max({d, std::fabs(static_cast<double>(j) / N - f), std::fabs(f - static_cast<double>(i) / N)});
    i = j;
  }
  return d;
}

double ks_distance(const EmpiricalDist& dist, const Cdf& cdf) {
  return ks_distance(dist.finite(), cdf);
}

double ks_p_value(double distance, std::size_t count) {
  const double sn = std::sqrt(static_cast<double>(count));
  return kolmogorov_tail((sn + 0.12 + 0.11 / sn) * distance);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

ChiSquareResult chi_square_independence(std::span<const double> x, std::span<const double> y,
                                        int bins) {
  if (x.size() != y.size()) throw ShapeError("chi-square needs paired samples");
  if (bins < 2 || x.size() < static_cast<std::size_t>(bins))
    throw ParameterError("chi-square needs at least `bins` samples and bins >= 2");
  const std::size_t N = x.size();
  const auto cuts = [&](std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    std::vector<double> c;
    for (int k = 1; k < bins; ++k) c.push_back(s[k * N / bins]);
    return c;
  };
  const auto cx = cuts(x);
  const auto cy = cuts(y);
  const auto bin = [](const std::vector<double>& c, double v) {
    return static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), v) - c.begin());
  };
  const std::size_t B = static_cast<std::size_t>(bins);
  std::vector<double> table(B * B, 0.0), rows(B, 0.0), cols(B, 0.0);
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t a = bin(cx, x[k]), b = bin(cy, y[k]);
    table[a * B + b] += 1.0;
    rows[a] += 1.0;
    cols[b] += 1.0;
  }
  ChiSquareResult r;
  int live_rows = 0, live_cols = 0;
  for (std::size_t a = 0; a < B; ++a) live_rows += rows[a] > 0;
  for (std::size_t b = 0; b < B; ++b) live_cols += cols[b] > 0;
  for (std::size_t a = 0; a < B; ++a)
    for (std::size_t b = 0; b < B; ++b) {
      const double e = rows[a] * cols[b] / static_cast<double>(N);
      if (e > 0.0) r.statistic += (table[a * B + b] - e) * (table[a * B + b] - e) / e;
    }
  r.dof = (live_rows - 1) * (live_cols - 1);
  r.p_value = r.dof > 0 ? boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic) : 1.0;
  return r;
}

double mean(std::span<const double> v) {
  if (v.empty()) return NAN;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ShapeError("pearson needs paired samples");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double median(std::span<const double> s) {
  if (s.empty()) return NAN;
  const std::size_t h = s.size() / 2;
  return s.size() % 2 ? s[h] : 0.5 * (s[h - 1] + s[h]);
}

// ---------------------------------------------------------------------------
// Suites

bool SuiteReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.passed || c.informational; });
}

std::string SuiteReport::to_json() const {
  json j;
  j["suite"] = name;
  j["passed"] = passed();
  j["seconds"] = seconds;
  j["criteria"] = json::array();
  for (const auto& c : criteria) {
    json e = {{"id", c.id},         {"description", c.description}, {"measured", c.measured},
              {"target", c.target}, {"tolerance", c.tolerance},     {"passed", c.passed},
              {"informational", c.informational}};
    if (!c.note.empty()) e["note"] = c.note;
    j["criteria"].push_back(e);
  }
  return j.dump(2);
}

namespace {

// Tolerances: the asymptotic KS quantile at level 0.01 (1.63/√N) times 1.5
// where a limit law is approximated at finite n, else as fixed below.
struct Suite {
  const SuiteOptions& opt;
  SuiteReport& rep;

  ExperimentConfig config(std::size_t n, std::size_t p, std::size_t reps, Statistic s,
                          std::uint64_t salt) const {
    ExperimentConfig c;
    c.n = n;
    c.p = p;
    c.replicates = reps;
    c.statistic = s;
    c.seed = substream_seed(opt.seed, salt);
    c.budget = opt.budget;
    c.threads = opt.threads;
    return c;
  }

  CriterionResult& add(std::string id, std::string description, double measured, double target,
                       double tolerance, bool passed, bool informational = false) {
    rep.criteria.push_back(
        {std::move(id), std::move(description), measured, target, tolerance, passed, informational, {}});
    return rep.criteria.back();
  }

  // |measured − target| <= tolerance
  CriterionResult& within(std::string id, std::string description, double measured, double target,
                          double tolerance, bool informational = false) {
    return add(std::move(id), std::move(description), measured, target, tolerance,
               std::fabs(measured - target) <= tolerance, informational);
  }

  CriterionResult& below(std::string id, std::string description, double measured, double limit,
                         bool informational = false) {
    return add(std::move(id), std::move(description), measured, limit, limit, measured < limit,
               informational);
  }

  void refused(std::string id, std::string description, const ResourceError& e) {
    add(std::move(id), std::move(description), NAN, NAN, NAN, false).note = e.what();
  }
};

void small_n_laws(Suite& s) {
  constexpr std::size_t kReps = 100000;
  constexpr double kFreqTol = 0.01;
  constexpr double kKsTol = 0.006;
  {
    const auto r = run(s.config(2, 2, kReps, Statistic::Rho12, 2));
    const double plus = static_cast<double>(
        std::count_if(r.raw.begin(), r.raw.end(), [](double v) { return v > 0.5; }));
    s.within("n2-frequency", "n=2: fraction of rho12 = +1", plus / kReps, 0.5, kFreqTol);
  }
  for (int n = 3; n <= 5; ++n) {
    const auto r = run(s.config(n, 2, kReps, Statistic::Rho12, n));
    const auto law = small_n_law(n);
    const double d = ks_distance(r.dist, [&](double x) { return law.cdf(x); });
    s.below("n" + std::to_string(n) + "-ks", "n=" + std::to_string(n) + ": KS vs " +
                std::string(law.name()) + " law", d, kKsTol);
  }
}

void pairwise_independence(Suite& s) {
  constexpr double kCorrTol = 0.02;
  constexpr double kChiLevel = 0.001;
  const auto r = run(s.config(6, 3, 100000, Statistic::Rho12Rho13, 1));
  std::vector<double> sq12(r.raw.size()), sq13(r.raw.size());
  for (std::size_t k = 0; k < r.raw.size(); ++k) {
    sq12[k] = r.raw[k] * r.raw[k];
    sq13[k] = r.second[k] * r.second[k];
  }
  s.below("corr", "|corr(rho12, rho13)|", std::fabs(pearson(r.raw, r.second)), kCorrTol);
  s.below("corr-squares", "|corr(rho12^2, rho13^2)|", std::fabs(pearson(sq12, sq13)), kCorrTol);
  const auto chi = chi_square_independence(r.raw, r.second, 10);
  s.add("chi-square", "10x10 chi-square independence p-value >= 0.001", chi.p_value, kChiLevel,
        kChiLevel, chi.p_value >= kChiLevel)
      .note = "statistic " + std::to_string(chi.statistic) + " on " + std::to_string(chi.dof) + " dof";
}

void subexp_limit(Suite& s) {
  constexpr double kKsTol = 0.05;
  const auto r = run(s.config(100, 500, 2000, Statistic::PivotalSubExp, 1));
  s.below("ks", "KS of n T + 4 log p - log log p vs subexp_cdf", ks_distance(r.dist, subexp_cdf), kKsTol);
  std::vector<double> L = r.second;
  std::sort(L.begin(), L.end());
  const double d = ks_distance(L, [](double t) { return poisson_approx(100, 500, t).prob; });
  s.below("ks-chen-stein", "KS of L vs exact-n Chen-Stein law exp(-lambda(t))", d,
          1.5 * 1.63 / std::sqrt(2000.0), true);
}

void transitional_shift(Suite& s) {
  constexpr double kRelTol = 0.30;
  const std::size_t n1 = 2500, n2 = 400;
  const auto p1 = static_cast<std::size_t>(std::llround(std::exp(0.1 * std::sqrt(2500.0))));
  const auto p2 = static_cast<std::size_t>(std::llround(std::exp(0.7 * std::sqrt(400.0))));
  const double a1 = std::log(static_cast<double>(p1)) / std::sqrt(static_cast<double>(n1));
  const double a2 = std::log(static_cast<double>(p2)) / std::sqrt(static_cast<double>(n2));
  const double predicted = 8.0 * (a2 * a2 - a1 * a1);

  // Exact-n medians from the Chen-Stein law: P(L <= t) = 1/2.
  const auto cs_median = [](std::size_t n, std::size_t p) {
    const double t = threshold_for_prob(static_cast<int>(n), static_cast<double>(p), 0.5);
    return transitional_stat(t, static_cast<int>(n), static_cast<double>(p)).value;
  };
  const double cs_shift = cs_median(n1, p1) - cs_median(n2, p2);
  s.within("chen-stein-shift", "exact-n median shift (Chen-Stein) vs 8(a2^2 - a1^2)", cs_shift,
           predicted, kRelTol * predicted, true);

  try {
    const auto r1 = run(s.config(n1, p1, 1000, Statistic::PivotalTransitional, 1));
    const auto r2 = run(s.config(n2, p2, 1000, Statistic::PivotalTransitional, 2));
    const double shift = median(r1.dist.samples) - median(r2.dist.samples);
    s.within("median-shift", "Monte Carlo median shift vs 8(a2^2 - a1^2)", shift, predicted,
             kRelTol * predicted);
  } catch (const ResourceError& e) {
    s.refused("median-shift", "Monte Carlo median shift vs 8(a2^2 - a1^2)", e);
  }
}

void exp_limit(Suite& s) {
  constexpr double kKsTol = 0.08;
  constexpr double kMeanTol = 0.05;
  const auto r = run(s.config(30, 8103, 500, Statistic::PivotalExp, 1));
  s.below("ks", "KS of n T + 4 log p - log log p vs exp_cdf(., 0.3)",
          ks_distance(r.dist, [](double y) { return exp_cdf(y, 0.3); }), kKsTol);
  s.within("mean-L", "mean L vs sqrt(1 - exp(-1.2))", mean(r.second), std::sqrt(-std::expm1(-1.2)),
           kMeanTol);
}

void superexp_limit(Suite& s) {
  constexpr double kMedianRel = 0.25;
  constexpr double kKsInfo = 0.12;
  constexpr double kCenteringRel = 0.30;
  const std::size_t n = 5, p = 30000;
  auto cfg = s.config(n, p, 200, Statistic::PivotalSuperExp, 1);
  const auto rc = run(cfg);
  cfg.uncentered = true;
  const auto ru = run(cfg);

  std::vector<double> scaled;
  for (double L : rc.second)
    scaled.push_back(n / std::log(static_cast<double>(p)) * log_one_minus_square(L));
  std::sort(scaled.begin(), scaled.end());
  s.within("median-scaled-T", "median of (n / log p) T vs -4", median(scaled), -4.0, 4.0 * kMedianRel);
  s.below("ks", "KS of the super-exponential statistic vs superexp_cdf",
          ks_distance(rc.dist, superexp_cdf), kKsInfo, true);

  // The two pivotal statistics share a limit law, so their centerings must
  // absorb the gap between n T~ and n T: compare that gap to Δ.
  const double delta = (4.0 * n / (n - 2.0) - 4.0 * n / (n - 1.0)) * std::log(static_cast<double>(p));
  const auto mean_nt = [n](const std::vector<double>& Ls) {
    std::vector<double> v;
    for (double L : Ls)
      if (L < 1.0) v.push_back(n * log_one_minus_square(L));
    return mean(v);
  };
  s.within("centering-difference", "mean(n T~) - mean(n T) vs centering gap", mean_nt(ru.second) - mean_nt(rc.second),
           delta, kCenteringRel * delta);
  s.within("pivotal-difference", "mean(centered) - mean(uncentered) pivotal statistic vs 0",
           mean(rc.dist.finite()) - mean(ru.dist.finite()), 0.0, kCenteringRel * delta, true);
}

void chen_stein_bound(Suite& s) {
  constexpr std::size_t kReps = 2000;
  std::uint64_t salt = 0;
  for (std::size_t n : {10, 50, 100}) {
    for (std::size_t p : {20, 100, 500}) {
      const int ni = static_cast<int>(n);
      const double pd = static_cast<double>(p);
      const double t = threshold_for_prob(ni, pd, std::exp(-1.0));
      const auto pa = poisson_approx(ni, pd, t);
      const auto r = run(s.config(n, p, kReps, Statistic::L, ++salt));
      const double hits = static_cast<double>(
          std::count_if(r.raw.begin(), r.raw.end(), [t](double L) { return L <= t; }));
      const double phat = hits / kReps;
      const double se = std::sqrt(pa.prob * (1.0 - pa.prob) / kReps);
      const std::string cell = "n=" + std::to_string(n) + " p=" + std::to_string(p);
      s.within("cell " + cell, cell + ": |P(L <= t) - exp(-lambda)| <= bound + 3 SE", phat, pa.prob,
               pa.error_bound + 3.0 * se)
          .note = "lambda " + std::to_string(pa.lambda) + ", t " + std::to_string(t);
      s.within("cell " + cell + " (3 SE only)", cell + ": |P(L <= t) - exp(-lambda)| <= 3 SE", phat,
               pa.prob, 3.0 * se, true);
    }
  }
}

void lln(Suite& s) {
  const std::size_t n = 2000, p = 2000;
  const auto r = run(s.config(n, p, 100, Statistic::L, 1));
  const double scale = std::sqrt(n / std::log(static_cast<double>(p)));
  const double m = mean(r.raw) * scale;
  s.add("mean-scaled-L", "mean sqrt(n / log p) L in [1.8, 2.2]", m, 2.0, 0.2, m >= 1.8 && m <= 2.2);
}

void gaussian_remark(Suite& s) {
  constexpr double kKsTol = 0.02;
  const std::size_t n = 10000;
  const auto r = run(s.config(n, 2, 10000, Statistic::Rho12, 1));
  const double sn = std::sqrt(static_cast<double>(n));
  const double d = ks_distance(r.dist, [sn](double rho) { return 0.5 * std::erfc(-rho * sn / std::numbers::sqrt2); });
  s.below("ks", "KS of sqrt(n) rho12 vs N(0, 1)", d, kKsTol);
}

void test_calibration(Suite& s) {
  constexpr double kSizeTol = 0.02;
  const std::size_t reps = 2000;
  const auto r = run(s.config(100, 500, reps, Statistic::L, 1));
  const auto rate = [&](TestOptions opt) {
    std::size_t rejects = 0;
    for (double L : r.raw) {
      CoherenceResult c;
      c.value = L;
      c.n = 100;
      c.p = 500;
      rejects += independence_test(c, opt).reject;
    }
    return static_cast<double>(rejects) / reps;
  };
  TestOptions opt;
  s.within("size-default", "null rejection rate, default regime choice", rate(opt), 0.05, kSizeTol);
  opt.regime = Regime::SubExp;
  s.within("size-subexp", "null rejection rate, SubExp law forced", rate(opt), 0.05, kSizeTol, true);
  opt.regime.reset();
  opt.method = TestMethod::ChenSteinFiniteN;
  s.within("size-chen-stein", "null rejection rate, Chen-Stein finite-n test", rate(opt), 0.05,
           kSizeTol, true);
}

using SuiteFn = void (*)(Suite&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"small-n-laws", small_n_laws},
      {"pairwise-independence", pairwise_independence},
      {"subexp-limit", subexp_limit},
      {"transitional-shift", transitional_shift},
      {"exp-limit", exp_limit},
      {"superexp-limit", superexp_limit},
      {"chen-stein-bound", chen_stein_bound},
      {"lln", lln},
      {"gaussian-remark", gaussian_remark},
      {"test-calibration", test_calibration},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : suites()) v.push_back(name);
    return v;
  }();
  return names;
}

SuiteReport verify_suite(std::string_view name, const SuiteOptions& options) {
  for (const auto& [suite_name, fn] : suites()) {
    if (suite_name != name) continue;
    SuiteReport rep;
    rep.name = suite_name;
    Suite s{options, rep};
    const auto start = std::chrono::steady_clock::now();
    fn(s);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
  }
  throw ParameterError("unknown suite '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Output

std::string to_json(const ExperimentResult& r) {
  const auto& c = r.config;
  json j;
  j["config"] = {{"dist", to_string(c.dist)},
                 {"n", c.n},
                 {"p", c.p},
                 {"replicates", c.replicates},
                 {"seed", c.seed},
                 {"statistic", to_string(c.statistic)},
                 {"uncentered", c.uncentered},
                 {"budget", c.budget}};
  const auto& d = r.dist;
  j["n_eff"] = d.n_eff;
  j["minus_infinity"] = d.minus_infinity;
  const auto f = d.finite();
  if (!f.empty()) {
    j["summary"] = {{"min", f.front()}, {"median", median(f)}, {"mean", mean(f)}, {"max", f.back()}};
  }
  if (d.ks_vs)
    j["ks_vs"] = {{"law", d.ks_vs->law}, {"distance", d.ks_vs->distance}, {"p_value", d.ks_vs->p_value}};
  else
    j["ks_vs"] = nullptr;
  if (!d.ks_note.empty()) j["ks_note"] = d.ks_note;
  if (c.format == "json") {
    json samples = json::array();
    for (double v : r.raw) samples.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    j["samples"] = samples;
  }
  return j.dump(2);
}

void write_samples_csv(const std::string& path, const ExperimentResult& r) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << to_string(r.config.statistic) << '\n';
  out.precision(17);
  for (double v : r.raw) out << v << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace coh
