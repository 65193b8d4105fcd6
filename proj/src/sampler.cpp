#include "coh/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "coh/error.hpp"
#include "coh/parallel.hpp"
#include "coh/rng.hpp"

namespace coh {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParameterError("not a number: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  for (auto part : split(s, ',')) out.push_back(parse_double(part));
  return out;
}

bool usable(std::span<const double> column) {
  bool nonzero = false;
  for (double v : column) {
    if (!std::isfinite(v)) return false;
    nonzero = nonzero || v != 0.0;
  }
  return nonzero;
}

// Fills one column from its own stream.
class ColumnSampler {
 public:
  explicit ColumnSampler(const DistributionSpec& spec) : spec_(spec) {
    if (const auto* mix = std::get_if<ScaleMixture>(&spec_)) {
      cumulative_.resize(mix->weights.size());
      std::partial_sum(mix->weights.begin(), mix->weights.end(), cumulative_.begin());
    }
  }

  void fill(Xoshiro256& rng, std::span<double> column) const {
    std::visit(overloaded{
                   [&](const Gaussian& g) { gaussian(rng, column, g.sigma); },
                   [&](const ScaleMixture& m) {
                     gaussian(rng, column, m.scales[component(rng.uniform())]);
                   },
                   [&](const MultivariateT& t) {
                     std::chi_squared_distribution<double> chi2(t.df);
                     const double w = chi2(rng);
                     gaussian(rng, column, std::sqrt(t.df / w));
                   },
               },
               spec_);
  }

 private:
  static void gaussian(Xoshiro256& rng, std::span<double> column, double sigma) {
    std::normal_distribution<double> normal(0.0, sigma);
    for (double& v : column) v = normal(rng);
  }

  std::size_t component(double u) const {
    const double total = cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u * total);
    return std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
  }

  const DistributionSpec& spec_;
  std::vector<double> cumulative_;
};

}  // namespace

void validate(const DistributionSpec& spec) {
  std::visit(
      overloaded{
          [](const Gaussian& g) {
            if (!(g.sigma > 0.0) || !std::isfinite(g.sigma))
              throw ParameterError("gaussian sigma must be positive");
          },
          [](const ScaleMixture& m) {
            if (m.weights.empty()) throw ParameterError("mixture needs K >= 1 components");
            if (m.weights.size() != m.scales.size())
              throw ParameterError("mixture weights and scales differ in length");
            double total = 0.0;
            for (double w : m.weights) {
              if (!(w > 0.0)) throw ParameterError("mixture weights must be positive");
              total += w;
            }
            if (std::fabs(total - 1.0) > 1e-12)
              throw ParameterError("mixture weights must sum to 1");
            for (double s : m.scales)
              if (!(s > 0.0) || !std::isfinite(s))
                throw ParameterError("mixture scales must be positive");
          },
          [](const MultivariateT& t) {
            if (t.df < 1) throw ParameterError("t degrees of freedom must be >= 1");
          },
      },
      spec);
}

DistributionSpec parse_distribution(std::string_view text) {
  const auto parts = split(text, ':');
  const auto kind = parts.front();
  DistributionSpec spec;
  if (kind == "gaussian" && parts.size() <= 2) {
    spec = Gaussian{parts.size() == 2 ? parse_double(parts[1]) : 1.0};
  } else if (kind == "mixture" && parts.size() == 3) {
    spec = ScaleMixture{parse_list(parts[1]), parse_list(parts[2])};
  } else if (kind == "t" && parts.size() == 2) {
    const double m = parse_double(parts[1]);
    if (m != std::floor(m)) throw ParameterError("t degrees of freedom must be an integer");
    spec = MultivariateT{static_cast<int>(m)};
  } else {
    throw ParameterError("unrecognized distribution '" + std::string(text) +
                         "' (expected gaussian:S, mixture:E,...:S,... or t:M)");
  }
  validate(spec);
  return spec;
}

std::string to_string(const DistributionSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  std::visit(overloaded{
                 [&](const Gaussian& g) { out << "gaussian:" << g.sigma; },
                 [&](const ScaleMixture& m) {
                   out << "mixture:";
                   for (std::size_t k = 0; k < m.weights.size(); ++k)
                     out << (k ? "," : "") << m.weights[k];
                   out << ':';
                   for (std::size_t k = 0; k < m.scales.size(); ++k)
                     out << (k ? "," : "") << m.scales[k];
                 },
                 [&](const MultivariateT& t) { out << "t:" << t.df; },
             },
             spec);
  return out.str();
}

SampleMatrix::SampleMatrix(std::size_t n, std::size_t p, std::vector<double> data,
                           std::uint64_t seed, std::optional<DistributionSpec> spec)
    : n_(n), p_(p), data_(std::move(data)), seed_(seed), spec_(std::move(spec)) {
  if (n_ == 0 || p_ == 0) throw ShapeError("matrix dimensions must be positive");
  if (data_.size() != n_ * p_) throw ShapeError("matrix data size does not match n*p");
  for (double v : data_)
    if (!std::isfinite(v)) throw ParameterError("matrix entries must be finite");
}

SampleMatrix sample_matrix(const DistributionSpec& spec, std::size_t n, std::size_t p,
                           std::uint64_t seed, unsigned threads) {
  validate(spec);
  if (n < 2 || p < 2) throw ShapeError("sample_matrix needs n >= 2 and p >= 2");

  std::vector<double> data(n * p);
  const ColumnSampler sampler(spec);
  parallel_for(p, threads, [&](std::size_t j) {
    Xoshiro256 rng(substream_seed(seed, j));
    std::span<double> column(data.data() + j * n, n);
    sampler.fill(rng, column);
    // A zero or overflowing column has probability zero; redraw once from
    // the same stream, then give up.
    if (!usable(column)) {
      sampler.fill(rng, column);
      if (!usable(column))
        throw DegenerateColumnError(j, "sampled column is zero or not finite twice");
    }
  });
  return SampleMatrix(n, p, std::move(data), seed, spec);
}

UnitVectors sample_unit_sphere(std::size_t dim, std::size_t count, std::uint64_t seed,
                               unsigned threads) {
  if (dim < 2 || count < 1) throw ShapeError("sample_unit_sphere needs dim >= 2 and count >= 1");
  UnitVectors out{dim, std::vector<double>(dim * count)};
  parallel_for(count, threads, [&](std::size_t i) {
    Xoshiro256 rng(substream_seed(seed, i));
    std::normal_distribution<double> normal;
    std::span<double> v(out.data.data() + i * dim, dim);
    double norm = 0.0;
    while (norm == 0.0) {
      for (double& x : v) x = normal(rng);
      double sumsq = 0.0;
      for (double x : v) sumsq += x * x;
      norm = std::sqrt(sumsq);
    }
    for (double& x : v) x /= norm;
  });
  return out;
}

}  // namespace coh
