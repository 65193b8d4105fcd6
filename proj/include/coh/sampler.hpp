#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace coh {

/// N(0, σ² I_n).
struct Gaussian {
  double sigma = 1.0;
};

/// Σ_k ε_k N(0, σ_k² I_n).
struct ScaleMixture {
  std::vector<double> weights;
  std::vector<double> scales;
};

/// Multivariate t with m degrees of freedom (m = 1 is the multivariate
/// Cauchy law), sampled as z / √(χ²_m / m).
struct MultivariateT {
  int df = 1;
};

/// Spherical column law.
using DistributionSpec = std::variant<Gaussian, ScaleMixture, MultivariateT>;

/// Throws ParameterError when the spec violates its invariants.
void validate(const DistributionSpec& spec);

/// Parses "gaussian:SIGMA", "mixture:E1,E2,...:S1,S2,..." or "t:M".
DistributionSpec parse_distribution(std::string_view text);
std::string to_string(const DistributionSpec& spec);

/// Immutable n×p matrix stored column-major, with the seed and column
/// law that produced it (absent for matrices read from foreign files).
class SampleMatrix {
 public:
  /// Throws ShapeError when data.size() != n·p and ParameterError when an
  /// entry is not finite.
  SampleMatrix(std::size_t n, std::size_t p, std::vector<double> data,
               std::uint64_t seed = 0,
               std::optional<DistributionSpec> spec = std::nullopt);

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::optional<DistributionSpec>& spec() const noexcept { return spec_; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> column(std::size_t j) const noexcept {
    return {data_.data() + j * n_, n_};
  }
  double operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[col * n_ + row];
  }

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<double> data_;
  std::uint64_t seed_;
  std::optional<DistributionSpec> spec_;
};

/// Draws an n×p matrix with i.i.d. columns from `spec`. Column j uses its
/// own substream of `seed`, so the output does not depend on `threads`.
SampleMatrix sample_matrix(const DistributionSpec& spec, std::size_t n,
                           std::size_t p, std::uint64_t seed,
                           unsigned threads = 0);

/// `count` points uniform on S^{dim−1}, stored contiguously.
struct UnitVectors {
  std::size_t dim = 0;
  std::vector<double> data;

  std::size_t count() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
  std::span<const double> operator[](std::size_t i) const noexcept {
    return {data.data() + i * dim, dim};
  }
};

UnitVectors sample_unit_sphere(std::size_t dim, std::size_t count,
                               std::uint64_t seed, unsigned threads = 0);

}  // namespace coh
