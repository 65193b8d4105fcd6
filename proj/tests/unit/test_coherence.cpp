#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "coh/coherence.hpp"
#include "coh/error.hpp"
#include "oracles.hpp"

using namespace coh;

namespace {

SampleMatrix with_column(const SampleMatrix& m, std::size_t j, const std::function<double(double)>& f) {
  std::vector<double> d(m.data().begin(), m.data().end());
  for (std::size_t k = 0; k < m.n(); ++k) d[j * m.n() + k] = f(d[j * m.n() + k]);
  return SampleMatrix(m.n(), m.p(), std::move(d));
}

// Random orthogonal matrix by Gram-Schmidt on Gaussian columns, row-major.
std::vector<double> random_orthogonal(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::vector<double> q(n * n);
  for (double& v : q) v = z(gen);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      double dot = 0;
      for (std::size_t r = 0; r < n; ++r) dot += q[r * n + c] * q[r * n + prev];
      for (std::size_t r = 0; r < n; ++r) q[r * n + c] -= dot * q[r * n + prev];
    }
    double norm = 0;
    for (std::size_t r = 0; r < n; ++r) norm += q[r * n + c] * q[r * n + c];
    for (std::size_t r = 0; r < n; ++r) q[r * n + c] /= std::sqrt(norm);
  }
  return q;
}

}  // namespace

TEST_SUITE("coherence") {

TEST_CASE("exact multiple gives value 1 at the first pair") {
  const auto base = sample_matrix(Gaussian{}, 6, 3, 1);
  std::vector<double> d(base.data().begin(), base.data().end());
  for (int k = 0; k < 6; ++k) d[6 + k] = 3 * d[k];
  const SampleMatrix m(6, 3, d);
  for (bool centered : {true, false}) {
    const auto r = coherence(m, centered);
    CHECK(r.value == 1.0);
    CHECK(r.i == 0);
    CHECK(r.j == 1);
    CHECK(r.t_stat == -INFINITY);
  }
}

TEST_CASE("centered coherence at n = 2 is 1") {
  const auto m = sample_matrix(Gaussian{}, 2, 9, 4);
  const auto r = coherence(m, true);
  CHECK(r.value == 1.0);
  CHECK(r.i == 0);
  CHECK(r.j == 1);
}

TEST_CASE("fixed integer matrix against the naive oracle") {
  const SampleMatrix m(5, 4, {1, 2, 3, 4, 6,   2, 1, 0, 5, 3,   -1, 4, 2, 2, 0,   7, 7, 1, 0, 2});
  for (bool centered : {true, false}) {
    const auto r = coherence(m, centered);
    const auto o = oracle::naive_coherence(m.data(), 5, 4, centered);
    CHECK(r.value == doctest::Approx(o.value).epsilon(1e-12));
    CHECK(r.i == o.i);
    CHECK(r.j == o.j);
    CHECK(r.t_stat == doctest::Approx(std::log1p(-r.value * r.value)).epsilon(1e-14));
  }
}

TEST_CASE("blocked kernel equals the naive kernel on 200 fuzz instances") {
  std::mt19937_64 gen(2024);
  const DistributionSpec specs[] = {Gaussian{1}, MultivariateT{1}, ScaleMixture{{0.5, 0.5}, {1, 10}}};
  int pair_mismatch = 0;
  double worst = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 3 + gen() % 18;
    const std::size_t p = 2 + gen() % 49;
    const auto m = sample_matrix(specs[inst % 3], n, p, gen());
    const bool centered = inst % 2 == 0;
    const KernelOptions opt{static_cast<unsigned>(1 + gen() % 4), (gen() % 4) * 8};
    const auto r = coherence(m, centered, opt);
    const auto o = oracle::naive_coherence(m.data(), n, p, centered);
    pair_mismatch += r.i != o.i || r.j != o.j;
    worst = std::max(worst, std::fabs(r.value - o.value));
  }
  CHECK(pair_mismatch == 0);
  CHECK(worst <= 1e-12);
}

TEST_CASE("larger instance across block sizes and thread counts") {
  const auto m = sample_matrix(Gaussian{}, 37, 611, 5);
  const auto ref = coherence(m, true, {1, 0});
  const auto o = oracle::naive_coherence(m.data(), 37, 611, true);
  CHECK(ref.i == o.i);
  CHECK(ref.j == o.j);
  CHECK(std::fabs(ref.value - o.value) <= 1e-12);
  for (unsigned threads : {2u, 8u})
    for (std::size_t block : {0, 8, 40, 64, 1000}) {
      const auto r = coherence(m, true, {threads, block});
      CHECK(r.value == ref.value);
      CHECK(r.i == ref.i);
      CHECK(r.j == ref.j);
    }
}

TEST_CASE("ties resolve to the lexicographically smallest pair") {
  // Orthogonal ±1 columns: every cosine is exact, so (1, 5) and (2, 4)
  // tie at exactly 1 and (1, 5) must win.
  const std::vector<double> d{1, 1, -1, 1,   1, -1, 1, 1,   1, 1, 1, -1,
                              -1, 1, 1, 1,   1, 1, 1, -1,   1, -1, 1, 1};
  for (unsigned threads : {1u, 3u}) {
    const auto r = coherence(SampleMatrix(4, 6, d), false, {threads, 0});
    CHECK(r.value == 1.0);
    CHECK(r.i == 1);
    CHECK(r.j == 5);
  }
}

TEST_CASE("affine, scale and rotation invariance") {
  const auto m = sample_matrix(Gaussian{}, 12, 30, 8);
  const auto c0 = coherence(m, true);
  const auto u0 = coherence(m, false);
  for (double a : {-2.5, 0.1, 7.0}) {
    const auto ma = with_column(m, c0.j, [a](double x) { return a * x + 3.0; });
    CHECK(std::fabs(coherence(ma, true).value - c0.value) < 1e-10);
    const auto ms = with_column(m, u0.i, [a](double x) { return a * x; });
    CHECK(std::fabs(coherence(ms, false).value - u0.value) < 1e-10);
  }
  const auto q = random_orthogonal(12, 17);
  std::vector<double> rot(m.data().size(), 0.0);
  for (std::size_t j = 0; j < 30; ++j)
    for (std::size_t r = 0; r < 12; ++r)
      for (std::size_t k = 0; k < 12; ++k) rot[j * 12 + r] += q[r * 12 + k] * m(k, j);
  CHECK(std::fabs(coherence(SampleMatrix(12, 30, rot), false).value - u0.value) < 1e-10);
}

TEST_CASE("row permutation") {
  const auto m = sample_matrix(Gaussian{}, 25, 80, 10);
  std::vector<std::size_t> perm(25);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(4));
  std::vector<double> d(m.data().size());
  for (std::size_t j = 0; j < 80; ++j)
    for (std::size_t r = 0; r < 25; ++r) d[j * 25 + r] = m(perm[r], j);
  const auto a = coherence(m, true);
  const auto b = coherence(SampleMatrix(25, 80, d), true);
  CHECK(a.i == b.i);
  CHECK(a.j == b.j);
  CHECK(std::fabs(a.value - b.value) < 1e-13);
}

TEST_CASE("degenerate columns and shapes") {
  const auto m = sample_matrix(Gaussian{}, 5, 4, 2);
  const auto constant = with_column(m, 2, [](double) { return 4.0; });
  try {
    coherence(constant, true);
    FAIL("expected DegenerateColumnError");
  } catch (const DegenerateColumnError& e) {
    CHECK(e.column() == 2);
  }
  CHECK_NOTHROW(coherence(constant, false));
  const auto zero = with_column(m, 3, [](double) { return 0.0; });
  CHECK_THROWS_AS(coherence(zero, false), DegenerateColumnError);
  CHECK_THROWS_AS(coherence(SampleMatrix(5, 1, {1, 2, 3, 4, 5}), true), ShapeError);
  CHECK_THROWS_AS(coherence(SampleMatrix(1, 3, {1, 2, 3}), false), ShapeError);
}

TEST_CASE("pair correlations") {
  const auto m = sample_matrix(Gaussian{}, 6, 3, 31);
  const IndexPair pairs[] = {{0, 1}, {0, 2}, {1, 2}};
  for (bool centered : {true, false}) {
    const auto r = pair_correlations(m, pairs, centered);
    for (int k = 0; k < 3; ++k) {
      const auto [i, j] = pairs[k];
      CHECK(std::fabs(r[k] - double(oracle::corr(&m.data()[i * 6], &m.data()[j * 6], 6, centered))) < 1e-12);
    }
  }
  const IndexPair same[] = {{1, 1}};
  CHECK_THROWS_AS(pair_correlations(m, same, true), RangeError);
  const IndexPair reversed[] = {{2, 1}};
  CHECK_THROWS_AS(pair_correlations(m, reversed, true), RangeError);
  const IndexPair outside[] = {{0, 3}};
  CHECK_THROWS_AS(pair_correlations(m, outside, true), RangeError);

  std::vector<double> d(m.data().begin(), m.data().end());
  std::copy_n(d.begin(), 6, d.begin() + 6);
  const IndexPair first[] = {{0, 1}};
  const auto r = pair_correlations(SampleMatrix(6, 3, d), first, true);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r[0] <= 1.0);
}

TEST_CASE("log(1 - L^2) stays accurate near 1") {
  for (double L : {0.0, 0.3, 0.9, 0.95, 0.999999, 1 - 1e-12}) {
    const long double ref = std::log1p(-static_cast<long double>(L) * L);
    CHECK(log_one_minus_square(L) == doctest::Approx(double(ref)).epsilon(1e-13));
  }
  CHECK(log_one_minus_square(1.0) == -INFINITY);
  CHECK(log_one_minus_square(-0.5) == log_one_minus_square(0.5));
}

}
