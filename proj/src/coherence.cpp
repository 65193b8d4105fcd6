#include "coh/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <unordered_map>

#include "coh/error.hpp"
#include "coh/parallel.hpp"

namespace coh {

namespace {

constexpr std::size_t kPanel = 8;
constexpr std::size_t kL2Budget = std::size_t{1} << 20;
constexpr std::size_t kMaxBlockPanels = 32;

using v8d = double __attribute__((vector_size(64)));

struct AlignedDeleter {
  void operator()(double* p) const { ::operator delete[](p, std::align_val_t{64}); }
};
using AlignedBuffer = std::unique_ptr<double[], AlignedDeleter>;

AlignedBuffer make_buffer(std::size_t count) {
  auto* raw = static_cast<double*>(::operator new[](count * sizeof(double), std::align_val_t{64}));
  std::fill(raw, raw + count, 0.0);
  return AlignedBuffer(raw);
}

// Writes the unit-norm (optionally mean-removed) version of x into z.
void normalize_column(std::span<const double> x, bool centered, std::size_t index,
                      double* z, std::size_t stride) {
  const std::size_t n = x.size();
  double shift = 0.0;
  if (centered) {
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }))
      throw DegenerateColumnError(index, "constant column has no Pearson correlation");
    double sum = 0.0;
    for (double v : x) sum += v;
    shift = sum / static_cast<double>(n);
  }
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::fabs(v - shift));
  if (scale == 0.0)
    throw DegenerateColumnError(index, centered ? "constant column has no Pearson correlation"
                                                : "zero column has no cosine correlation");
  double sumsq = 0.0;
  for (double v : x) {
    const double s = (v - shift) / scale;
    sumsq += s * s;
  }
  const double inv = 1.0 / std::sqrt(sumsq);
  for (std::size_t k = 0; k < n; ++k) z[k * stride] = (x[k] - shift) / scale * inv;
}

// Cosines within rounding of ±1 are reported as exactly ±1 (exact
// multiples, every pair at centered n = 2).
constexpr double kSnap = 1.0 - 16 * std::numeric_limits<double>::epsilon();

inline double snap(double v) { return v >= kSnap ? 1.0 : v; }

struct Best {
  double value = -1.0;
  std::size_t i = 0;
  std::size_t j = 0;

  bool improved_by(double v, std::size_t a, std::size_t b) const {
    return v > value || (v == value && (a < i || (a == i && b < j)));
  }
  void offer(double v, std::size_t a, std::size_t b) {
    if (improved_by(v, a, b)) *this = {v, a, b};
  }
};

// Columns packed as panels of 8: panel q holds columns 8q..8q+7 with
// element (row k, lane c) at [q·8n + 8k + c]. Missing columns are zero.
class PackedColumns {
 public:
  PackedColumns(const SampleMatrix& m, bool centered, unsigned threads)
      : n_(m.n()), p_(m.p()), panels_((m.p() + kPanel - 1) / kPanel),
        data_(make_buffer(panels_ * kPanel * n_)) {
    parallel_for(p_, threads, [&](std::size_t j) {
      double* dst = data_.get() + (j / kPanel) * kPanel * n_ + (j % kPanel);
      normalize_column(m.column(j), centered, j, dst, kPanel);
    });
  }

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }
  std::size_t panels() const { return panels_; }
  const double* panel(std::size_t q) const { return data_.get() + q * kPanel * n_; }

 private:
  std::size_t n_;
  std::size_t p_;
  std::size_t panels_;
  AlignedBuffer data_;
};

// acc[r][c] = <column 8a + r, column 8b + c>, summed over k in order.
inline void multiply_tile(const double* a, const double* b, std::size_t n, v8d (&acc)[8]) {
  v8d c0{}, c1{}, c2{}, c3{}, c4{}, c5{}, c6{}, c7{};
  for (std::size_t k = 0; k < n; ++k) {
    v8d bv;
    std::memcpy(&bv, b + k * kPanel, sizeof bv);
    const double* ak = a + k * kPanel;
    c0 += ak[0] * bv;
    c1 += ak[1] * bv;
    c2 += ak[2] * bv;
    c3 += ak[3] * bv;
    c4 += ak[4] * bv;
    c5 += ak[5] * bv;
    c6 += ak[6] * bv;
    c7 += ak[7] * bv;
  }
  acc[0] = c0; acc[1] = c1; acc[2] = c2; acc[3] = c3;
  acc[4] = c4; acc[5] = c5; acc[6] = c6; acc[7] = c7;
}

inline v8d vabs(v8d x) { return x < 0 ? -x : x; }

inline double hmax(v8d x) {
  double m = x[0];
  for (int l = 1; l < 8; ++l) m = std::max(m, x[l]);
  return m;
}

// Lane c of row r survives when c > r; used on tiles straddling the diagonal.
struct UpperMask {
  v8d row[8];
  UpperMask() {
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) row[r][c] = c > r ? 1.0 : 0.0;
  }
};

void scan_tile(const v8d (&acc)[8], std::size_t a, std::size_t b, std::size_t p, Best& best) {
  for (std::size_t r = 0; r < kPanel; ++r) {
    const std::size_t i = a * kPanel + r;
    if (i >= p) break;
    for (std::size_t c = 0; c < kPanel; ++c) {
      const std::size_t j = b * kPanel + c;
      if (j >= p) break;
      if (j <= i) continue;
      best.offer(snap(std::fabs(acc[r][c])), i, j);
    }
  }
}

Best reduce_block_pair(const PackedColumns& cols, std::size_t a_begin, std::size_t a_end,
                       std::size_t b_begin, std::size_t b_end) {
  static const UpperMask mask;
  Best best;
  v8d acc[8];
  for (std::size_t a = a_begin; a < a_end; ++a) {
    const double* pa = cols.panel(a);
    for (std::size_t b = std::max(a, b_begin); b < b_end; ++b) {
      multiply_tile(pa, cols.panel(b), cols.n(), acc);
      if (a == b)
        for (int r = 0; r < 8; ++r) acc[r] *= mask.row[r];
      v8d m = vabs(acc[0]);
      for (int r = 1; r < 8; ++r) {
        const v8d v = vabs(acc[r]);
        m = m > v ? m : v;
      }
      if (snap(hmax(m)) >= best.value) scan_tile(acc, a, b, cols.p(), best);
    }
  }
  return best;
}

}  // namespace

double log_one_minus_square(double L) {
  const double a = std::fabs(L);
  if (a >= 1.0) return -INFINITY;
  return a > 0.9 ? std::log((1.0 - a) * (1.0 + a)) : std::log1p(-a * a);
}

CoherenceResult coherence(const SampleMatrix& m, bool centered, const KernelOptions& options) {
  if (m.p() < 2) throw ShapeError("coherence needs p >= 2");
  if (m.n() < 2) throw ShapeError("coherence needs n >= 2");

  const PackedColumns cols(m, centered, options.threads);

  std::size_t block_panels = 0;
  if (options.block_columns > 0) {
    block_panels = (options.block_columns + kPanel - 1) / kPanel;
  } else {
    block_panels = kL2Budget / (2 * kPanel * sizeof(double) * cols.n());
    block_panels = std::clamp<std::size_t>(block_panels, 1, kMaxBlockPanels);
  }
  const std::size_t blocks = (cols.panels() + block_panels - 1) / block_panels;

  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  tasks.reserve(blocks * (blocks + 1) / 2);
  for (std::size_t bi = 0; bi < blocks; ++bi)
    for (std::size_t bj = bi; bj < blocks; ++bj) tasks.emplace_back(bi, bj);

  std::vector<Best> partial(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t t) {
    const auto [bi, bj] = tasks[t];
    const auto end = [&](std::size_t blk) {
      return std::min(cols.panels(), (blk + 1) * block_panels);
    };
    partial[t] = reduce_block_pair(cols, bi * block_panels, end(bi), bj * block_panels, end(bj));
  });

  Best best;
  for (const Best& b : partial) best.offer(b.value, b.i, b.j);

  CoherenceResult result;
  result.value = std::clamp(best.value, 0.0, 1.0);
  result.i = best.i;
  result.j = best.j;
  result.centered = centered;
  result.t_stat = log_one_minus_square(result.value);
  result.n = m.n();
  result.p = m.p();
  return result;
}

std::vector<double> pair_correlations(const SampleMatrix& m, std::span<const IndexPair> pairs,
                                      bool centered) {
  if (m.n() < 2) throw ShapeError("correlations need n >= 2");
  for (const auto& [i, j] : pairs)
    if (!(i < j && j < m.p())) throw RangeError("pair indices must satisfy i < j < p");

  std::unordered_map<std::size_t, std::vector<double>> unit;
  const auto column = [&](std::size_t j) -> const std::vector<double>& {
    auto [it, inserted] = unit.try_emplace(j);
    if (inserted) {
      it->second.resize(m.n());
      normalize_column(m.column(j), centered, j, it->second.data(), 1);
    }
    return it->second;
  };

  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const auto& x = column(i);
    const auto& y = column(j);
    double dot = 0.0;
    for (std::size_t k = 0; k < m.n(); ++k) dot += x[k] * y[k];
    out.push_back(std::copysign(snap(std::fabs(dot)), dot));
  }
  return out;
}

}  // namespace coh
