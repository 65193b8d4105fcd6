#include "coh/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "coh/error.hpp"

namespace coh::io {

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw IoError("truncated matrix header");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

std::uint64_t to_bits(double v) { return std::bit_cast<std::uint64_t>(v); }
double from_bits(std::uint64_t b) { return std::bit_cast<double>(b); }

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

void write_binary(std::ostream& out, const SampleMatrix& m) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (m.n() > kMax || m.p() > kMax) throw ShapeError("matrix too large for the binary format");
  out.write(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.n()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.p()));
  put_le<std::uint32_t>(out, 0);
  put_le<std::uint64_t>(out, m.seed());
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(m.data().data()),
              static_cast<std::streamsize>(m.data().size() * sizeof(double)));
  } else {
    for (double v : m.data()) put_le<std::uint64_t>(out, to_bits(v));
  }
  if (!out) throw IoError("failed writing binary matrix");
}

void write_binary(const std::filesystem::path& path, const SampleMatrix& m) {
  auto out = open_out(path, std::ios::binary);
  write_binary(out, m);
}

void write_csv(std::ostream& out, const SampleMatrix& m) {
  out << "# n=" << m.n() << " p=" << m.p() << " seed=" << m.seed() << '\n';
  std::array<char, 32> buf;
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t j = 0; j < m.p(); ++j) {
      if (j) out << ',';
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), m(i, j));
      out.write(buf.data(), res.ptr - buf.data());
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing csv matrix");
}

void write_csv(const std::filesystem::path& path, const SampleMatrix& m) {
  auto out = open_out(path, std::ios::out);
  write_csv(out, m);
}

SampleMatrix read_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("missing COHM magic");
  const auto n = get_le<std::uint32_t>(in);
  const auto p = get_le<std::uint32_t>(in);
  get_le<std::uint32_t>(in);
  const auto seed = get_le<std::uint64_t>(in);
  std::vector<double> data(static_cast<std::size_t>(n) * p);
  if constexpr (std::endian::native == std::endian::little) {
    if (!in.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(data.size() * sizeof(double))))
      throw IoError("truncated matrix data");
  } else {
    for (double& v : data) v = from_bits(get_le<std::uint64_t>(in));
  }
  return SampleMatrix(n, p, std::move(data), seed);
}

SampleMatrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::uint64_t seed = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (const auto pos = line.find("seed="); pos != std::string::npos)
        std::from_chars(line.data() + pos + 5, line.data() + line.size(), seed);
      continue;
    }
    std::vector<double> row;
    const char* cur = line.data();
    const char* end = line.data() + line.size();
    while (cur < end) {
      while (cur < end && (*cur == ' ' || *cur == '\t')) ++cur;
      double v = 0.0;
      const auto res = std::from_chars(cur, end, v);
      if (res.ec != std::errc{}) throw IoError("bad number in csv line: " + line);
      row.push_back(v);
      cur = res.ptr;
      while (cur < end && (*cur == ' ' || *cur == '\t')) ++cur;
      if (cur < end) {
        if (*cur != ',') throw IoError("expected ',' in csv line: " + line);
        ++cur;
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("csv rows have different lengths");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("csv matrix is empty");
  const std::size_t n = rows.size();
  const std::size_t p = rows.front().size();
  std::vector<double> data(n * p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) data[j * n + i] = rows[i][j];
  return SampleMatrix(n, p, std::move(data), seed);
}

SampleMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  char magic[4] = {};
  in.read(magic, 4);
  const bool binary = in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0;
  in.clear();
  in.seekg(0);
  return binary ? read_binary(in) : read_csv(in);
}

}  // namespace coh::io
