#pragma once

#include <filesystem>
#include <iosfwd>

#include "coh/sampler.hpp"

namespace coh::io {

/// Binary layout, little-endian throughout:
///
///   offset  size  field
///        0     4  magic "COHM"
///        4     4  u32 n (rows)
///        8     4  u32 p (columns)
///       12     4  u32 reserved, written as 0
///       16     8  u64 seed
///       24  8·np  f64 entries, column-major
inline constexpr std::size_t kHeaderBytes = 24;
inline constexpr char kMagic[4] = {'C', 'O', 'H', 'M'};

void write_binary(std::ostream& out, const SampleMatrix& m);
void write_binary(const std::filesystem::path& path, const SampleMatrix& m);

/// CSV: optional '#' comment lines (the writer emits "# n=.. p=.. seed=..")
/// followed by n lines of p comma-separated values.
void write_csv(std::ostream& out, const SampleMatrix& m);
void write_csv(const std::filesystem::path& path, const SampleMatrix& m);

SampleMatrix read_binary(std::istream& in);
SampleMatrix read_csv(std::istream& in);

/// Reads either format, choosing binary when the file starts with the magic.
SampleMatrix read_matrix(const std::filesystem::path& path);

}  // namespace coh::io
