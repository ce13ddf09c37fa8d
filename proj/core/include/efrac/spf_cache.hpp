#pragma once

// On-disk smallest-prime-factor cache.
//
// Layout (all integers little-endian):
//   bytes 0..3   magic "SPFC"
//   byte  4      version (1)
//   bytes 5..12  limit, u64
//   then (limit - 1) u32 entries for n = 2..limit

#include <cstdint>
#include <filesystem>

#include "efrac/arith.hpp"

namespace efrac {

inline constexpr std::uint8_t kSpfCacheVersion = 1;
inline constexpr std::size_t kSpfCacheHeaderSize = 13;

/// Writes via a temporary file and rename. Throws std::system_error on I/O failure.
void write_spf_cache(const std::filesystem::path& path, const SpfTable& table);

/// Throws FormatError on bad magic, version, or length; std::system_error when
/// the file cannot be opened.
SpfTable read_spf_cache(const std::filesystem::path& path);

/// Reads only the header and returns the stored limit (FormatError if invalid).
std::uint64_t peek_spf_cache_limit(const std::filesystem::path& path);

}  // namespace efrac
