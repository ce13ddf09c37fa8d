#include "efrac/spf_cache.hpp"

#include <array>
#include <cerrno>
#include <fstream>
#include <system_error>
#include <unistd.h>

#include "efrac/errors.hpp"

namespace efrac {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'P', 'F', 'C'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(const unsigned char* bytes) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno ? errno : ENOENT, std::generic_category(), "cannot open " + path.string());
  return in;
}

std::uint64_t read_header(std::istream& in, std::uint64_t file_size) {
  std::array<unsigned char, kSpfCacheHeaderSize> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) throw FormatError("truncated cache header");
  for (std::size_t i = 0; i < kMagic.size(); ++i) {
    if (header[i] != static_cast<unsigned char>(kMagic[i])) throw FormatError("bad cache magic");
  }
  if (header[4] != kSpfCacheVersion) throw FormatError("unsupported cache version " + std::to_string(header[4]));
  const auto limit = get_le<std::uint64_t>(header.data() + 5);
  if (limit < 2 || limit > SpfTable::kMaxLimit) throw FormatError("cache limit out of range");
  if (file_size != kSpfCacheHeaderSize + 4 * (limit - 1)) throw FormatError("cache length does not match limit");
  return limit;
}

}  // namespace

void write_spf_cache(const std::filesystem::path& path, const SpfTable& table) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno ? errno : EIO, std::generic_category(), "cannot create " + tmp.string());
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint8_t>(out, kSpfCacheVersion);
    put_le<std::uint64_t>(out, table.limit());
    for (const std::uint32_t e : table.entries()) put_le<std::uint32_t>(out, e);
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::system_error(EIO, std::generic_category(), "write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t peek_spf_cache_limit(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_header(in, std::filesystem::file_size(path));
}

SpfTable read_spf_cache(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  const std::uint64_t limit = read_header(in, std::filesystem::file_size(path));
  std::vector<unsigned char> raw(4 * (limit - 1));
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
    throw FormatError("truncated cache body");
  }
  std::vector<std::uint32_t> entries(limit - 1);
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i] = get_le<std::uint32_t>(raw.data() + 4 * i);
  return SpfTable::from_entries(limit, std::move(entries));
}

}  // namespace efrac
