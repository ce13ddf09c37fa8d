#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "efrac/errors.hpp"
#include "efrac/spf_cache.hpp"

using namespace efrac;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  const auto dir = fs::temp_directory_path() / "efrac-unit";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("spf_cache") {
  TEST_CASE("round trip keeps every entry") {
    const auto path = temp_file("roundtrip.bin");
    const SpfTable t(123'457);
    write_spf_cache(path, t);
    CHECK(fs::file_size(path) == kSpfCacheHeaderSize + 4 * (123'457 - 1));
    CHECK(peek_spf_cache_limit(path) == 123'457);
    const auto back = read_spf_cache(path);
    CHECK(back.limit() == t.limit());
    CHECK(std::equal(back.entries().begin(), back.entries().end(), t.entries().begin(), t.entries().end()));
  }

  TEST_CASE("corrupt files raise FormatError") {
    const auto path = temp_file("corrupt.bin");
    write_spf_cache(path, SpfTable(1000));
    fs::resize_file(path, fs::file_size(path) - 4);
    CHECK_THROWS_AS(read_spf_cache(path), FormatError);
    CHECK_THROWS_AS(peek_spf_cache_limit(path), FormatError);

    {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << "NOPE";
    }
    CHECK_THROWS_AS(read_spf_cache(path), FormatError);

    write_spf_cache(path, SpfTable(1000));
    {
      std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
      io.seekp(4);
      io.put(static_cast<char>(9));
    }
    CHECK_THROWS_AS(read_spf_cache(path), FormatError);
  }

  TEST_CASE("tampered entries are rejected") {
    const auto path = temp_file("tampered.bin");
    write_spf_cache(path, SpfTable(1000));
    {
      std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
      io.seekp(kSpfCacheHeaderSize + 4 * (9 - 2));  // entry for 9
      const char bad[4] = {2, 0, 0, 0};
      io.write(bad, 4);
    }
    CHECK_THROWS_AS(read_spf_cache(path), FormatError);
  }

  TEST_CASE("missing file is a system error") {
    CHECK_THROWS_AS(read_spf_cache(temp_file("does-not-exist.bin")), std::system_error);
  }
}
