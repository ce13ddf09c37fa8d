#pragma once

// Command dispatch for the efrac tool. Kept separate from main() so the
// tests can drive commands without spawning processes.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "efrac/arith.hpp"
#include "efrac/census.hpp"

namespace efrac::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kCacheDirEnv = "EFRAC_CACHE_DIR";
inline constexpr const char* kCacheFileName = "spf-cache.bin";

enum ExitCode : int {
  kExitOk = 0,
  kExitDomain = 1,
  kExitCapacity = 2,
  kExitCounterexample = 3,
  kExitUsage = 64,
};

enum class Format { Json, Csv };

struct RunConfig {
  std::string subcommand;  // structure, subgroups, solve, count-solutions, classify, verify, census, fit
  std::uint64_t a = 0;
  std::uint64_t n = 0;
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> checkpoints;
  FamilyChoice family_choice = FamilyChoice::Paper;
  unsigned jobs = 1;
  std::uint64_t seed = 0x5eed'2024ull;
  std::uint64_t trials = 10'000;
  std::uint32_t m = 1;
  std::string part = "both";  // i, ii, both
  std::string lemma = "lemma24";
  std::optional<std::filesystem::path> cache_path;
  std::optional<std::filesystem::path> output_path;
  std::optional<std::filesystem::path> input_path;
  Format format = Format::Json;
  std::uint64_t phi_cap = kDefaultPhiCap;

  /// Throws DomainError on inconsistent settings.
  void validate() const;
};

/// Runs one command, writing the report to config.output_path (atomically)
/// or to `out`; diagnostics go to `err`. Returns the process exit status.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Loads the table at `path` when its header is valid and covers `limit`;
/// otherwise sieves up to `limit` and saves it. Corrupt files are rebuilt
/// with a warning on `err`. I/O failures propagate as std::system_error.
SpfTable load_or_build_cache(const std::filesystem::path& path, std::uint64_t limit, std::ostream& err);

/// Cache location from --cache or the EFRAC_CACHE_DIR environment variable.
std::optional<std::filesystem::path> resolve_cache_path(const RunConfig& config);

/// Writes through a sibling temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

Json structure_report(std::uint64_t a, std::uint64_t phi_cap, bool include_all_subgroups);
Json solve_report(std::uint64_t a, const FactoredInteger& n);
Json count_report(std::uint64_t a, std::uint64_t n);
Json classify_report(std::uint64_t a, const FactoredInteger& n, std::uint64_t phi_cap);
Json census_report(const CensusSeries& series, std::uint64_t seed);
std::string census_csv(const CensusSeries& series);
Json fit_report(const Json& census);

/// "1.x" is accepted; any other major version raises FormatError.
void check_schema_version(const Json& report);

}  // namespace efrac::cli
