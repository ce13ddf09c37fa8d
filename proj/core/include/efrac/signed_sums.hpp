#pragma once

// Signed subset sums in Z/2^m Z.
//
// For a sequence e_1..e_t of nonzero residues, S is the set of all
// sum(delta_j * e_j) with delta_j in {-1, 0, 1}. Two facts are checked here
// by exhaustion or sampling:
//   (i)  t >= 2^(m-1) forces 2^(m-1) into S;
//   (ii) for t = 2^(m-1) - 1, 2^(m-1) is missing from S exactly when every
//        e_j is +e or -e for one odd e.

#include <cstdint>
#include <optional>
#include <vector>

namespace efrac {

struct SignedSumInstance {
  std::uint32_t m = 1;
  std::vector<std::uint32_t> elements;

  /// Throws DomainError when m is 0 or above 30, or an element is 0 mod 2^m.
  void validate() const;
  std::uint64_t modulus() const noexcept { return std::uint64_t{1} << m; }
};

/// Achievable sums as a membership vector of length 2^m.
struct SumSet {
  std::uint32_t m = 1;
  std::vector<bool> achievable;

  bool contains(std::uint64_t residue) const { return achievable[residue % achievable.size()]; }
  std::vector<std::uint32_t> members() const;
  friend bool operator==(const SumSet&, const SumSet&) = default;
};

inline constexpr std::size_t kSignedSumEnumerationGuard = 24;

/// Enumerates all 3^t sign vectors; CapacityError for t > 24.
SumSet signed_sum_set(const SignedSumInstance& inst);

/// Same set via the residue-set recursion S <- S u (S + e) u (S - e).
SumSet signed_sum_set_dp(const SignedSumInstance& inst);

/// Whether 2^(m-1) is achievable, via the recursion (no 3^t blowup).
bool contains_half(const SignedSumInstance& inst);

/// e_j = +-e (mod 2^m) for a single odd e. Vacuously true for an empty sequence.
bool is_plus_minus_odd_pattern(const SignedSumInstance& inst);

enum class VerificationMode { Exhaustive, Randomized };

struct VerificationConfig {
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0x5eed'2024ull;
};

struct VerificationReport {
  std::uint32_t m = 1;
  VerificationMode mode = VerificationMode::Exhaustive;
  std::uint64_t sequence_length = 0;
  std::uint64_t sequences_checked = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<std::vector<std::uint32_t>> counterexample;
  /// Smallest t such that every length-t sequence contains 2^(m-1);
  /// computed only in exhaustive mode.
  std::optional<std::uint64_t> minimal_forcing_length;
  /// (2^m - 1)(2^(m-1) - 1) + 1
  std::uint64_t pigeonhole_bound = 0;

  bool verified() const noexcept { return !counterexample.has_value(); }
};

inline constexpr std::uint32_t kExhaustiveMaxM = 3;
inline constexpr std::uint32_t kRandomizedMaxM = 5;

/// Part (i). Exhaustive for m <= 3, seeded sampling for m in {4, 5};
/// DomainError otherwise.
VerificationReport verify_lemma24_i(std::uint32_t m, const VerificationConfig& config = {});

/// Part (ii), both directions. Same modes as part (i).
VerificationReport verify_lemma24_ii(std::uint32_t m, const VerificationConfig& config = {});

std::uint64_t pigeonhole_forcing_bound(std::uint32_t m);

}  // namespace efrac
