#pragma once

// Prime sieving, factorization and divisor enumeration.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace efrac {

struct PrimePower {
  std::uint32_t prime = 0;
  std::uint32_t exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer together with its prime factorization.
/// Primes are strictly increasing and every exponent is at least 1;
/// the value 1 has an empty factor list.
class FactoredInteger {
 public:
  FactoredInteger() = default;

  /// Validates the factor list against `value`; throws DomainError on mismatch.
  FactoredInteger(std::uint64_t value, std::vector<PrimePower> factors);

  std::uint64_t value() const noexcept { return value_; }
  std::span<const PrimePower> factors() const noexcept { return factors_; }

  /// Number of prime factors counted with multiplicity.
  std::uint32_t big_omega() const noexcept;

  friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;

 private:
  std::uint64_t value_ = 1;
  std::vector<PrimePower> factors_;
};

/// Smallest-prime-factor table for 2..limit. Immutable after construction.
class SpfTable {
 public:
  static constexpr std::uint64_t kMaxLimit = 0xFFFFFFFFull;

  /// Sieves the table; throws CapacityError unless 2 <= limit <= 2^32 - 1.
  explicit SpfTable(std::uint64_t limit);

  /// Adopts entries for n = 2..limit (as stored in a cache file) after
  /// checking every entry is a prime-looking divisor; throws FormatError
  /// on inconsistent data.
  static SpfTable from_entries(std::uint64_t limit, std::vector<std::uint32_t> entries);

  std::uint64_t limit() const noexcept { return limit_; }

  /// Smallest prime factor of n, 2 <= n <= limit (unchecked).
  std::uint32_t operator[](std::uint64_t n) const noexcept { return entries_[n - 2]; }

  /// Checked access; throws CapacityError when n > limit, DomainError when n < 2.
  std::uint32_t at(std::uint64_t n) const;

  bool is_prime(std::uint64_t n) const noexcept { return n >= 2 && n <= limit_ && (*this)[n] == n; }

  /// Entries for n = 2..limit, in order.
  std::span<const std::uint32_t> entries() const noexcept { return entries_; }

 private:
  SpfTable() = default;

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> entries_;
};

SpfTable build_spf(std::uint64_t limit);

/// Factorization by table lookup; throws CapacityError when n > table.limit().
FactoredInteger factorize(std::uint64_t n, const SpfTable& table);

/// Factorization by trial division, for small one-off values such as a modulus.
FactoredInteger factorize_trial(std::uint64_t n);

/// All primes p <= limit (plain sieve of Eratosthenes).
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

/// All divisors, ascending.
std::vector<std::uint64_t> divisors(const FactoredInteger& n);

struct DivisorPair {
  std::uint64_t u = 1;
  std::uint64_t v = 1;

  friend auto operator<=>(const DivisorPair&, const DivisorPair&) = default;
};

/// Visits each unordered pair {u, v} (reported with u <= v) of coprime
/// integers with u*v | n exactly once. Each prime power of n goes wholly to
/// u, wholly to v, or is left out. Visiting order is the lexicographic order
/// of the per-prime assignment digits, where digit 0 omits the prime, digits
/// 1..e give p^digit to u and e+1..2e give p^(digit-e) to v.
/// The visitor returns false to stop early.
template <typename Visitor>
void for_each_coprime_pair(const FactoredInteger& n, Visitor&& visit);

/// All coprime pairs sorted by (u, v); includes (1, 1).
std::vector<DivisorPair> coprime_divisor_pairs(const FactoredInteger& n);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) noexcept;
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept;

/// Inverse of x modulo m; throws DomainError when gcd(x, m) != 1.
std::uint64_t inverse_mod(std::uint64_t x, std::uint64_t m);

/// Factor lists for a contiguous block [lo, lo + size) produced by a
/// segmented sieve. No full smallest-prime-factor array is kept resident.
class FactorBlock {
 public:
  // 2*3*5*...*23 < 2^32 < 2*3*5*...*29
  static constexpr std::size_t kMaxDistinct = 9;

  struct Slot {
    std::uint32_t prime;
    std::uint32_t exponent;
  };

  std::uint64_t lo() const noexcept { return lo_; }
  std::size_t size() const noexcept { return counts_.size(); }

  /// Factors of lo + i, primes ascending.
  std::span<const Slot> factors(std::size_t i) const noexcept {
    return {slots_.data() + i * kMaxDistinct, counts_[i]};
  }

  FactoredInteger factored(std::size_t i) const;

 private:
  friend class SegmentedFactorizer;

  std::uint64_t lo_ = 0;
  std::vector<std::uint8_t> counts_;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> remainder_;
};

/// Produces FactorBlocks covering 1..limit using base primes <= sqrt(limit).
/// Thread-safe for concurrent fill() calls with distinct blocks.
class SegmentedFactorizer {
 public:
  explicit SegmentedFactorizer(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }

  /// Factors every integer in [lo, hi); requires 1 <= lo < hi <= limit + 1.
  void fill(std::uint64_t lo, std::uint64_t hi, FactorBlock& block) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> base_primes_;
};

// ---------------------------------------------------------------------------

template <typename Visitor>
void for_each_coprime_pair(const FactoredInteger& n, Visitor&& visit) {
  const auto factors = n.factors();
  const std::size_t k = factors.size();
  std::array<std::uint32_t, 16> digit{};
  std::array<std::uint64_t, 16> u_part{};
  std::array<std::uint64_t, 16> v_part{};
  // digit[i] runs 0..2e_i; u_part/v_part hold prefix products up to i.
  auto emit = [&](std::uint64_t u, std::uint64_t v) -> bool {
    if (u <= v) return visit(DivisorPair{u, v});
    return true;
  };
  if (k == 0) {
    emit(1, 1);
    return;
  }
  auto power = [](std::uint64_t p, std::uint32_t e) {
    std::uint64_t r = 1;
    for (std::uint32_t j = 0; j < e; ++j) r *= p;
    return r;
  };
  auto apply = [&](std::size_t i) {
    const std::uint64_t pu = i == 0 ? 1 : u_part[i - 1];
    const std::uint64_t pv = i == 0 ? 1 : v_part[i - 1];
    const auto [p, e] = factors[i];
    const std::uint32_t d = digit[i];
    if (d == 0) {
      u_part[i] = pu;
      v_part[i] = pv;
    } else if (d <= e) {
      u_part[i] = pu * power(p, d);
      v_part[i] = pv;
    } else {
      u_part[i] = pu;
      v_part[i] = pv * power(p, d - e);
    }
  };
  for (std::size_t i = 0; i < k; ++i) apply(i);
  while (true) {
    if (!emit(u_part[k - 1], v_part[k - 1])) return;
    // odometer increment, last digit fastest
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (digit[i] < 2 * factors[i].exponent) {
        ++digit[i];
        for (std::size_t j = i; j < k; ++j) apply(j);
        break;
      }
      digit[i] = 0;
      if (i == 0) return;
    }
  }
}

}  // namespace efrac
