#pragma once

// Solubility of a/n = 1/x + 1/y in positive integers.

#include <cstdint>
#include <optional>
#include <span>

#include "efrac/arith.hpp"

namespace efrac {

struct ReducedInstance {
  std::uint64_t a = 0;  // a / gcd(a, n)
  std::uint64_t n = 0;  // n / gcd(a, n)

  friend bool operator==(const ReducedInstance&, const ReducedInstance&) = default;
};

/// Divides out e = gcd(a, n); a/n and the reduced fraction have the same solutions.
ReducedInstance reduce_instance(std::uint64_t n, std::uint64_t a);

enum class Solubility { Soluble, Exceptional };

struct Solution {
  std::uint64_t x = 0;
  std::uint64_t y = 0;

  friend bool operator==(const Solution&, const Solution&) = default;
};

struct SolubilityResult {
  Solubility status = Solubility::Exceptional;
  std::optional<DivisorPair> witness;
  std::optional<Solution> solution;
};

/// Searches coprime u <= v with u*v | n and a | u + v, returning the
/// lexicographically smallest such pair and the solution
/// x = a' n' u, y = a' n' v where u + v = a a' and n = u v n'.
/// Requires gcd(n, a) = 1 (DomainError otherwise). CapacityError when x or y
/// overflows 64 bits.
SolubilityResult find_witness(const FactoredInteger& n, std::uint64_t a);

struct SolutionCount {
  std::uint64_t unordered = 0;  // pairs x <= y
  std::uint64_t ordered = 0;    // 2 * unordered - #{x = y}
};

/// Counts solutions by scanning x over (n/a, 2n/a] and testing whether
/// y = n x / (a x - n) is an integer.
SolutionCount count_solutions(std::uint64_t n, std::uint64_t a);

/// True iff the equation has no solution. Reduces first; moduli 1 and 2
/// never have exceptions; any prime p | n' with p = -1 mod a' gives a
/// solution; otherwise the set of achievable ratios u/v mod a' over coprime
/// u, v with u v | n' is built prime power by prime power and tested for -1.
/// CapacityError when n > table.limit().
bool is_exceptional(std::uint64_t n, std::uint64_t a, const SpfTable& table);

/// Same decision from a known factorization of n.
bool is_exceptional(const FactoredInteger& n, std::uint64_t a);

/// Decision for the reduced instance, given the factorization of n' as
/// (prime, exponent) pairs with every prime coprime to a'. Used by the census
/// hot path; callers guarantee the precondition.
template <typename Factors>
bool is_exceptional_reduced(const Factors& factors, std::uint64_t a_reduced);

namespace detail {
bool ratio_closure_avoids_minus_one(std::span<const std::uint64_t> residues, std::span<const std::uint32_t> exponents,
                                    std::uint64_t modulus);
}  // namespace detail

template <typename Factors>
bool is_exceptional_reduced(const Factors& factors, std::uint64_t a_reduced) {
  if (a_reduced <= 2) return false;
  std::uint64_t residues[16];
  std::uint32_t exponents[16];
  std::size_t k = 0;
  for (const auto& f : factors) {
    const std::uint64_t r = f.prime % a_reduced;
    if (r == a_reduced - 1) return false;
    residues[k] = r;
    exponents[k] = f.exponent;
    ++k;
  }
  return detail::ratio_closure_avoids_minus_one({residues, k}, {exponents, k}, a_reduced);
}

}  // namespace efrac
