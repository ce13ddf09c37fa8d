#include "efrac/solubility.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "efrac/errors.hpp"

namespace efrac {

ReducedInstance reduce_instance(std::uint64_t n, std::uint64_t a) {
  if (n == 0 || a == 0) throw DomainError("reduce_instance needs positive n and a");
  const std::uint64_t e = gcd_u64(a, n);
  return {a / e, n / e};
}

SolubilityResult find_witness(const FactoredInteger& n, std::uint64_t a) {
  if (a == 0) throw DomainError("modulus must be positive");
  if (gcd_u64(n.value(), a) != 1) {
    throw DomainError("find_witness requires gcd(n, a) = 1; got n = " + std::to_string(n.value()) +
                      ", a = " + std::to_string(a));
  }
  std::optional<DivisorPair> best;
  for_each_coprime_pair(n, [&](DivisorPair p) {
    if ((p.u % a + p.v % a) % a == 0 && (!best || p < *best)) best = p;
    return true;
  });
  SolubilityResult result;
  if (!best) return result;
  const std::uint64_t a_prime = (best->u + best->v) / a;
  const std::uint64_t n_prime = n.value() / (best->u * best->v);
  const unsigned __int128 x = static_cast<unsigned __int128>(a_prime) * n_prime * best->u;
  const unsigned __int128 y = static_cast<unsigned __int128>(a_prime) * n_prime * best->v;
  if (y > std::numeric_limits<std::uint64_t>::max()) throw CapacityError("solution exceeds 64-bit range");
  result.status = Solubility::Soluble;
  result.witness = best;
  result.solution = Solution{static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y)};
  return result;
}

SolutionCount count_solutions(std::uint64_t n, std::uint64_t a) {
  if (n == 0 || a == 0) throw DomainError("count_solutions needs positive n and a");
  if (n > (std::numeric_limits<std::uint64_t>::max() / 2) / a) throw CapacityError("a * 2n exceeds 64-bit range");
  SolutionCount count;
  const std::uint64_t first = n / a + 1;
  const std::uint64_t last = 2 * n / a;
  // k = a x - n runs over (0, n]; y = n x / k.
  for (std::uint64_t x = first; x <= last; ++x) {
    const std::uint64_t k = a * x - n;
    const auto nx = static_cast<unsigned __int128>(n) * x;
    const bool integral = nx <= std::numeric_limits<std::uint64_t>::max()
                              ? static_cast<std::uint64_t>(nx) % k == 0
                              : nx % k == 0;
    if (!integral) continue;
    ++count.unordered;
    count.ordered += (nx / k == x) ? 1 : 2;
  }
  return count;
}

namespace detail {

bool ratio_closure_avoids_minus_one(std::span<const std::uint64_t> residues, std::span<const std::uint32_t> exponents,
                                    std::uint64_t modulus) {
  thread_local std::vector<std::uint64_t> reach;
  thread_local std::vector<std::uint64_t> grown;
  const std::uint64_t minus_one = modulus - 1;
  reach.assign(1, 1 % modulus);
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const std::uint64_t r = residues[i];
    const std::uint64_t r_inv = inverse_mod(r, modulus);
    grown = reach;
    for (const std::uint64_t base : reach) {
      std::uint64_t up = base, down = base;
      for (std::uint32_t j = 0; j < exponents[i]; ++j) {
        up = mul_mod(up, r, modulus);
        down = mul_mod(down, r_inv, modulus);
        if (up == minus_one || down == minus_one) return false;
        grown.push_back(up);
        grown.push_back(down);
      }
    }
    std::sort(grown.begin(), grown.end());
    grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
    reach.swap(grown);
  }
  return true;
}

}  // namespace detail

bool is_exceptional(const FactoredInteger& n, std::uint64_t a) {
  if (a == 0) throw DomainError("modulus must be positive");
  const auto reduced = reduce_instance(n.value(), a);
  if (reduced.a <= 2) return false;
  // Exponent of p in n' is v_p(n) - min(v_p(n), v_p(a)); primes of a'
  // never survive since gcd(a', n') = 1.
  PrimePower kept[16];
  std::size_t k = 0;
  for (const auto& [p, e] : n.factors()) {
    std::uint32_t va = 0;
    for (std::uint64_t rest = a; rest % p == 0; rest /= p) ++va;
    const std::uint32_t left = e - std::min(e, va);
    if (left > 0) kept[k++] = {p, left};
  }
  return is_exceptional_reduced(std::span<const PrimePower>(kept, k), reduced.a);
}

bool is_exceptional(std::uint64_t n, std::uint64_t a, const SpfTable& table) {
  if (a == 0 || n == 0) throw DomainError("is_exceptional needs positive n and a");
  if (n > table.limit()) {
    throw CapacityError(std::to_string(n) + " exceeds sieve limit " + std::to_string(table.limit()));
  }
  if (a <= 2) return false;
  return is_exceptional(factorize(n, table), a);
}

}  // namespace efrac
