#include "efrac/arith.hpp"

#include <algorithm>
#include <cmath>
#include <new>
#include <string>

#include "efrac/errors.hpp"

namespace efrac {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

constexpr std::uint64_t kSpfSegment = 1u << 18;

}  // namespace

FactoredInteger::FactoredInteger(std::uint64_t value, std::vector<PrimePower> factors)
    : value_(value), factors_(std::move(factors)) {
  if (value_ == 0) throw DomainError("factored integer must be positive");
  unsigned __int128 product = 1;
  std::uint32_t previous = 0;
  for (const auto& [p, e] : factors_) {
    if (p <= previous || e == 0) throw DomainError("factor list must have increasing primes and positive exponents");
    previous = p;
    for (std::uint32_t j = 0; j < e; ++j) {
      product *= p;
      if (product > value_) throw DomainError("factor list does not multiply to the value");
    }
  }
  if (product != value_) throw DomainError("factor list does not multiply to the value");
}

std::uint32_t FactoredInteger::big_omega() const noexcept {
  std::uint32_t total = 0;
  for (const auto& f : factors_) total += f.exponent;
  return total;
}

SpfTable::SpfTable(std::uint64_t limit) : limit_(limit) {
  if (limit < 2 || limit > kMaxLimit) {
    throw CapacityError("sieve limit " + std::to_string(limit) + " outside [2, 2^32-1]");
  }
  try {
    entries_.assign(limit - 1, 0);
  } catch (const std::bad_alloc&) {
    throw CapacityError("cannot allocate smallest-prime-factor table up to " + std::to_string(limit));
  }
  const auto root = static_cast<std::uint32_t>(isqrt(limit));
  const auto base = primes_up_to(root);
  // Mark segment by segment so the working set stays cache-sized.
  for (std::uint64_t lo = 2; lo <= limit; lo += kSpfSegment) {
    const std::uint64_t hi = std::min<std::uint64_t>(limit, lo + kSpfSegment - 1);
    for (const std::uint32_t p : base) {
      const std::uint64_t pp = std::uint64_t{p} * p;
      if (pp > hi) break;
      std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) {
        auto& slot = entries_[j - 2];
        if (slot == 0) slot = p;
      }
    }
    for (std::uint64_t n = lo; n <= hi; ++n) {
      auto& slot = entries_[n - 2];
      if (slot == 0) slot = static_cast<std::uint32_t>(n);
    }
  }
}

SpfTable SpfTable::from_entries(std::uint64_t limit, std::vector<std::uint32_t> entries) {
  if (limit < 2 || limit > kMaxLimit) throw FormatError("stored limit out of range");
  if (entries.size() != limit - 1) throw FormatError("entry count does not match limit");
  for (std::uint64_t n = 2; n <= limit; ++n) {
    const std::uint32_t p = entries[n - 2];
    if (p < 2 || p > n || n % p != 0) throw FormatError("entry for " + std::to_string(n) + " is not a divisor");
    if (p != n && (p > entries.size() + 1 || entries[p - 2] != p)) {
      throw FormatError("entry for " + std::to_string(n) + " is not prime");
    }
  }
  SpfTable table;
  table.limit_ = limit;
  table.entries_ = std::move(entries);
  return table;
}

std::uint32_t SpfTable::at(std::uint64_t n) const {
  if (n < 2) throw DomainError("smallest prime factor undefined below 2");
  if (n > limit_) throw CapacityError(std::to_string(n) + " exceeds sieve limit " + std::to_string(limit_));
  return (*this)[n];
}

SpfTable build_spf(std::uint64_t limit) { return SpfTable(limit); }

FactoredInteger factorize(std::uint64_t n, const SpfTable& table) {
  if (n == 0) throw DomainError("cannot factor 0");
  if (n > table.limit()) {
    throw CapacityError(std::to_string(n) + " exceeds sieve limit " + std::to_string(table.limit()));
  }
  std::vector<PrimePower> factors;
  std::uint64_t rest = n;
  while (rest > 1) {
    const std::uint32_t p = table[rest];
    std::uint32_t e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    factors.push_back({p, e});
  }
  return FactoredInteger(n, std::move(factors));
}

FactoredInteger factorize_trial(std::uint64_t n) {
  if (n == 0) throw DomainError("cannot factor 0");
  if (n > SpfTable::kMaxLimit) throw CapacityError("trial division limited to 32-bit values");
  std::vector<PrimePower> factors;
  std::uint64_t rest = n;
  for (std::uint64_t p = 2; p * p <= rest; p += (p == 2 ? 1 : 2)) {
    if (rest % p != 0) continue;
    std::uint32_t e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    factors.push_back({static_cast<std::uint32_t>(p), e});
  }
  if (rest > 1) factors.push_back({static_cast<std::uint32_t>(rest), 1});
  return FactoredInteger(n, std::move(factors));
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(std::size_t{limit} + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<std::uint64_t> divisors(const FactoredInteger& n) {
  std::vector<std::uint64_t> out{1};
  for (const auto& [p, e] : n.factors()) {
    const std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (std::uint32_t j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DivisorPair> coprime_divisor_pairs(const FactoredInteger& n) {
  std::vector<DivisorPair> out;
  for_each_coprime_pair(n, [&](DivisorPair pair) {
    out.push_back(pair);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) noexcept {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t inverse_mod(std::uint64_t x, std::uint64_t m) {
  if (m == 1) return 0;
  if (m > (std::uint64_t{1} << 62)) throw CapacityError("inverse_mod modulus too large");
  std::int64_t old_r = static_cast<std::int64_t>(x % m), r = static_cast<std::int64_t>(m);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    const std::int64_t tr = old_r - q * r;
    old_r = r;
    r = tr;
    const std::int64_t ts = old_s - q * s;
    old_s = s;
    s = ts;
  }
  if (old_r != 1) throw DomainError(std::to_string(x) + " is not invertible modulo " + std::to_string(m));
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((old_s % mm) + mm) % mm);
}

FactoredInteger FactorBlock::factored(std::size_t i) const {
  std::vector<PrimePower> out;
  for (const auto& s : factors(i)) out.push_back({s.prime, s.exponent});
  return FactoredInteger(lo_ + i, std::move(out));
}

SegmentedFactorizer::SegmentedFactorizer(std::uint64_t limit) : limit_(limit) {
  if (limit < 1 || limit > SpfTable::kMaxLimit) {
    throw CapacityError("segmented factorization limit " + std::to_string(limit) + " outside [1, 2^32-1]");
  }
  base_primes_ = primes_up_to(static_cast<std::uint32_t>(isqrt(limit)));
}

void SegmentedFactorizer::fill(std::uint64_t lo, std::uint64_t hi, FactorBlock& block) const {
  if (lo < 1 || lo >= hi || hi > limit_ + 1) throw DomainError("invalid factorization block");
  const std::size_t size = hi - lo;
  block.lo_ = lo;
  block.counts_.assign(size, 0);
  block.slots_.resize(size * FactorBlock::kMaxDistinct);
  block.remainder_.resize(size);
  for (std::size_t i = 0; i < size; ++i) block.remainder_[i] = static_cast<std::uint32_t>(lo + i);

  for (const std::uint32_t p : base_primes_) {
    if (std::uint64_t{p} * p >= hi) break;
    const std::uint64_t first = (lo + p - 1) / p * p;
    for (std::uint64_t j = first; j < hi; j += p) {
      const std::size_t i = j - lo;
      std::uint32_t rest = block.remainder_[i] / p;
      std::uint32_t e = 1;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      block.remainder_[i] = rest;
      block.slots_[i * FactorBlock::kMaxDistinct + block.counts_[i]++] = {p, e};
    }
  }
  for (std::size_t i = 0; i < size; ++i) {
    if (block.remainder_[i] > 1) {
      block.slots_[i * FactorBlock::kMaxDistinct + block.counts_[i]++] = {block.remainder_[i], 1};
    }
  }
}

}  // namespace efrac
