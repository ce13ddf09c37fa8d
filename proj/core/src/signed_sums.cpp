#include "efrac/signed_sums.hpp"

#include <random>
#include <string>

#include "efrac/errors.hpp"

namespace efrac {

namespace {

constexpr std::uint32_t kMaxM = 30;

// Calls visit(sequence) for every sequence of the given length over
// 1..2^m - 1 in lexicographic order; stops when visit returns false.
template <typename Visit>
std::uint64_t for_each_sequence(std::uint32_t m, std::uint64_t length, Visit&& visit) {
  const std::uint32_t top = (1u << m) - 1;
  std::vector<std::uint32_t> seq(length, 1);
  std::uint64_t visited = 0;
  while (true) {
    ++visited;
    if (!visit(seq)) return visited;
    std::size_t i = seq.size();
    while (i > 0 && seq[i - 1] == top) seq[--i] = 1;
    if (i == 0) return visited;
    ++seq[i - 1];
  }
}

SignedSumInstance make_instance(std::uint32_t m, std::vector<std::uint32_t> elements) {
  return SignedSumInstance{m, std::move(elements)};
}

void check_verifiable(std::uint32_t m) {
  if (m < 1 || m > kRandomizedMaxM) {
    throw DomainError("signed-sum verification supports 1 <= m <= " + std::to_string(kRandomizedMaxM));
  }
}

// Uniform nonzero sequences interleaved with near-pattern ones (all +-e,
// optionally with one element perturbed); the latter sit on the boundary
// both statements are about.
class SequenceSampler {
 public:
  SequenceSampler(std::uint32_t m, std::uint64_t seed) : m_(m), rng_(seed) {}

  std::vector<std::uint32_t> next(std::uint64_t length, std::uint64_t trial) {
    const std::uint32_t modulus = 1u << m_;
    std::uniform_int_distribution<std::uint32_t> nonzero(1, modulus - 1);
    std::vector<std::uint32_t> seq(length);
    if (trial % 2 == 0) {
      for (auto& x : seq) x = nonzero(rng_);
      return seq;
    }
    std::uniform_int_distribution<std::uint32_t> odd_half(0, modulus / 2 - 1);
    const std::uint32_t e = 2 * odd_half(rng_) + 1;
    std::bernoulli_distribution coin(0.5);
    for (auto& x : seq) x = coin(rng_) ? e : modulus - e;
    if (length > 0 && coin(rng_)) {
      std::uniform_int_distribution<std::uint64_t> where(0, length - 1);
      seq[where(rng_)] = nonzero(rng_);
    }
    return seq;
  }

 private:
  std::uint32_t m_;
  std::mt19937_64 rng_;
};

}  // namespace

void SignedSumInstance::validate() const {
  if (m < 1 || m > kMaxM) throw DomainError("m must lie in [1, 30]");
  const std::uint64_t mod = modulus();
  for (const auto e : elements) {
    if (e % mod == 0) throw DomainError("signed-sum elements must be nonzero mod 2^m");
  }
}

std::vector<std::uint32_t> SumSet::members() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t r = 0; r < achievable.size(); ++r) {
    if (achievable[r]) out.push_back(r);
  }
  return out;
}

SumSet signed_sum_set(const SignedSumInstance& inst) {
  inst.validate();
  if (inst.elements.size() > kSignedSumEnumerationGuard) {
    throw CapacityError("3^t enumeration limited to t <= " + std::to_string(kSignedSumEnumerationGuard));
  }
  const std::uint64_t mod = inst.modulus();
  SumSet out{inst.m, std::vector<bool>(mod, false)};
  const std::size_t t = inst.elements.size();
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < t; ++j) total *= 3;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < t; ++j) {
      const int d = static_cast<int>(c % 3) - 1;
      c /= 3;
      sum += d * static_cast<std::int64_t>(inst.elements[j] % mod);
    }
    const auto m64 = static_cast<std::int64_t>(mod);
    out.achievable[static_cast<std::size_t>(((sum % m64) + m64) % m64)] = true;
  }
  return out;
}

SumSet signed_sum_set_dp(const SignedSumInstance& inst) {
  inst.validate();
  const std::uint64_t mod = inst.modulus();
  SumSet out{inst.m, std::vector<bool>(mod, false)};
  out.achievable[0] = true;
  std::vector<bool> next;
  for (const auto raw : inst.elements) {
    const std::uint64_t e = raw % mod;
    next = out.achievable;
    for (std::uint64_t s = 0; s < mod; ++s) {
      if (!out.achievable[s]) continue;
      next[(s + e) % mod] = true;
      next[(s + mod - e) % mod] = true;
    }
    out.achievable.swap(next);
  }
  return out;
}

bool contains_half(const SignedSumInstance& inst) {
  return signed_sum_set_dp(inst).contains(inst.modulus() / 2);
}

bool is_plus_minus_odd_pattern(const SignedSumInstance& inst) {
  if (inst.elements.empty()) return true;
  const std::uint64_t mod = inst.modulus();
  const std::uint64_t e = inst.elements.front() % mod;
  if (e % 2 == 0) return false;
  for (const auto raw : inst.elements) {
    const std::uint64_t x = raw % mod;
    if (x != e && x != mod - e) return false;
  }
  return true;
}

std::uint64_t pigeonhole_forcing_bound(std::uint32_t m) {
  const std::uint64_t full = std::uint64_t{1} << m;
  return (full - 1) * (full / 2 - 1) + 1;
}

VerificationReport verify_lemma24_i(std::uint32_t m, const VerificationConfig& config) {
  check_verifiable(m);
  VerificationReport report;
  report.m = m;
  report.sequence_length = std::uint64_t{1} << (m - 1);
  report.pigeonhole_bound = pigeonhole_forcing_bound(m);
  auto violates = [m](const std::vector<std::uint32_t>& seq) { return !contains_half(make_instance(m, seq)); };

  if (m <= kExhaustiveMaxM) {
    report.mode = VerificationMode::Exhaustive;
    report.sequences_checked = for_each_sequence(m, report.sequence_length, [&](const auto& seq) {
      if (violates(seq)) {
        report.counterexample = seq;
        return false;
      }
      return true;
    });
    // Appending never shrinks S, so the first forced length is the minimum.
    for (std::uint64_t t = 0; t <= report.sequence_length; ++t) {
      bool forced = true;
      for_each_sequence(m, t, [&](const auto& seq) {
        if (violates(seq)) forced = false;
        return forced;
      });
      if (forced) {
        report.minimal_forcing_length = t;
        break;
      }
    }
    return report;
  }

  report.mode = VerificationMode::Randomized;
  report.trials = config.trials;
  report.seed = config.seed;
  SequenceSampler sampler(m, config.seed);
  for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
    auto seq = sampler.next(report.sequence_length, trial);
    ++report.sequences_checked;
    if (violates(seq)) {
      report.counterexample = std::move(seq);
      break;
    }
  }
  return report;
}

VerificationReport verify_lemma24_ii(std::uint32_t m, const VerificationConfig& config) {
  check_verifiable(m);
  VerificationReport report;
  report.m = m;
  report.sequence_length = (std::uint64_t{1} << (m - 1)) - 1;
  report.pigeonhole_bound = pigeonhole_forcing_bound(m);
  auto violates = [m](const std::vector<std::uint32_t>& seq) {
    const auto inst = make_instance(m, seq);
    return !contains_half(inst) != is_plus_minus_odd_pattern(inst);
  };

  if (m <= kExhaustiveMaxM) {
    report.mode = VerificationMode::Exhaustive;
    report.sequences_checked = for_each_sequence(m, report.sequence_length, [&](const auto& seq) {
      if (violates(seq)) {
        report.counterexample = seq;
        return false;
      }
      return true;
    });
    return report;
  }

  report.mode = VerificationMode::Randomized;
  report.trials = config.trials;
  report.seed = config.seed;
  SequenceSampler sampler(m, config.seed);
  for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
    auto seq = sampler.next(report.sequence_length, trial);
    ++report.sequences_checked;
    if (violates(seq)) {
      report.counterexample = std::move(seq);
      break;
    }
  }
  return report;
}

}  // namespace efrac
