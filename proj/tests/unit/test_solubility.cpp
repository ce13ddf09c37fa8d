#include <doctest.h>

#include <numeric>

#include "efrac/errors.hpp"
#include "efrac/solubility.hpp"
#include "oracles.hpp"

using namespace efrac;

TEST_SUITE("solubility") {
  TEST_CASE("reduce_instance examples") {
    CHECK(reduce_instance(9, 6) == ReducedInstance{2, 3});
    CHECK(reduce_instance(7, 3) == ReducedInstance{3, 7});
    CHECK(reduce_instance(10, 5) == ReducedInstance{1, 2});
    CHECK_THROWS_AS(reduce_instance(0, 3), DomainError);
  }

  TEST_CASE("find_witness examples") {
    auto r = find_witness(factorize_trial(5), 3);
    CHECK(r.status == Solubility::Soluble);
    CHECK(r.witness == DivisorPair{1, 5});
    CHECK(r.solution == Solution{2, 10});

    r = find_witness(factorize_trial(7), 3);
    CHECK(r.status == Solubility::Exceptional);
    CHECK_FALSE(r.witness.has_value());
    CHECK_FALSE(r.solution.has_value());

    r = find_witness(factorize_trial(4), 5);
    CHECK(r.status == Solubility::Soluble);
    CHECK(r.witness == DivisorPair{1, 4});
    CHECK(r.solution == Solution{1, 4});

    CHECK_THROWS_AS(find_witness(factorize_trial(6), 3), DomainError);
  }

  TEST_CASE("witness solutions satisfy the equation") {
    for (std::uint64_t a = 1; a <= 40; ++a) {
      for (std::uint64_t n = 1; n <= 1500; ++n) {
        if (std::gcd(n, a) != 1) continue;
        const auto r = find_witness(factorize_trial(n), a);
        if (r.status == Solubility::Exceptional) continue;
        const auto [u, v] = *r.witness;
        REQUIRE(u <= v);
        REQUIRE(std::gcd(u, v) == 1);
        REQUIRE(n % (u * v) == 0);
        REQUIRE((u + v) % a == 0);
        const auto [x, y] = *r.solution;
        // a x y = n (x + y)
        REQUIRE(static_cast<unsigned __int128>(a) * x * y == static_cast<unsigned __int128>(n) * (x + y));
      }
    }
  }

  TEST_CASE("witness is lexicographically minimal") {
    for (std::uint64_t a = 3; a <= 12; ++a) {
      for (std::uint64_t n = 1; n <= 800; ++n) {
        if (std::gcd(n, a) != 1) continue;
        std::optional<DivisorPair> best;
        for (const auto& p : coprime_divisor_pairs(factorize_trial(n))) {
          if ((p.u + p.v) % a == 0) {
            best = p;
            break;
          }
        }
        REQUIRE(find_witness(factorize_trial(n), a).witness == best);
      }
    }
  }

  TEST_CASE("count_solutions examples") {
    CHECK(count_solutions(2, 1).unordered == 2);
    CHECK(count_solutions(7, 3).unordered == 0);
    CHECK(count_solutions(1, 1).unordered == 1);
    CHECK(count_solutions(1, 1).ordered == 1);
    CHECK(count_solutions(2, 1).ordered == 3);
    CHECK_THROWS_AS(count_solutions(0, 3), DomainError);
    CHECK_THROWS_AS(count_solutions(~std::uint64_t{0} / 2, 3), CapacityError);
  }

  TEST_CASE("count_solutions matches the divisor oracle") {
    for (std::uint64_t a = 1; a <= 25; ++a) {
      for (std::uint64_t n = 1; n <= 1200; ++n) {
        const auto got = count_solutions(n, a);
        const auto want = oracle::solutions_by_divisors(n, a);
        REQUIRE(got.unordered == want.unordered);
        REQUIRE(got.ordered == want.ordered);
      }
    }
  }

  TEST_CASE("is_exceptional examples") {
    const SpfTable t(1000);
    CHECK(is_exceptional(7, 3, t));
    for (std::uint64_t n = 1; n <= 1000; ++n) REQUIRE_FALSE(is_exceptional(n, 2, t));
    CHECK(is_exceptional(2, 5, t));
    CHECK_FALSE(is_exceptional(4, 5, t));
    CHECK_THROWS_AS(is_exceptional(1001, 5, t), CapacityError);
  }

  TEST_CASE("is_exceptional matches the divisor oracle including gcd > 1") {
    const SpfTable t(3000);
    for (std::uint64_t a = 1; a <= 48; ++a) {
      for (std::uint64_t n = 1; n <= 3000; ++n) {
        REQUIRE_MESSAGE(is_exceptional(n, a, t) == oracle::exceptional(n, a), "n=" << n << " a=" << a);
      }
    }
  }

  TEST_CASE("random larger instances agree with the divisor oracle") {
    auto rng = oracle::rng(2024);
    for (int i = 0; i < 3000; ++i) {
      const std::uint64_t a = rng() % 200 + 3;
      const std::uint64_t n = rng() % 4'000'000'000ull + 1;
      REQUIRE_MESSAGE(is_exceptional(factorize_trial(n), a) == oracle::exceptional(n, a), "n=" << n << " a=" << a);
    }
  }

  TEST_CASE("reduction preserves solvability") {
    for (std::uint64_t a = 1; a <= 30; ++a) {
      for (std::uint64_t n = 1; n <= 500; ++n) {
        const auto r = reduce_instance(n, a);
        REQUIRE(oracle::exceptional(n, a) == oracle::exceptional(r.n, r.a));
      }
    }
  }
}
