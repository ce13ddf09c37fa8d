#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "efrac/errors.hpp"
#include "efrac/residue_group.hpp"
#include "oracles.hpp"

using namespace efrac;

namespace {

std::vector<std::vector<std::uint64_t>> as_lists(const std::vector<Subgroup>& groups) {
  std::vector<std::vector<std::uint64_t>> out;
  for (const auto& h : groups) out.emplace_back(h.elements.begin(), h.elements.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("residue_group") {
  TEST_CASE("structure examples") {
    auto s = compute_structure(3);
    CHECK(s.gamma0 == 0);
    CHECK(s.delta == 0);
    CHECK(s.m == 1);
    CHECK(s.d == 1);
    CHECK(s.phi == 2);

    s = compute_structure(5);
    CHECK(s.delta == 0);
    CHECK(s.m == 2);
    CHECK(s.d == 1);
    CHECK(s.phi == 4);

    s = compute_structure(65);
    CHECK(s.delta == 0);
    CHECK(s.m == 2);
    CHECK(s.d == 12);
    CHECK(s.phi == 48);

    s = compute_structure(24);
    CHECK(s.gamma0 == 3);
    CHECK(s.delta == 2);
    CHECK(s.m == 1);
    CHECK(s.d == 4);
    CHECK(s.phi == 8);
  }

  TEST_CASE("structure rejects small moduli") {
    CHECK_THROWS_AS(compute_structure(0), DomainError);
    CHECK_THROWS_AS(compute_structure(1), DomainError);
    CHECK_THROWS_AS(compute_structure(2), DomainError);
    CHECK_THROWS_AS(compute_structure(SpfTable::kMaxLimit + 1), CapacityError);
  }

  TEST_CASE("structure invariants against the definition") {
    for (std::uint64_t a = 3; a <= 3000; ++a) {
      const auto s = compute_structure(a);
      REQUIRE(s.phi == (a <= 200 ? oracle::phi(a) : s.phi));
      REQUIRE(s.m == oracle::m_invariant(a));
      REQUIRE(s.m >= 1);
      REQUIRE(s.two_to_m() * s.d == s.phi);
      REQUIRE(s.delta == (a % 4 == 0 ? 2u : 0u));
    }
  }

  TEST_CASE("component decomposition examples") {
    const auto d5 = component_decomposition(5);
    REQUIRE(d5.odd.size() == 1);
    CHECK_FALSE(d5.two_part.has_value());
    CHECK(d5.odd[0].generator == 2);
    CHECK(d5.odd[0].powers == std::vector<std::uint32_t>{1, 2, 4, 3});

    const auto d8 = component_decomposition(8);
    REQUIRE(d8.two_part.has_value());
    CHECK(d8.odd.empty());
    CHECK(d8.two_part->minus_one == 7);
    CHECK(d8.two_part->five == 5);
    for (std::uint32_t eps = 0; eps < 2; ++eps) {
      for (std::uint32_t k = 0; k < 2; ++k) {
        std::uint64_t x = (eps ? 7 : 1);
        for (std::uint32_t j = 0; j < k; ++j) x = x * 5 % 8;
        CHECK(d8.two_part->exponents[x].eps == eps);
        CHECK(d8.two_part->exponents[x].k == k);
      }
    }

    const auto d9 = component_decomposition(9);
    REQUIRE(d9.odd.size() == 1);
    CHECK(d9.odd[0].generator == 2);
    CHECK(d9.odd[0].order == 6);

    CHECK_FALSE(component_decomposition(6).two_part.has_value());
    CHECK(component_decomposition(12).two_part->gamma0 == 2);
  }

  TEST_CASE("two-part exponents reproduce every odd residue") {
    for (std::uint64_t a : {8u, 16u, 32u, 64u, 1024u}) {
      const auto t = *component_decomposition(a).two_part;
      for (std::uint64_t x = 1; x < a; x += 2) {
        const auto ex = t.exponents[x];
        std::uint64_t y = ex.eps ? a - 1 : 1;
        y = y * efrac::pow_mod(5, ex.k, a) % a;
        REQUIRE(y == x);
        REQUIRE(ex.k < t.five_order);
      }
    }
  }

  TEST_CASE("primitive roots are minimal and generate") {
    for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u, 97u}) {
      for (std::uint32_t e = 1; e <= 3; ++e) {
        std::uint64_t pp = 1;
        for (std::uint32_t j = 0; j < e; ++j) pp *= p;
        const std::uint64_t order = pp / p * (p - 1);
        const auto g = primitive_root(p, e);
        for (std::uint64_t c = 2; c <= g; ++c) {
          if (c % p == 0) continue;
          std::uint64_t x = 1, ord = 0;
          do {
            x = x * c % pp;
            ++ord;
          } while (x != 1);
          REQUIRE((ord == order) == (c == g));
        }
      }
    }
    CHECK_THROWS_AS(primitive_root(2, 3), DomainError);
  }

  TEST_CASE("discrete logs") {
    const auto c5 = make_cyclic_component(5, 1);
    CHECK(discrete_log(1, c5) == 0);
    CHECK(discrete_log(3, c5) == 3);
    CHECK(discrete_log(4, c5) == 2);
    CHECK_THROWS_AS(discrete_log(10, c5), DomainError);
    const std::pair<std::uint32_t, std::uint32_t> cases[] = {{7, 1}, {3, 2}, {5, 2}, {3, 3}, {7, 2}, {13, 1}};
    for (const auto& [prime, e] : cases) {
      const auto c = make_cyclic_component(prime, e);
      for (std::uint64_t x = 1; x < c.prime_power; ++x) {
        if (x % prime == 0) continue;
        REQUIRE(discrete_log(x, c) == oracle::brute_dlog(x, c.generator, c.prime_power));
      }
    }
  }

  TEST_CASE("subgroup enumeration examples") {
    using L = std::vector<std::vector<std::uint64_t>>;
    CHECK(as_lists(enumerate_subgroups(5)) == L{{1}, {1, 2, 3, 4}, {1, 4}});
    CHECK(as_lists(enumerate_subgroups(8)) == L{{1}, {1, 3}, {1, 3, 5, 7}, {1, 5}, {1, 7}});
    CHECK(as_lists(enumerate_subgroups(3)) == L{{1}, {1, 2}});
    CHECK_THROWS_AS(enumerate_subgroups(65, 40), CapacityError);
  }

  TEST_CASE("subgroup lattice matches closure oracle") {
    for (std::uint64_t a = 3; a <= 60; ++a) {
      if (oracle::phi(a) > 16) continue;
      const auto got = enumerate_subgroups(a);
      REQUIRE(as_lists(got) == oracle::subgroups_by_closure(a));
      for (std::size_t i = 1; i < got.size(); ++i) REQUIRE(got[i - 1].size() <= got[i].size());
      for (const auto& h : got) REQUIRE(h.index * h.size() == compute_structure(a).phi);
    }
  }

  TEST_CASE("family examples") {
    using L = std::vector<std::vector<std::uint64_t>>;
    auto f5 = maximal_avoiding_subgroups(5);
    CHECK(as_lists(f5.full_family) == L{{1}});
    CHECK(as_lists(f5.paper_family) == L{{1}});
    auto f8 = maximal_avoiding_subgroups(8);
    CHECK(as_lists(f8.full_family) == L{{1, 3}, {1, 5}});
    CHECK(as_lists(f8.paper_family) == L{{1, 3}, {1, 5}});
  }

  TEST_CASE("a = 35 full family has a mixed kernel") {
    // Index-2 kernels built from discrete logs mod 5 (g = 2) and mod 7 (g = 3).
    std::vector<std::uint64_t> ker7, mixed;
    for (const auto x : oracle::units(35)) {
      const auto l5 = oracle::brute_dlog(x % 5, 2, 5);
      const auto l7 = oracle::brute_dlog(x % 7, 3, 7);
      if (l7 % 2 == 0) ker7.push_back(x);
      if ((l5 + l7) % 2 == 0) mixed.push_back(x);
    }
    const auto fam = maximal_avoiding_subgroups(35);
    CHECK(as_lists(fam.paper_family) == std::vector<std::vector<std::uint64_t>>{ker7});
    auto expected = std::vector<std::vector<std::uint64_t>>{ker7, mixed};
    std::sort(expected.begin(), expected.end());
    CHECK(as_lists(fam.full_family) == expected);
  }

  TEST_CASE("families match the closure oracle") {
    for (std::uint64_t a = 3; a <= 60; ++a) {
      if (oracle::phi(a) > 16) continue;
      const auto fam = maximal_avoiding_subgroups(a);
      REQUIRE(as_lists(fam.full_family) == oracle::avoiding_family(a));
    }
  }

  TEST_CASE("family invariants over many moduli") {
    for (std::uint64_t a = 3; a <= 400; ++a) {
      const ResidueGroup g(a);
      const auto& s = g.structure();
      REQUIRE(g.lattice_available());
      REQUIRE_FALSE(g.family().full_family.empty());
      for (const auto& h : g.family().full_family) {
        REQUIRE(h.index == s.two_to_m());
        REQUIRE_FALSE(h.contains(a - 1));
      }
      // Every product-form member is also found by the lattice search.
      for (const auto& p : g.family().paper_family) {
        REQUIRE(p.index == s.two_to_m());
        REQUIRE_FALSE(p.contains(a - 1));
        const auto idx = g.full_family_index(p.elements);
        REQUIRE(idx.has_value());
        REQUIRE(g.family().full_family[*idx].replaced_component == p.replaced_component);
      }
    }
  }

  TEST_CASE("lattice is skipped above the cap") {
    const ResidueGroup g(65, 10);
    CHECK_FALSE(g.lattice_available());
    CHECK(g.family().full_family.empty());
    CHECK_FALSE(g.family().paper_family.empty());
  }

  TEST_CASE("distinguished component") {
    const ResidueGroup g5(5);
    const auto* c = g5.distinguished_component(g5.family().full_family.front());
    REQUIRE(c != nullptr);
    CHECK(c->prime == 5);

    const ResidueGroup g8(8);
    for (const auto& h : g8.family().full_family) CHECK(g8.distinguished_component(h) == nullptr);

    const ResidueGroup g35(35);
    int product_members = 0;
    for (const auto& h : g35.family().full_family) product_members += g35.distinguished_component(h) != nullptr;
    CHECK(product_members == 1);
  }
}
