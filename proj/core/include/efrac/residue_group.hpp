#pragma once

// Structure of the reduced residue group G = (Z/aZ)*: the invariants
// (delta, m, d), its CRT decomposition into cyclic pieces with discrete
// logarithm tables, subgroup enumeration, and the families of maximal
// subgroups avoiding the residue -1.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "efrac/arith.hpp"

namespace efrac {

inline constexpr std::uint64_t kDefaultPhiCap = 10'000;

/// Invariants of a modulus a >= 3.
///
/// With a = 2^gamma0 * p_1^g_1 * ... * p_k^g_k, delta is 2 when 4 | a and 0
/// otherwise, 2^m exactly divides gcd(delta, p_1 - 1, ..., p_k - 1) (taking
/// gcd(0, x) = x) and phi(a) = 2^m * d. Note d need not be odd.
struct ModulusStructure {
  std::uint64_t a = 0;
  FactoredInteger factorization;
  std::uint32_t gamma0 = 0;
  std::vector<PrimePower> odd_primes;
  std::uint64_t phi = 0;
  std::uint32_t delta = 0;
  std::uint32_t m = 0;
  std::uint64_t d = 0;

  std::uint64_t two_to_m() const noexcept { return std::uint64_t{1} << m; }
};

/// Throws DomainError for a < 3.
ModulusStructure compute_structure(std::uint64_t a);

/// (Z/p^g Z)* for an odd prime power, with a fixed primitive root.
struct CyclicComponent {
  static constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t prime = 0;
  std::uint32_t exponent = 0;
  std::uint64_t prime_power = 0;
  std::uint64_t order = 0;  // phi(p^g)
  std::uint64_t generator = 0;
  std::uint32_t two_adic = 0;  // v2(order)
  std::vector<std::uint32_t> dlog;    // by residue mod p^g; kNoLog when not reduced
  std::vector<std::uint32_t> powers;  // generator^k for k < order
};

/// (Z/2^g Z)* for g >= 2 as <-1> x <5>: every odd residue is
/// (-1)^eps * 5^k with eps in {0, 1} and 0 <= k < 2^(g-2).
struct TwoPart {
  struct Exponents {
    std::uint8_t eps = 0;
    std::uint32_t k = 0;
  };

  std::uint32_t gamma0 = 0;
  std::uint64_t modulus = 0;
  std::uint64_t minus_one = 0;
  std::uint64_t five = 0;
  std::uint64_t five_order = 0;
  std::vector<Exponents> exponents;  // by residue mod 2^g; meaningful for odd residues
};

struct Decomposition {
  std::optional<TwoPart> two_part;  // present iff gamma0 >= 2
  std::vector<CyclicComponent> odd;  // ascending primes
};

Decomposition component_decomposition(std::uint64_t a);

/// Smallest primitive root modulo an odd prime power.
std::uint64_t primitive_root(std::uint32_t prime, std::uint32_t exponent);

CyclicComponent make_cyclic_component(std::uint32_t prime, std::uint32_t exponent);

/// e with g^e = x mod p^g, 0 <= e < phi(p^g). Throws DomainError if x is
/// not coprime to the prime.
std::uint32_t discrete_log(std::uint64_t x, const CyclicComponent& comp);

/// A subgroup of (Z/aZ)* as an explicit sorted residue set.
struct Subgroup {
  std::uint64_t modulus = 0;
  std::vector<std::uint32_t> elements;
  std::uint64_t index = 0;
  /// For the product-form members G_0 x ... x H_i x ... x G_k: the
  /// replaced component i, where 0 is the 2-part and 1..k the odd primes.
  std::optional<std::size_t> replaced_component;

  bool contains(std::uint64_t residue) const;
  std::size_t size() const noexcept { return elements.size(); }
  bool same_elements(const Subgroup& other) const noexcept { return elements == other.elements; }
};

/// Every subgroup of G, ordered by (size, elements). Throws CapacityError
/// when phi(a) > phi_cap.
std::vector<Subgroup> enumerate_subgroups(std::uint64_t a, std::uint64_t phi_cap = kDefaultPhiCap);

/// Maximal subgroups avoiding -1 with index exactly 2^m, computed twice:
/// from the product construction and from the full subgroup lattice.
struct SubgroupFamily {
  std::vector<Subgroup> paper_family;  // product form
  std::vector<Subgroup> full_family;   // lattice enumeration
};

SubgroupFamily maximal_avoiding_subgroups(std::uint64_t a, std::uint64_t phi_cap = kDefaultPhiCap);

/// Product-form members only; does not need the lattice, so no cap applies.
std::vector<Subgroup> product_form_subgroups(const ModulusStructure& structure, const Decomposition& decomposition);

/// Reduced residues modulo a, ascending.
std::vector<std::uint32_t> reduced_residues(std::uint64_t a);

/// Bundles the structure, decomposition and families for one modulus.
/// When phi(a) exceeds phi_cap the lattice is skipped: the product-form
/// family is still available but full_family stays empty.
class ResidueGroup {
 public:
  explicit ResidueGroup(std::uint64_t a, std::uint64_t phi_cap = kDefaultPhiCap);

  bool lattice_available() const noexcept { return lattice_available_; }

  std::uint64_t modulus() const noexcept { return structure_.a; }
  const ModulusStructure& structure() const noexcept { return structure_; }
  const Decomposition& decomposition() const noexcept { return decomposition_; }
  const SubgroupFamily& family() const noexcept { return family_; }

  /// Index into full_family of a subgroup with the same elements, if any.
  std::optional<std::size_t> full_family_index(std::span<const std::uint32_t> elements) const;

  /// The odd cyclic component replaced in a product-form family member
  /// (matched by elements), or nullptr for non-product members and for
  /// members replacing the 2-part.
  const CyclicComponent* distinguished_component(const Subgroup& h) const;

 private:
  ModulusStructure structure_;
  Decomposition decomposition_;
  SubgroupFamily family_;
  bool lattice_available_ = false;
};

}  // namespace efrac
