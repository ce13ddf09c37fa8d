#pragma once

// Structural classification of n from the residues of its prime factors:
// certified verdicts where the subgroup lemmas apply, NotApplicable
// otherwise. Callers fall back to the exact oracle for NotApplicable.

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "efrac/arith.hpp"
#include "efrac/residue_group.hpp"

namespace efrac {

struct ResidueProfile {
  std::uint64_t modulus = 0;
  /// residue -> number of prime factors in that class, with multiplicity
  std::map<std::uint32_t, std::uint32_t> counts;
  /// classes holding at least phi(a) prime factors, ascending
  std::vector<std::uint32_t> w;

  std::uint32_t total() const noexcept;
};

/// Requires gcd(n, a) = 1 (DomainError otherwise).
ResidueProfile residue_profile(const FactoredInteger& n, std::uint64_t a);
ResidueProfile residue_profile(const FactoredInteger& n, const ModulusStructure& structure);

enum class Verdict { CertifiedSoluble, CertifiedExceptional, NotApplicable };

enum class VerdictReason {
  TLarge,    // at least 2^(m-1) prime factors outside H
  TPattern,  // exactly 2^(m-1) - 1 outside H; decided by the +-e pattern
  HSmooth,   // every prime factor lies in H
  WLarge,    // too many heavily populated classes
};

struct StructuralVerdict {
  Verdict verdict = Verdict::NotApplicable;
  std::optional<VerdictReason> reason;
  std::uint64_t t = 0;

  static StructuralVerdict not_applicable(std::uint64_t t = 0) { return {Verdict::NotApplicable, std::nullopt, t}; }
  bool certified() const noexcept { return verdict != Verdict::NotApplicable; }
};

std::string_view to_string(Verdict v);
std::string_view to_string(VerdictReason r);

/// |W| >= d + 1 certifies solubility; |W| = d with W outside the full family
/// certifies solubility; W a family member containing every prime factor
/// certifies exceptionality; anything else is NotApplicable.
/// CapacityError when the group was built without its subgroup lattice.
StructuralVerdict lemma28_filter(const ResidueProfile& profile, const ResidueGroup& group);

/// Verdict relative to one family member H (DomainError when H is not in
/// the full family or gcd(n, a) != 1). T is the list of prime factors
/// outside H, with multiplicity, and t its length. Requires, except for
/// t = 0, that every element of H is the residue of some prime factor:
///   t = 0                       -> CertifiedExceptional (HSmooth)
///   t >= 2^(m-1)                -> CertifiedSoluble (TLarge)
///   t = 2^(m-1) - 1, m >= 2     -> decided by whether the discrete logs of
///                                  T at H's replaced component are all +-e
///                                  for one odd e (product-form H only)
StructuralVerdict classify_structural(const FactoredInteger& n, const ResidueGroup& group, const Subgroup& h);

}  // namespace efrac
