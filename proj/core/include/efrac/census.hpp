#pragma once

// Census of the exceptional set up to N: E_a(N), E*_a(N) (n coprime to a),
// the families A(B, C) built from the -1-avoiding subgroups, their union U,
// and the empirical constant of the asymptotic law
//   E_a(N) ~ C(a) N (log log N)^(2^(m-1) - 1) / (log N)^(1 - 1/2^m).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "efrac/arith.hpp"
#include "efrac/residue_group.hpp"

namespace efrac {

/// A(B, C): integers whose prime factors with residue in B are unrestricted
/// and whose remaining prime factors have residues forming exactly the
/// multiset C (kept sorted).
struct FamilySpec {
  std::uint64_t modulus = 0;
  std::vector<std::uint32_t> b;  // sorted set
  std::vector<std::uint32_t> c;  // sorted multiset, disjoint from b

  /// Throws DomainError when b and c intersect or b has duplicates.
  void validate() const;
  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

inline constexpr std::size_t kMaxCatalogSize = 1'000'000;

/// All outside-patterns C of length t = 2^(m-1) - 1 for a family member H:
/// residues outside H whose discrete logs at H's replaced component are all
/// +-e (mod 2^m) for one odd e, as sorted multisets. For m = 1 the single
/// empty pattern. NotSupportedError for non-product H when m >= 2.
std::vector<FamilySpec> pattern_catalog(const Subgroup& h, const ResidueGroup& group);

/// gcd(n, spec.modulus) must be 1 (DomainError otherwise).
bool family_membership(const FactoredInteger& n, const FamilySpec& spec);

enum class FamilyChoice { Paper, Full, Both };

std::string_view to_string(FamilyChoice choice);
/// Throws DomainError for anything but "paper", "full", "both".
FamilyChoice parse_family_choice(std::string_view text);

struct CensusOptions {
  std::vector<std::uint64_t> checkpoints;  // strictly ascending, last = limit
  FamilyChoice family = FamilyChoice::Paper;
  bool track_families = true;
  unsigned jobs = 1;
  std::uint64_t block_size = 1u << 16;
  std::uint64_t phi_cap = kDefaultPhiCap;
};

struct CensusFamily {
  Subgroup h;
  FamilySpec spec;
  bool paper_form = false;
};

struct CensusCheckpoint {
  std::uint64_t n = 0;
  std::uint64_t e = 0;        // E_a(N)
  std::uint64_t e_star = 0;   // E*_a(N)
  std::uint64_t u = 0;        // |U(N)| over all tracked families
  std::uint64_t u_paper = 0;  // |U(N)| over product-form families
  std::uint64_t union_not_exceptional = 0;  // members of U that are soluble
  std::vector<std::uint64_t> family_counts;

  std::int64_t residual() const noexcept {
    return static_cast<std::int64_t>(e_star) - static_cast<std::int64_t>(u);
  }
  double residual_fraction() const noexcept {
    return e_star == 0 ? 0.0 : static_cast<double>(residual()) / static_cast<double>(e_star);
  }
};

struct CensusSeries {
  std::uint64_t a = 0;
  std::optional<ModulusStructure> structure;  // absent for a <= 2
  FamilyChoice family_choice = FamilyChoice::Paper;
  std::vector<CensusFamily> families;
  std::vector<CensusCheckpoint> checkpoints;
};

/// One segmented pass over 1..limit. Results do not depend on jobs.
/// CapacityError when limit exceeds 2^32 - 1; DomainError for bad checkpoints.
CensusSeries run_census(std::uint64_t a, std::uint64_t limit, const CensusOptions& options);

struct DecompositionTerm {
  std::uint64_t divisor = 0;  // e | a
  std::uint64_t count = 0;    // #{n <= N/e : gcd(n, a/e) = 1, n exceptional for a/e}
};

struct DecompositionReport {
  std::uint64_t lhs = 0;  // E_a(N) from the census pass
  std::uint64_t rhs = 0;  // sum of terms, from witness search
  std::vector<DecompositionTerm> terms;

  bool holds() const noexcept { return lhs == rhs; }
};

/// Compares E_a(N) from the sieve census against the sum over e | a of the
/// coprime exceptional counts for a/e up to N/e, the latter recomputed by
/// table factorization and witness search.
DecompositionReport decomposition_check(std::uint64_t a, std::uint64_t limit);

/// Count of n <= limit, coprime to the modulus, in both families.
std::uint64_t pairwise_intersection_count(const FamilySpec& first, const FamilySpec& second, std::uint64_t limit);

struct FitPoint {
  std::uint64_t n = 0;
  double c_hat = 0.0;
  std::optional<double> relative_change;  // vs the previous checkpoint
};

/// Natural logarithms. Checkpoints below 100 raise DomainError.
std::vector<FitPoint> fit_constant(const CensusSeries& series);

/// E (log N)^(1 - 1/2^m) / (N (log log N)^(2^(m-1) - 1)).
double fitted_constant(std::uint64_t exceptional_count, std::uint64_t n, std::uint32_t m);

}  // namespace efrac
