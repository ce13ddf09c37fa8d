#include "efrac/classifier.hpp"

#include <algorithm>
#include <string>

#include "efrac/errors.hpp"
#include "efrac/signed_sums.hpp"

namespace efrac {

namespace {

void require_coprime(const FactoredInteger& n, std::uint64_t a) {
  if (gcd_u64(n.value(), a) != 1) {
    throw DomainError("classification requires gcd(n, a) = 1; got n = " + std::to_string(n.value()) +
                      ", a = " + std::to_string(a));
  }
}

}  // namespace

std::uint32_t ResidueProfile::total() const noexcept {
  std::uint32_t sum = 0;
  for (const auto& [r, c] : counts) sum += c;
  return sum;
}

ResidueProfile residue_profile(const FactoredInteger& n, const ModulusStructure& structure) {
  const std::uint64_t a = structure.a;
  require_coprime(n, a);
  ResidueProfile profile;
  profile.modulus = a;
  for (const auto& [p, e] : n.factors()) profile.counts[static_cast<std::uint32_t>(p % a)] += e;
  for (const auto& [r, c] : profile.counts) {
    if (c >= structure.phi) profile.w.push_back(r);
  }
  return profile;
}

ResidueProfile residue_profile(const FactoredInteger& n, std::uint64_t a) {
  return residue_profile(n, compute_structure(a));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedSoluble:
      return "CertifiedSoluble";
    case Verdict::CertifiedExceptional:
      return "CertifiedExceptional";
    case Verdict::NotApplicable:
      return "NotApplicable";
  }
  return "NotApplicable";
}

std::string_view to_string(VerdictReason r) {
  switch (r) {
    case VerdictReason::TLarge:
      return "TLarge";
    case VerdictReason::TPattern:
      return "TPattern";
    case VerdictReason::HSmooth:
      return "HSmooth";
    case VerdictReason::WLarge:
      return "WLarge";
  }
  return "WLarge";
}

StructuralVerdict lemma28_filter(const ResidueProfile& profile, const ResidueGroup& group) {
  if (!group.lattice_available()) throw CapacityError("subgroup lattice not enumerated for this modulus");
  const std::uint64_t d = group.structure().d;
  const auto w_size = profile.w.size();
  if (w_size >= d + 1) return {Verdict::CertifiedSoluble, VerdictReason::WLarge, 0};
  if (w_size != d) return StructuralVerdict::not_applicable();
  if (!group.full_family_index(profile.w)) return {Verdict::CertifiedSoluble, VerdictReason::WLarge, 0};
  const bool inside = std::all_of(profile.counts.begin(), profile.counts.end(), [&](const auto& rc) {
    return std::binary_search(profile.w.begin(), profile.w.end(), rc.first);
  });
  if (inside) return {Verdict::CertifiedExceptional, VerdictReason::HSmooth, 0};
  return StructuralVerdict::not_applicable();
}

StructuralVerdict classify_structural(const FactoredInteger& n, const ResidueGroup& group, const Subgroup& h) {
  const auto& s = group.structure();
  require_coprime(n, s.a);
  if (!group.lattice_available()) throw CapacityError("subgroup lattice not enumerated for this modulus");
  if (h.modulus != s.a || !group.full_family_index(h.elements)) {
    throw DomainError("subgroup is not a member of the family for a = " + std::to_string(s.a));
  }

  std::vector<std::uint32_t> outside;  // residues of T, with multiplicity
  std::vector<std::uint8_t> hit(h.size(), 0);
  for (const auto& [p, e] : n.factors()) {
    const auto r = static_cast<std::uint32_t>(p % s.a);
    const auto it = std::lower_bound(h.elements.begin(), h.elements.end(), r);
    if (it != h.elements.end() && *it == r) {
      hit[static_cast<std::size_t>(it - h.elements.begin())] = 1;
    } else {
      outside.insert(outside.end(), e, r);
    }
  }
  const std::uint64_t t = outside.size();
  if (t == 0) return {Verdict::CertifiedExceptional, VerdictReason::HSmooth, t};

  const bool image_covers_h = std::all_of(hit.begin(), hit.end(), [](std::uint8_t x) { return x != 0; });
  if (!image_covers_h) return StructuralVerdict::not_applicable(t);

  const std::uint64_t half = s.two_to_m() / 2;
  if (t >= half) return {Verdict::CertifiedSoluble, VerdictReason::TLarge, t};
  if (s.m < 2 || t != half - 1) return StructuralVerdict::not_applicable(t);

  const CyclicComponent* comp = group.distinguished_component(h);
  if (comp == nullptr) return StructuralVerdict::not_applicable(t);
  SignedSumInstance inst{s.m, {}};
  const std::uint64_t mask = s.two_to_m() - 1;
  for (const auto r : outside) inst.elements.push_back(static_cast<std::uint32_t>(discrete_log(r, *comp) & mask));
  if (is_plus_minus_odd_pattern(inst)) return {Verdict::CertifiedExceptional, VerdictReason::TPattern, t};
  return {Verdict::CertifiedSoluble, VerdictReason::TPattern, t};
}

}  // namespace efrac
