#include "efrac/residue_group.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "efrac/errors.hpp"

namespace efrac {

namespace {

std::uint32_t two_adic_valuation(std::uint64_t x) {
  return x == 0 ? 0 : static_cast<std::uint32_t>(std::countr_zero(x));
}

std::uint64_t int_pow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) r *= base;
  return r;
}

void require_modulus(std::uint64_t a) {
  if (a < 3) throw DomainError("modulus must be at least 3, got " + std::to_string(a));
  if (a > SpfTable::kMaxLimit) throw CapacityError("modulus must fit in 32 bits");
}

}  // namespace

ModulusStructure compute_structure(std::uint64_t a) {
  require_modulus(a);
  ModulusStructure s;
  s.a = a;
  s.factorization = factorize_trial(a);
  s.phi = 1;
  std::uint64_t g = 0;
  for (const auto& pp : s.factorization.factors()) {
    s.phi *= int_pow(pp.prime, pp.exponent - 1) * (pp.prime - 1);
    if (pp.prime == 2) {
      s.gamma0 = pp.exponent;
    } else {
      s.odd_primes.push_back(pp);
      g = gcd_u64(g, pp.prime - 1);
    }
  }
  s.delta = s.gamma0 >= 2 ? 2 : 0;
  g = gcd_u64(g, s.delta);
  s.m = two_adic_valuation(g);
  s.d = s.phi >> s.m;
  return s;
}

std::uint64_t primitive_root(std::uint32_t prime, std::uint32_t exponent) {
  if (prime < 3 || exponent < 1) throw DomainError("primitive roots are computed for odd prime powers only");
  const std::uint64_t pp = int_pow(prime, exponent);
  const std::uint64_t order = pp / prime * (prime - 1);
  std::vector<std::uint64_t> order_primes;
  const auto order_factors = factorize_trial(order);
  for (const auto& f : order_factors.factors()) order_primes.push_back(f.prime);
  for (std::uint64_t g = 2; g < pp; ++g) {
    if (g % prime == 0) continue;
    bool ok = true;
    for (const auto q : order_primes) {
      if (pow_mod(g, order / q, pp) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw DomainError("no primitive root found");  // unreachable for odd prime powers
}

CyclicComponent make_cyclic_component(std::uint32_t prime, std::uint32_t exponent) {
  CyclicComponent c;
  c.prime = prime;
  c.exponent = exponent;
  c.prime_power = int_pow(prime, exponent);
  c.order = c.prime_power / prime * (prime - 1);
  c.generator = primitive_root(prime, exponent);
  c.two_adic = two_adic_valuation(c.order);
  c.dlog.assign(c.prime_power, CyclicComponent::kNoLog);
  c.powers.resize(c.order);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k < c.order; ++k) {
    c.powers[k] = static_cast<std::uint32_t>(x);
    c.dlog[x] = static_cast<std::uint32_t>(k);
    x = x * c.generator % c.prime_power;
  }
  return c;
}

Decomposition component_decomposition(std::uint64_t a) {
  const auto s = compute_structure(a);
  Decomposition dec;
  if (s.gamma0 >= 2) {
    TwoPart t;
    t.gamma0 = s.gamma0;
    t.modulus = std::uint64_t{1} << s.gamma0;
    t.minus_one = t.modulus - 1;
    t.five = 5 % t.modulus;
    t.five_order = t.modulus >> 2;
    t.exponents.assign(t.modulus, {});
    std::uint64_t x = 1;
    for (std::uint32_t k = 0; k < t.five_order; ++k) {
      t.exponents[x] = {0, k};
      t.exponents[t.modulus - x] = {1, k};
      x = x * 5 % t.modulus;
    }
    dec.two_part = std::move(t);
  }
  for (const auto& pp : s.odd_primes) dec.odd.push_back(make_cyclic_component(pp.prime, pp.exponent));
  return dec;
}

std::uint32_t discrete_log(std::uint64_t x, const CyclicComponent& comp) {
  const std::uint64_t r = x % comp.prime_power;
  const std::uint32_t e = comp.dlog[r];
  if (e == CyclicComponent::kNoLog) {
    throw DomainError(std::to_string(x) + " is not a reduced residue modulo " + std::to_string(comp.prime_power));
  }
  return e;
}

bool Subgroup::contains(std::uint64_t residue) const {
  const auto r = residue % modulus;
  return std::binary_search(elements.begin(), elements.end(), static_cast<std::uint32_t>(r));
}

std::vector<std::uint32_t> reduced_residues(std::uint64_t a) {
  std::vector<std::uint32_t> out;
  for (std::uint64_t x = 1; x < a; ++x) {
    if (gcd_u64(x, a) == 1) out.push_back(static_cast<std::uint32_t>(x));
  }
  if (a == 1) out.push_back(0);
  return out;
}

std::vector<Subgroup> enumerate_subgroups(std::uint64_t a, std::uint64_t phi_cap) {
  const auto s = compute_structure(a);
  if (s.phi > phi_cap) {
    throw CapacityError("phi(" + std::to_string(a) + ") = " + std::to_string(s.phi) + " exceeds subgroup cap " +
                        std::to_string(phi_cap));
  }
  const auto group = reduced_residues(a);
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<std::vector<std::uint32_t>> queue{{1}};
  seen.insert(queue.front());
  std::vector<std::uint8_t> in_s(a), covered(a), in_t(a);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const auto current = queue[qi];
    std::fill(in_s.begin(), in_s.end(), 0);
    std::fill(covered.begin(), covered.end(), 0);
    for (auto x : current) in_s[x] = 1;
    for (const auto g : group) {
      if (covered[g]) continue;
      for (auto x : current) covered[g * std::uint64_t{x} % a] = 1;
      if (in_s[g]) continue;
      // <S, g> is the union of the cosets g^k S until g^k falls back into S.
      std::vector<std::uint32_t> next(current);
      std::fill(in_t.begin(), in_t.end(), 0);
      for (auto x : current) in_t[x] = 1;
      std::uint64_t power = g;
      while (!in_s[power]) {
        for (auto x : current) {
          const auto y = static_cast<std::uint32_t>(power * x % a);
          if (!in_t[y]) {
            in_t[y] = 1;
            next.push_back(y);
          }
        }
        power = power * g % a;
      }
      std::sort(next.begin(), next.end());
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  std::vector<Subgroup> out;
  out.reserve(seen.size());
  for (auto& elems : seen) out.push_back(Subgroup{a, elems, s.phi / elems.size(), std::nullopt});
  std::sort(out.begin(), out.end(), [](const Subgroup& l, const Subgroup& r) {
    if (l.size() != r.size()) return l.size() < r.size();
    return l.elements < r.elements;
  });
  return out;
}

std::vector<Subgroup> product_form_subgroups(const ModulusStructure& s, const Decomposition& dec) {
  const auto group = reduced_residues(s.a);
  const std::uint64_t target_index = s.two_to_m();
  std::vector<Subgroup> out;
  auto build = [&](auto&& member, std::size_t component, std::uint64_t index) {
    if (index != target_index) return;
    Subgroup h{s.a, {}, index, component};
    for (const auto x : group) {
      if (member(x)) h.elements.push_back(x);
    }
    out.push_back(std::move(h));
  };
  if (dec.two_part) {
    const auto& t = *dec.two_part;
    if (t.gamma0 == 2) {
      build([&](std::uint32_t x) { return x % 4 == 1; }, 0, 2);
    } else {
      // The two index-2 subgroups of <-1> x <5> that miss -1: <5> and <-5>.
      build([&](std::uint32_t x) { return t.exponents[x % t.modulus].eps == 0; }, 0, 2);
      build(
          [&](std::uint32_t x) {
            const auto ex = t.exponents[x % t.modulus];
            return ex.eps == (ex.k & 1u);
          },
          0, 2);
    }
  }
  for (std::size_t i = 0; i < dec.odd.size(); ++i) {
    const auto& c = dec.odd[i];
    const std::uint64_t sub_index = std::uint64_t{1} << c.two_adic;
    build([&](std::uint32_t x) { return c.dlog[x % c.prime_power] % sub_index == 0; }, i + 1, sub_index);
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& l, const Subgroup& r) { return l.elements < r.elements; });
  return out;
}

SubgroupFamily maximal_avoiding_subgroups(std::uint64_t a, std::uint64_t phi_cap) {
  const auto s = compute_structure(a);
  const auto all = enumerate_subgroups(a, phi_cap);
  const auto minus_one = static_cast<std::uint32_t>(a - 1);
  std::vector<const Subgroup*> avoiding;
  for (const auto& h : all) {
    if (!std::binary_search(h.elements.begin(), h.elements.end(), minus_one)) avoiding.push_back(&h);
  }
  SubgroupFamily fam;
  fam.paper_family = product_form_subgroups(s, component_decomposition(a));
  for (const auto* h : avoiding) {
    if (h->index != s.two_to_m()) continue;
    const bool maximal = std::none_of(avoiding.begin(), avoiding.end(), [&](const Subgroup* other) {
      return other->size() > h->size() &&
             std::includes(other->elements.begin(), other->elements.end(), h->elements.begin(), h->elements.end());
    });
    if (!maximal) continue;
    Subgroup member = *h;
    for (const auto& p : fam.paper_family) {
      if (p.elements == member.elements) member.replaced_component = p.replaced_component;
    }
    fam.full_family.push_back(std::move(member));
  }
  std::sort(fam.full_family.begin(), fam.full_family.end(),
            [](const Subgroup& l, const Subgroup& r) { return l.elements < r.elements; });
  return fam;
}

ResidueGroup::ResidueGroup(std::uint64_t a, std::uint64_t phi_cap)
    : structure_(compute_structure(a)), decomposition_(component_decomposition(a)) {
  if (structure_.phi <= phi_cap) {
    family_ = maximal_avoiding_subgroups(a, phi_cap);
    lattice_available_ = true;
  } else {
    family_.paper_family = product_form_subgroups(structure_, decomposition_);
  }
}

std::optional<std::size_t> ResidueGroup::full_family_index(std::span<const std::uint32_t> elements) const {
  for (std::size_t i = 0; i < family_.full_family.size(); ++i) {
    const auto& e = family_.full_family[i].elements;
    if (std::equal(e.begin(), e.end(), elements.begin(), elements.end())) return i;
  }
  return std::nullopt;
}

const CyclicComponent* ResidueGroup::distinguished_component(const Subgroup& h) const {
  for (const auto& p : family_.paper_family) {
    if (p.elements != h.elements) continue;
    if (!p.replaced_component || *p.replaced_component == 0) return nullptr;
    return &decomposition_.odd[*p.replaced_component - 1];
  }
  return nullptr;
}

}  // namespace efrac
