#include "efrac/census.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "efrac/errors.hpp"
#include "efrac/solubility.hpp"

namespace efrac {

namespace {

constexpr std::size_t kMaxPatternLength = 64;

// Per-subgroup lookup data for the hot loop.
struct SubgroupTable {
  std::vector<std::uint8_t> member;  // by residue mod a
  std::size_t t = 0;
  std::vector<std::vector<std::uint32_t>> patterns;  // sorted
  std::vector<std::size_t> family_index;             // parallel to patterns
  bool paper_form = false;
};

struct Bucket {
  std::uint64_t e = 0;
  std::uint64_t e_star = 0;
  std::uint64_t u = 0;
  std::uint64_t u_paper = 0;
  std::uint64_t union_not_exceptional = 0;
  std::vector<std::uint64_t> families;
};

void validate_checkpoints(const std::vector<std::uint64_t>& checkpoints, std::uint64_t limit) {
  if (checkpoints.empty()) throw DomainError("at least one checkpoint is required");
  if (checkpoints.front() < 1) throw DomainError("checkpoints must be positive");
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) throw DomainError("checkpoints must be strictly ascending");
  }
  if (checkpoints.back() != limit) throw DomainError("last checkpoint must equal the census limit");
}

template <typename Slots>
bool outside_pattern_matches(const Slots& slots, std::uint64_t a, std::span<const std::uint32_t> b,
                             std::span<const std::uint32_t> c) {
  std::vector<std::uint32_t> outside;
  for (const auto& s : slots) {
    const auto r = static_cast<std::uint32_t>(s.prime % a);
    if (std::binary_search(b.begin(), b.end(), r)) continue;
    outside.insert(outside.end(), s.exponent, r);
    if (outside.size() > c.size()) return false;
  }
  std::sort(outside.begin(), outside.end());
  return std::equal(outside.begin(), outside.end(), c.begin(), c.end());
}

// Everything the per-n loop needs, built once per census.
class CensusKernel {
 public:
  CensusKernel(std::uint64_t a, std::vector<SubgroupTable> tables, std::size_t family_count, bool report_paper)
      : a_(a), tables_(std::move(tables)), family_count_(family_count), report_paper_(report_paper) {
    if (a_ >= 3) {
      const auto fa = factorize_trial(a_);
      a_primes_.assign(fa.factors().begin(), fa.factors().end());
    }
  }

  std::size_t family_count() const noexcept { return family_count_; }

  template <typename Slots>
  void process(const Slots& slots, std::uint64_t n, Bucket& bucket) const {
    if (a_ <= 2) return;
    bool coprime = true;
    for (const auto& s : slots) {
      for (const auto& ap : a_primes_) {
        if (ap.prime == s.prime) coprime = false;
      }
    }
    bool exceptional;
    if (coprime) {
      exceptional = is_exceptional_reduced(slots, a_);
    } else {
      const std::uint64_t g = gcd_u64(n, a_);
      std::array<PrimePower, FactorBlock::kMaxDistinct> kept{};
      std::size_t k = 0;
      for (const auto& s : slots) {
        std::uint32_t va = 0;
        for (const auto& ap : a_primes_) {
          if (ap.prime == s.prime) va = ap.exponent;
        }
        const std::uint32_t left = s.exponent - std::min(s.exponent, va);
        if (left > 0) kept[k++] = {s.prime, left};
      }
      exceptional = is_exceptional_reduced(std::span<const PrimePower>(kept.data(), k), a_ / g);
    }
    bucket.e += exceptional;
    if (!coprime) return;
    bucket.e_star += exceptional;
    if (tables_.empty()) return;

    std::array<std::uint32_t, FactorBlock::kMaxDistinct> residue{};
    std::size_t k = 0;
    for (const auto& s : slots) residue[k++] = static_cast<std::uint32_t>(s.prime % a_);

    bool in_union = false, in_paper_union = false;
    std::array<std::uint32_t, kMaxPatternLength> outside{};
    for (const auto& table : tables_) {
      std::size_t count = 0;
      bool overflow = false;
      std::size_t i = 0;
      for (const auto& s : slots) {
        const auto r = residue[i++];
        if (table.member[r]) continue;
        if (count + s.exponent > table.t) {
          overflow = true;
          break;
        }
        for (std::uint32_t j = 0; j < s.exponent; ++j) outside[count++] = r;
      }
      if (overflow || count != table.t) continue;
      std::sort(outside.begin(), outside.begin() + count);
      const std::span<const std::uint32_t> key(outside.data(), count);
      const auto it = std::lower_bound(table.patterns.begin(), table.patterns.end(), key,
                                       [](const std::vector<std::uint32_t>& p, std::span<const std::uint32_t> k) {
                                         return std::lexicographical_compare(p.begin(), p.end(), k.begin(), k.end());
                                       });
      if (it == table.patterns.end() || !std::equal(it->begin(), it->end(), key.begin(), key.end())) continue;
      ++bucket.families[table.family_index[static_cast<std::size_t>(it - table.patterns.begin())]];
      in_union = true;
      in_paper_union = in_paper_union || table.paper_form;
    }
    bucket.u += in_union;
    bucket.u_paper += report_paper_ && in_paper_union;
    bucket.union_not_exceptional += in_union && !exceptional;
  }

 private:
  std::uint64_t a_;
  std::vector<PrimePower> a_primes_;
  std::vector<SubgroupTable> tables_;
  std::size_t family_count_;
  bool report_paper_;
};

}  // namespace

void FamilySpec::validate() const {
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (b[i] <= b[i - 1]) throw DomainError("family base set must be sorted without duplicates");
  }
  for (const auto r : c) {
    if (std::binary_search(b.begin(), b.end(), r)) throw DomainError("family pattern shares a residue with its base set");
  }
}

std::vector<FamilySpec> pattern_catalog(const Subgroup& h, const ResidueGroup& group) {
  const auto& s = group.structure();
  if (s.m == 1) return {FamilySpec{s.a, h.elements, {}}};
  const CyclicComponent* comp = group.distinguished_component(h);
  if (comp == nullptr) {
    throw NotSupportedError("pattern catalog needs a product-form subgroup when m >= 2");
  }
  const std::uint64_t full = s.two_to_m();
  const std::size_t t = full / 2 - 1;
  if (t > kMaxPatternLength) throw CapacityError("pattern length exceeds supported maximum");

  // Residues outside H grouped by the class {e, -e} of their odd log mod 2^m.
  std::vector<std::vector<std::uint32_t>> classes(full / 2);
  for (const auto x : reduced_residues(s.a)) {
    if (h.contains(x)) continue;
    const std::uint64_t e = discrete_log(x, *comp) & (full - 1);
    if (e % 2 == 0) continue;
    classes[std::min(e, full - e)].push_back(x);
  }

  std::vector<FamilySpec> out;
  for (const auto& pool : classes) {
    if (pool.empty()) continue;
    // Non-decreasing index sequences = multisets of size t from pool.
    std::vector<std::size_t> idx(t, 0);
    while (true) {
      FamilySpec spec{s.a, h.elements, {}};
      for (const auto i : idx) spec.c.push_back(pool[i]);
      out.push_back(std::move(spec));
      if (out.size() > kMaxCatalogSize) throw CapacityError("pattern catalog too large");
      std::size_t pos = t;
      while (pos > 0 && idx[pos - 1] == pool.size() - 1) --pos;
      if (pos == 0) break;
      const std::size_t v = ++idx[pos - 1];
      for (std::size_t j = pos; j < t; ++j) idx[j] = v;
    }
  }
  std::sort(out.begin(), out.end(), [](const FamilySpec& l, const FamilySpec& r) { return l.c < r.c; });
  return out;
}

bool family_membership(const FactoredInteger& n, const FamilySpec& spec) {
  if (gcd_u64(n.value(), spec.modulus) != 1) throw DomainError("family membership requires gcd(n, a) = 1");
  return outside_pattern_matches(n.factors(), spec.modulus, spec.b, spec.c);
}

std::string_view to_string(FamilyChoice choice) {
  switch (choice) {
    case FamilyChoice::Paper:
      return "paper";
    case FamilyChoice::Full:
      return "full";
    case FamilyChoice::Both:
      return "both";
  }
  return "paper";
}

FamilyChoice parse_family_choice(std::string_view text) {
  if (text == "paper") return FamilyChoice::Paper;
  if (text == "full") return FamilyChoice::Full;
  if (text == "both") return FamilyChoice::Both;
  throw DomainError("family choice must be paper, full or both");
}

CensusSeries run_census(std::uint64_t a, std::uint64_t limit, const CensusOptions& options) {
  if (a == 0) throw DomainError("modulus must be positive");
  if (limit < 1 || limit > SpfTable::kMaxLimit) throw CapacityError("census limit outside [1, 2^32-1]");
  validate_checkpoints(options.checkpoints, limit);
  if (options.jobs < 1) throw DomainError("jobs must be at least 1");
  if (options.block_size < 1) throw DomainError("block size must be positive");

  CensusSeries series;
  series.a = a;
  series.family_choice = options.family;

  std::vector<SubgroupTable> tables;
  if (a >= 3) {
    const ResidueGroup group(a, options.phi_cap);
    series.structure = group.structure();
    if (options.track_families) {
      const bool use_full = options.family != FamilyChoice::Paper;
      if (use_full && !group.lattice_available()) {
        throw CapacityError("full family needs phi(a) <= " + std::to_string(options.phi_cap));
      }
      const auto& members = use_full ? group.family().full_family : group.family().paper_family;
      for (const auto& h : members) {
        SubgroupTable table;
        table.member.assign(a, 0);
        for (const auto x : h.elements) table.member[x] = 1;
        table.t = group.structure().two_to_m() / 2 - 1;
        table.paper_form = h.replaced_component.has_value();
        for (auto& spec : pattern_catalog(h, group)) {
          table.patterns.push_back(spec.c);
          table.family_index.push_back(series.families.size());
          series.families.push_back(CensusFamily{h, std::move(spec), table.paper_form});
        }
        tables.push_back(std::move(table));
      }
    }
  }

  const CensusKernel kernel(a, std::move(tables), series.families.size(), options.family == FamilyChoice::Both);
  const auto& cps = options.checkpoints;
  const SegmentedFactorizer factorizer(limit);
  const std::uint64_t block_count = (limit + options.block_size - 1) / options.block_size;

  auto fresh_buckets = [&] {
    std::vector<Bucket> b(cps.size());
    for (auto& x : b) x.families.assign(kernel.family_count(), 0);
    return b;
  };

  const unsigned jobs = static_cast<unsigned>(std::min<std::uint64_t>(options.jobs, block_count));
  std::vector<std::vector<Bucket>> per_worker(jobs);
  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&](unsigned id) {
    auto buckets = fresh_buckets();
    FactorBlock block;
    while (true) {
      const std::uint64_t b = next_block.fetch_add(1);
      if (b >= block_count) break;
      const std::uint64_t lo = 1 + b * options.block_size;
      const std::uint64_t hi = std::min(limit + 1, lo + options.block_size);
      factorizer.fill(lo, hi, block);
      std::size_t cp = static_cast<std::size_t>(std::lower_bound(cps.begin(), cps.end(), lo) - cps.begin());
      for (std::size_t i = 0; i < block.size(); ++i) {
        const std::uint64_t n = lo + i;
        while (cps[cp] < n) ++cp;
        kernel.process(block.factors(i), n, buckets[cp]);
      }
    }
    per_worker[id] = std::move(buckets);
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned id = 0; id < jobs; ++id) threads.emplace_back(worker, id);
  }

  // Integer sums; the merge order cannot affect the result.
  auto total = fresh_buckets();
  for (const auto& buckets : per_worker) {
    for (std::size_t c = 0; c < cps.size(); ++c) {
      total[c].e += buckets[c].e;
      total[c].e_star += buckets[c].e_star;
      total[c].u += buckets[c].u;
      total[c].u_paper += buckets[c].u_paper;
      total[c].union_not_exceptional += buckets[c].union_not_exceptional;
      for (std::size_t f = 0; f < kernel.family_count(); ++f) total[c].families[f] += buckets[c].families[f];
    }
  }
  CensusCheckpoint running;
  running.family_counts.assign(kernel.family_count(), 0);
  for (std::size_t c = 0; c < cps.size(); ++c) {
    running.n = cps[c];
    running.e += total[c].e;
    running.e_star += total[c].e_star;
    running.u += total[c].u;
    running.u_paper += total[c].u_paper;
    running.union_not_exceptional += total[c].union_not_exceptional;
    for (std::size_t f = 0; f < kernel.family_count(); ++f) running.family_counts[f] += total[c].families[f];
    series.checkpoints.push_back(running);
  }
  return series;
}

DecompositionReport decomposition_check(std::uint64_t a, std::uint64_t limit) {
  DecompositionReport report;
  CensusOptions options;
  options.checkpoints = {limit};
  options.track_families = false;
  report.lhs = run_census(a, limit, options).checkpoints.back().e;

  const SpfTable table(std::max<std::uint64_t>(limit, 2));
  for (const auto e : divisors(factorize_trial(a))) {
    DecompositionTerm term{e, 0};
    const std::uint64_t sub = a / e;
    if (sub >= 3) {
      for (std::uint64_t n = 1; n <= limit / e; ++n) {
        if (gcd_u64(n, sub) != 1) continue;
        if (find_witness(factorize(n, table), sub).status == Solubility::Exceptional) ++term.count;
      }
    }
    report.rhs += term.count;
    report.terms.push_back(term);
  }
  return report;
}

std::uint64_t pairwise_intersection_count(const FamilySpec& first, const FamilySpec& second, std::uint64_t limit) {
  if (first.modulus != second.modulus) throw DomainError("families must share a modulus");
  const std::uint64_t a = first.modulus;
  const SegmentedFactorizer factorizer(limit);
  FactorBlock block;
  constexpr std::uint64_t kBlock = 1u << 16;
  std::uint64_t count = 0;
  for (std::uint64_t lo = 1; lo <= limit; lo += kBlock) {
    const std::uint64_t hi = std::min(limit + 1, lo + kBlock);
    factorizer.fill(lo, hi, block);
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (gcd_u64(lo + i, a) != 1) continue;
      const auto f = block.factors(i);
      if (outside_pattern_matches(f, a, first.b, first.c) && outside_pattern_matches(f, a, second.b, second.c)) ++count;
    }
  }
  return count;
}

double fitted_constant(std::uint64_t exceptional_count, std::uint64_t n, std::uint32_t m) {
  if (n < 100) throw DomainError("fit requires N >= 100");
  const double log_n = std::log(static_cast<double>(n));
  const double log_log_n = std::log(log_n);
  const double log_exponent = 1.0 - 1.0 / std::ldexp(1.0, static_cast<int>(m));
  const double loglog_exponent = std::ldexp(1.0, static_cast<int>(m) - 1) - 1.0;
  return static_cast<double>(exceptional_count) * std::pow(log_n, log_exponent) /
         (static_cast<double>(n) * std::pow(log_log_n, loglog_exponent));
}

std::vector<FitPoint> fit_constant(const CensusSeries& series) {
  std::vector<FitPoint> out;
  for (const auto& cp : series.checkpoints) {
    if (cp.n < 100) throw DomainError("fit requires every checkpoint N >= 100, got " + std::to_string(cp.n));
    FitPoint point;
    point.n = cp.n;
    point.c_hat = series.structure ? fitted_constant(cp.e, cp.n, series.structure->m) : 0.0;
    if (!out.empty() && out.back().c_hat != 0.0) {
      point.relative_change = (point.c_hat - out.back().c_hat) / out.back().c_hat;
    }
    out.push_back(point);
  }
  return out;
}

}  // namespace efrac
