// Acceptance suite. Prints one PASS/FAIL line per criterion; exit status is
// nonzero when any selected criterion fails.
//
//   efrac_acceptance                 all criteria
//   efrac_acceptance --criterion 7   one criterion

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "efrac/census.hpp"
#include "efrac/classifier.hpp"
#include "efrac/signed_sums.hpp"
#include "efrac/solubility.hpp"

using namespace efrac;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <typename... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

Outcome witness_vs_count() {
  constexpr std::uint64_t kN = 100'000;
  const auto t0 = Clock::now();
  const SpfTable table(kN);
  std::uint64_t checked = 0, mismatches = 0;
  for (std::uint64_t a = 3; a <= 30; ++a) {
    for (std::uint64_t n = 1; n <= kN; ++n) {
      if (gcd_u64(n, a) != 1) continue;
      const bool witness = find_witness(factorize(n, table), a).status == Solubility::Soluble;
      const bool counted = count_solutions(n, a).unordered > 0;
      mismatches += witness != counted;
      ++checked;
    }
  }
  const double sec = seconds_since(t0);
  return {mismatches == 0 && sec < 120.0,
          format("%llu pairs, %llu mismatches, %.1fs (limit 120s)", static_cast<unsigned long long>(checked),
                 static_cast<unsigned long long>(mismatches), sec)};
}

Outcome e1_e2_empty() {
  constexpr std::uint64_t kN = 1'000'000;
  const SpfTable table(kN);
  std::uint64_t exceptions = 0;
  for (std::uint64_t a : {1u, 2u}) {
    for (std::uint64_t n = 1; n <= kN; ++n) exceptions += is_exceptional(n, a, table);
  }
  return {exceptions == 0, format("%llu exceptions for a in {1,2}, n <= 10^6", static_cast<unsigned long long>(exceptions))};
}

Outcome decomposition() {
  std::ostringstream os;
  bool ok = true;
  for (std::uint64_t a : {4u, 6u, 12u, 15u}) {
    const auto r = decomposition_check(a, 100'000);
    ok = ok && r.holds();
    os << "a=" << a << ": " << r.lhs << (r.holds() ? " == " : " != ") << r.rhs << "; ";
  }
  return {ok, os.str()};
}

Outcome signed_sum_lemma() {
  const auto t0 = Clock::now();
  std::ostringstream os;
  bool ok = true;
  const VerificationConfig config{10'000, VerificationConfig{}.seed};
  for (std::uint32_t m = 1; m <= 5; ++m) {
    const auto i = verify_lemma24_i(m, config);
    const auto ii = verify_lemma24_ii(m, config);
    ok = ok && i.verified() && ii.verified();
    if (m <= 3) {
      const bool forcing = i.minimal_forcing_length && *i.minimal_forcing_length == (1u << (m - 1)) &&
                           *i.minimal_forcing_length <= i.pigeonhole_bound;
      ok = ok && forcing && i.mode == VerificationMode::Exhaustive && ii.mode == VerificationMode::Exhaustive;
      os << "m=" << m << " forcing=" << (i.minimal_forcing_length ? std::to_string(*i.minimal_forcing_length) : "?")
         << "; ";
    } else {
      ok = ok && i.trials == 10'000 && ii.trials == 10'000 && i.sequence_length <= i.pigeonhole_bound;
      os << "m=" << m << " " << i.sequences_checked << "+" << ii.sequences_checked << " trials; ";
    }
  }
  const double sec = seconds_since(t0);
  ok = ok && sec < 60.0;
  os << format("%.1fs (limit 60s)", sec);
  return {ok, os.str()};
}

Outcome smooth_inclusion() {
  constexpr std::uint64_t kN = 1'000'000;
  const SpfTable table(kN);
  std::uint64_t smooth = 0, violations = 0;
  for (std::uint64_t a : {3u, 5u, 7u, 8u}) {
    const ResidueGroup group(a);
    for (const auto& h : group.family().full_family) {
      std::vector<std::uint8_t> member(a, 0);
      for (const auto x : h.elements) member[x] = 1;
      for (std::uint64_t n = 1; n <= kN; ++n) {
        const auto f = factorize(n, table);
        bool in_h = true;
        for (const auto& pp : f.factors()) in_h = in_h && member[pp.prime % a];
        if (!in_h) continue;
        ++smooth;
        violations += !is_exceptional(f, a);
      }
    }
  }
  return {violations == 0 && smooth > 0, format("%llu H-smooth n checked, %llu violations",
                                                 static_cast<unsigned long long>(smooth),
                                                 static_cast<unsigned long long>(violations))};
}

Outcome classifier_soundness() {
  constexpr std::uint64_t kN = 1'000'000;
  const SpfTable table(kN);
  std::uint64_t certified = 0, disagreements = 0;
  for (std::uint64_t a : {5u, 7u, 9u, 13u}) {
    const ResidueGroup group(a);
    for (std::uint64_t n = 1; n <= kN; ++n) {
      if (gcd_u64(n, a) != 1) continue;
      const auto f = factorize(n, table);
      const bool exceptional = find_witness(f, a).status == Solubility::Exceptional;
      auto check = [&](const StructuralVerdict& v) {
        if (!v.certified()) return;
        ++certified;
        disagreements += (v.verdict == Verdict::CertifiedExceptional) != exceptional;
      };
      check(lemma28_filter(residue_profile(f, group.structure()), group));
      for (const auto& h : group.family().full_family) check(classify_structural(f, group, h));
    }
  }
  return {disagreements == 0 && certified > 0,
          format("%llu certified verdicts, %llu disagreements", static_cast<unsigned long long>(certified),
                 static_cast<unsigned long long>(disagreements))};
}

Outcome same_h_disjoint() {
  const auto count = pairwise_intersection_count({5, {1}, {2}}, {5, {1}, {3}}, 1'000'000);
  return {count == 0, format("|A({1},[2]) n A({1},[3])| up to 10^6 = %llu", static_cast<unsigned long long>(count))};
}

CensusSeries census_a5(unsigned jobs) {
  CensusOptions options;
  options.checkpoints = {10'000, 100'000, 1'000'000, 10'000'000};
  options.family = FamilyChoice::Both;
  options.jobs = jobs;
  return run_census(5, 10'000'000, options);
}

Outcome union_containment() {
  const auto series = census_a5(1);
  std::ostringstream os;
  bool contained = true;
  for (const auto& cp : series.checkpoints) {
    contained = contained && cp.union_not_exceptional == 0 && cp.u <= cp.e_star;
    os << format("N=%llu rf=%.4f; ", static_cast<unsigned long long>(cp.n), cp.residual_fraction());
  }
  const auto& cps = series.checkpoints;
  const double prev = cps[cps.size() - 2].residual_fraction(), last = cps.back().residual_fraction();
  const bool trend = last <= prev + 0.02;
  os << "U in E*: " << (contained ? "yes" : "no") << ", last step " << format("%+.4f", last - prev);
  return {contained && trend, os.str()};
}

Outcome fit_stability() {
  const auto fit = fit_constant(census_a5(1));
  std::ostringstream os;
  for (const auto& p : fit) os << format("N=%llu C=%.5f; ", static_cast<unsigned long long>(p.n), p.c_hat);
  const double change = std::fabs(*fit.back().relative_change);
  const bool ok = fit.size() == 4 && fit[2].n == 1'000'000 && fit[3].n == 10'000'000 && change < 0.30;
  os << format("|change 10^6 -> 10^7| = %.2f%% (limit 30%%)", 100.0 * change);
  return {ok, os.str()};
}

Outcome determinism() {
  auto timed = [](unsigned jobs, double& sec) {
    const auto t0 = Clock::now();
    const auto text = cli::census_report(census_a5(jobs), VerificationConfig{}.seed).dump(2);
    sec = seconds_since(t0);
    return text;
  };
  double s1 = 0, s8 = 0;
  const auto one = timed(1, s1);
  const auto eight = timed(8, s8);
  const bool same = one == eight;
  return {same && s1 < 60.0 && s8 < 60.0,
          format("byte-identical: %s (%zu bytes), 1 job %.1fs, 8 jobs %.1fs (limit 60s)", same ? "yes" : "no",
                 one.size(), s1, s8)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"witness search agrees with solution count (n <= 10^5, 3 <= a <= 30)", witness_vs_count},
      {"E_1 and E_2 are empty up to 10^6", e1_e2_empty},
      {"gcd decomposition of E_a(10^5) for a in {4, 6, 12, 15}", decomposition},
      {"signed-sum lemma, m = 1..5", signed_sum_lemma},
      {"H-smooth n <= 10^6 are exceptional for a in {3, 5, 7, 8}", smooth_inclusion},
      {"classifier soundness for a in {5, 7, 9, 13}, n <= 10^6", classifier_soundness},
      {"same-H pattern families are disjoint (a = 5, N = 10^6)", same_h_disjoint},
      {"U within E* and residual trend (a = 5, N = 10^7)", union_containment},
      {"fitted constant stability (a = 5)", fit_stability},
      {"census determinism across 1 and 8 jobs (a = 5, N = 10^7)", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::strtoul(argv[++i], nullptr, 10));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion K]...\n", argv[0]);
      return 64;
    }
  }
  if (selected.empty()) {
    for (std::size_t k = 1; k <= criteria().size(); ++k) selected.push_back(k);
  }
  int failures = 0;
  for (const auto k : selected) {
    if (k < 1 || k > criteria().size()) {
      std::fprintf(stderr, "no criterion %zu\n", k);
      return 64;
    }
    const auto& c = criteria()[k - 1];
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s criterion %zu: %s -- %s\n", outcome.pass ? "PASS" : "FAIL", k, c.name, outcome.detail.c_str());
    std::fflush(stdout);
    failures += !outcome.pass;
  }
  return failures == 0 ? 0 : 1;
}
