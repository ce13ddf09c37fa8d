#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "efrac/classifier.hpp"
#include "efrac/errors.hpp"
#include "efrac/residue_group.hpp"
#include "efrac/signed_sums.hpp"
#include "efrac/solubility.hpp"
#include "efrac/spf_cache.hpp"

#ifndef EFRAC_VERSION
#define EFRAC_VERSION "0.0.0"
#endif

namespace efrac::cli {

namespace {

Json residue_lists(const std::vector<Subgroup>& groups) {
  Json out = Json::array();
  for (const auto& h : groups) out.push_back(h.elements);
  return out;
}

Json verification_json(const VerificationReport& r, std::string_view part) {
  Json j;
  j["part"] = part;
  j["m"] = r.m;
  j["mode"] = r.mode == VerificationMode::Exhaustive ? "exhaustive" : "randomized";
  j["sequence_length"] = r.sequence_length;
  j["sequences_checked"] = r.sequences_checked;
  if (r.mode == VerificationMode::Randomized) {
    j["trials"] = r.trials;
    j["seed"] = r.seed;
  }
  j["status"] = r.verified() ? "verified" : "counterexample";
  if (r.counterexample) j["counterexample"] = *r.counterexample;
  if (r.minimal_forcing_length) j["minimal_forcing_length"] = *r.minimal_forcing_length;
  j["pigeonhole_bound"] = r.pigeonhole_bound;
  return j;
}

FactoredInteger factor_for_command(std::uint64_t n, const RunConfig& config, std::ostream& err) {
  if (n == 0) throw DomainError("n must be positive");
  if (const auto path = resolve_cache_path(config)) {
    const auto table = load_or_build_cache(*path, std::max<std::uint64_t>(n, 2), err);
    return factorize(n, table);
  }
  return factorize_trial(n);
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output_path) {
    write_atomic(*config.output_path, text);
  } else {
    out << text;
  }
}

Json verify_command(const RunConfig& config, bool& found_counterexample) {
  if (config.lemma != "lemma24") throw DomainError("unknown lemma '" + config.lemma + "'");
  const VerificationConfig vc{config.trials, config.seed};
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["lemma"] = config.lemma;
  j["m"] = config.m;
  Json parts = Json::array();
  if (config.part == "i" || config.part == "both") parts.push_back(verification_json(verify_lemma24_i(config.m, vc), "i"));
  if (config.part == "ii" || config.part == "both") parts.push_back(verification_json(verify_lemma24_ii(config.m, vc), "ii"));
  found_counterexample = false;
  for (const auto& p : parts) found_counterexample = found_counterexample || p["status"] == "counterexample";
  j["status"] = found_counterexample ? "counterexample" : "verified";
  // Surface the first counterexample and the forcing length at top level.
  for (const auto& p : parts) {
    if (p.contains("counterexample") && !j.contains("counterexample")) j["counterexample"] = p["counterexample"];
    if (p.contains("minimal_forcing_length") && !j.contains("minimal_forcing_length")) {
      j["minimal_forcing_length"] = p["minimal_forcing_length"];
    }
  }
  j["parts"] = std::move(parts);
  return j;
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto& cmd = config.subcommand;
  if (cmd == "structure" || cmd == "subgroups") {
    emit(config, render(structure_report(config.a, config.phi_cap, cmd == "subgroups")), out);
    return kExitOk;
  }
  if (cmd == "solve") {
    emit(config, render(solve_report(config.a, factor_for_command(config.n, config, err))), out);
    return kExitOk;
  }
  if (cmd == "count-solutions") {
    emit(config, render(count_report(config.a, config.n)), out);
    return kExitOk;
  }
  if (cmd == "classify") {
    emit(config, render(classify_report(config.a, factor_for_command(config.n, config, err), config.phi_cap)), out);
    return kExitOk;
  }
  if (cmd == "verify") {
    bool counterexample = false;
    const Json j = verify_command(config, counterexample);
    emit(config, render(j), out);
    return counterexample ? kExitCounterexample : kExitOk;
  }
  if (cmd == "census") {
    CensusOptions options;
    options.checkpoints = config.checkpoints.empty() ? std::vector<std::uint64_t>{config.limit} : config.checkpoints;
    options.family = config.family_choice;
    options.jobs = config.jobs;
    options.phi_cap = config.phi_cap;
    const auto series = run_census(config.a, config.limit, options);
    emit(config, config.format == Format::Csv ? census_csv(series) : render(census_report(series, config.seed)), out);
    return kExitOk;
  }
  if (cmd == "fit") {
    if (!config.input_path) throw DomainError("fit needs a census report path");
    std::ifstream in(*config.input_path);
    if (!in) throw std::system_error(errno ? errno : ENOENT, std::generic_category(), "cannot open " + config.input_path->string());
    Json census;
    try {
      census = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw FormatError(std::string("census report is not valid JSON: ") + e.what());
    }
    emit(config, render(fit_report(census)), out);
    return kExitOk;
  }
  err << "efrac: unknown subcommand '" << cmd << "'\n";
  return kExitUsage;
}

}  // namespace

void RunConfig::validate() const {
  if (jobs < 1) throw DomainError("--jobs must be at least 1");
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) throw DomainError("--checkpoints must be strictly ascending");
  }
  if (part != "i" && part != "ii" && part != "both") throw DomainError("--part must be i, ii or both");
  if (subcommand == "census") {
    if (limit == 0) throw DomainError("--limit must be positive");
    if (!checkpoints.empty() && checkpoints.back() != limit) {
      throw DomainError("the last checkpoint must equal --limit");
    }
  }
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    return dispatch(config, out, err);
  } catch (const DomainError& e) {
    err << "efrac: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NotSupportedError& e) {
    err << "efrac: not supported: " << e.what() << "\n";
    return kExitDomain;
  } catch (const CapacityError& e) {
    err << "efrac: capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const FormatError& e) {
    err << "efrac: format: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::system_error& e) {
    err << "efrac: I/O: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::bad_alloc&) {
    err << "efrac: out of memory\n";
    return kExitCapacity;
  }
}

std::optional<std::filesystem::path> resolve_cache_path(const RunConfig& config) {
  if (config.cache_path) return config.cache_path;
  if (const char* dir = std::getenv(kCacheDirEnv); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir) / kCacheFileName;
  }
  return std::nullopt;
}

SpfTable load_or_build_cache(const std::filesystem::path& path, std::uint64_t limit, std::ostream& err) {
  if (std::filesystem::exists(path)) {
    try {
      if (peek_spf_cache_limit(path) >= limit) return read_spf_cache(path);
    } catch (const FormatError& e) {
      err << "efrac: warning: rebuilding cache " << path.string() << ": " << e.what() << "\n";
    }
  }
  auto table = build_spf(limit);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_spf_cache(path, table);
  return table;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno ? errno : EIO, std::generic_category(), "cannot create " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::system_error(EIO, std::generic_category(), "write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

Json structure_report(std::uint64_t a, std::uint64_t phi_cap, bool include_all_subgroups) {
  const ResidueGroup group(a, phi_cap);
  const auto& s = group.structure();
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["a"] = a;
  j["gamma0"] = s.gamma0;
  Json primes = Json::array(), exponents = Json::array();
  for (const auto& pp : s.factorization.factors()) {
    primes.push_back(pp.prime);
    exponents.push_back(pp.exponent);
  }
  j["primes"] = std::move(primes);
  j["exponents"] = std::move(exponents);
  j["phi"] = s.phi;
  j["delta"] = s.delta;
  j["m"] = s.m;
  j["d"] = s.d;
  j["paper_family"] = residue_lists(group.family().paper_family);
  j["full_family"] = group.lattice_available() ? residue_lists(group.family().full_family) : Json(nullptr);
  if (include_all_subgroups) {
    const auto all = enumerate_subgroups(a, phi_cap);
    j["subgroup_count"] = all.size();
    j["subgroups"] = residue_lists(all);
  }
  return j;
}

Json solve_report(std::uint64_t a, const FactoredInteger& n) {
  const auto reduced = reduce_instance(n.value(), a);
  // n' = n / gcd(a, n) keeps the primes of n with reduced exponents.
  std::vector<PrimePower> kept;
  for (const auto& [p, e] : n.factors()) {
    std::uint32_t v = 0;
    for (std::uint64_t rest = reduced.n; rest % p == 0; rest /= p) ++v;
    if (v > 0) kept.push_back({p, v});
  }
  const auto result = find_witness(FactoredInteger(reduced.n, std::move(kept)), reduced.a);
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["a"] = a;
  j["n"] = n.value();
  j["status"] = result.status == Solubility::Soluble ? "Soluble" : "Exceptional";
  j["witness"] = result.witness ? Json{{"u", result.witness->u}, {"v", result.witness->v}} : Json(nullptr);
  j["solution"] = result.solution ? Json{{"x", result.solution->x}, {"y", result.solution->y}} : Json(nullptr);
  j["reduced"] = Json{{"a'", reduced.a}, {"n'", reduced.n}};
  return j;
}

Json count_report(std::uint64_t a, std::uint64_t n) {
  const auto count = count_solutions(n, a);
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["a"] = a;
  j["n"] = n;
  j["unordered"] = count.unordered;
  j["ordered"] = count.ordered;
  return j;
}

Json classify_report(std::uint64_t a, const FactoredInteger& n, std::uint64_t phi_cap) {
  const ResidueGroup group(a, phi_cap);
  const auto profile = residue_profile(n, group.structure());
  Json counts = Json::array();
  for (const auto& [r, c] : profile.counts) counts.push_back(Json{{"residue", r}, {"count", c}});

  auto verdict_json = [](const StructuralVerdict& v) {
    Json j;
    j["verdict"] = to_string(v.verdict);
    j["reason"] = v.reason ? Json(to_string(*v.reason)) : Json(nullptr);
    return j;
  };

  Json j;
  j["schema_version"] = kSchemaVersion;
  j["a"] = a;
  j["n"] = n.value();
  j["profile"] = Json{{"counts", std::move(counts)}, {"W", profile.w}, {"total", profile.total()}};
  j["filter"] = verdict_json(lemma28_filter(profile, group));
  Json per_h = Json::array();
  for (const auto& h : group.family().full_family) {
    const auto v = classify_structural(n, group, h);
    Json entry;
    entry["subgroup"] = h.elements;
    entry["verdict"] = to_string(v.verdict);
    entry["reason"] = v.reason ? Json(to_string(*v.reason)) : Json(nullptr);
    entry["t"] = v.t;
    per_h.push_back(std::move(entry));
  }
  j["per_H"] = std::move(per_h);
  j["oracle"] = is_exceptional(n, a);
  return j;
}

Json census_report(const CensusSeries& series, std::uint64_t seed) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["a"] = series.a;
  if (series.structure) {
    const auto& s = *series.structure;
    j["structure"] = Json{{"gamma0", s.gamma0}, {"phi", s.phi}, {"delta", s.delta}, {"m", s.m}, {"d", s.d}};
  } else {
    j["structure"] = nullptr;
  }
  j["family_choice"] = to_string(series.family_choice);
  const bool both = series.family_choice == FamilyChoice::Both;
  Json checkpoints = Json::array();
  for (const auto& cp : series.checkpoints) {
    Json c;
    c["N"] = cp.n;
    c["E"] = cp.e;
    c["E_star"] = cp.e_star;
    c["U"] = cp.u;
    if (both) c["U_paper"] = cp.u_paper;
    c["U_not_exceptional"] = cp.union_not_exceptional;
    Json families = Json::array();
    for (std::size_t f = 0; f < series.families.size(); ++f) {
      families.push_back(Json{{"H", series.families[f].spec.b},
                              {"C", series.families[f].spec.c},
                              {"paper_form", series.families[f].paper_form},
                              {"count", cp.family_counts[f]}});
    }
    c["families"] = std::move(families);
    c["residual"] = cp.residual();
    c["residual_fraction"] = cp.residual_fraction();
    if (series.structure && cp.n >= 100) {
      c["C_hat"] = fitted_constant(cp.e, cp.n, series.structure->m);
    } else {
      c["C_hat"] = nullptr;
    }
    checkpoints.push_back(std::move(c));
  }
  j["checkpoints"] = std::move(checkpoints);
  j["meta"] = Json{{"seed", seed}, {"version", EFRAC_VERSION}, {"log_base", "e"}};
  return j;
}

std::string census_csv(const CensusSeries& series) {
  std::ostringstream os;
  os.precision(17);
  os << "N,E,E_star,U,U_paper,U_not_exceptional,residual,residual_fraction,C_hat";
  for (std::size_t f = 0; f < series.families.size(); ++f) os << ",family_" << f;
  os << "\n";
  for (const auto& cp : series.checkpoints) {
    os << cp.n << ',' << cp.e << ',' << cp.e_star << ',' << cp.u << ',';
    if (series.family_choice == FamilyChoice::Both) os << cp.u_paper;
    os << ',' << cp.union_not_exceptional << ',' << cp.residual() << ',' << cp.residual_fraction() << ',';
    if (series.structure && cp.n >= 100) os << fitted_constant(cp.e, cp.n, series.structure->m);
    for (const auto count : cp.family_counts) os << ',' << count;
    os << "\n";
  }
  return os.str();
}

void check_schema_version(const Json& report) {
  if (!report.is_object() || !report.contains("schema_version") || !report["schema_version"].is_string()) {
    throw FormatError("report has no schema_version");
  }
  const auto version = report["schema_version"].get<std::string>();
  if (version.substr(0, version.find('.')) != "1") throw FormatError("unsupported schema_version " + version);
}

Json fit_report(const Json& census) {
  check_schema_version(census);
  try {
    const auto& structure = census.at("structure");
    if (structure.is_null()) throw DomainError("fit needs a modulus a >= 3");
    CensusSeries series;
    series.a = census.at("a").get<std::uint64_t>();
    series.structure = compute_structure(series.a);
    if (structure.at("m").get<std::uint32_t>() != series.structure->m) throw FormatError("structure does not match a");
    for (const auto& c : census.at("checkpoints")) {
      CensusCheckpoint cp;
      cp.n = c.at("N").get<std::uint64_t>();
      cp.e = c.at("E").get<std::uint64_t>();
      series.checkpoints.push_back(cp);
    }
    Json points = Json::array();
    for (const auto& p : fit_constant(series)) {
      points.push_back(Json{{"N", p.n},
                            {"C_hat", p.c_hat},
                            {"relative_change", p.relative_change ? Json(*p.relative_change) : Json(nullptr)}});
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["a"] = series.a;
    j["m"] = series.structure->m;
    j["log_base"] = "e";
    j["points"] = std::move(points);
    return j;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed census report: ") + e.what());
  }
}

}  // namespace efrac::cli
