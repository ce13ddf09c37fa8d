#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"
#include "efrac/errors.hpp"

using efrac::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"Binary Egyptian fraction toolkit: solubility, subgroup structure, census."};
  app.require_subcommand(1);
  RunConfig config;
  std::string cache, out, family = "paper", format = "json";

  auto add_output = [&](CLI::App* sub) { sub->add_option("--out,-o", out, "Write the report here instead of stdout"); };

  for (const char* name : {"structure", "subgroups"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "structure" ? "Invariants and -1-avoiding families of (Z/aZ)*"
                                                                          : "Structure plus every subgroup of (Z/aZ)*");
    sub->add_option("a", config.a, "Modulus")->required();
    sub->add_option("--phi-cap", config.phi_cap, "Largest phi(a) for lattice enumeration");
    add_output(sub);
  }
  for (const char* name : {"solve", "count-solutions", "classify"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "solve"             ? "Decide a/n = 1/x + 1/y with a witness"
                                         : std::string(name) == "classify"        ? "Structural verdicts for n"
                                                                                  : "Count solutions by scanning x");
    sub->add_option("a", config.a, "Numerator")->required();
    sub->add_option("n", config.n, "Denominator")->required();
    if (std::string(name) != "count-solutions") sub->add_option("--cache", cache, "Smallest-prime-factor cache file");
    if (std::string(name) == "classify") sub->add_option("--phi-cap", config.phi_cap, "Largest phi(a) for lattice enumeration");
    add_output(sub);
  }

  auto* verify = app.add_subcommand("verify", "Check the signed-sum lemma");
  verify->add_option("lemma", config.lemma, "Statement to check: lemma24")->required();
  verify->add_option("--m", config.m, "Exponent m, 1..5")->required();
  verify->add_option("--part", config.part, "i, ii or both")->check(CLI::IsMember({"i", "ii", "both"}));
  verify->add_option("--trials", config.trials, "Random trials for m >= 4");
  verify->add_option("--seed", config.seed, "Seed for random trials");
  add_output(verify);

  auto* census = app.add_subcommand("census", "Count exceptional n up to a limit");
  census->add_option("a", config.a, "Modulus")->required();
  census->add_option("--limit", config.limit, "Largest n")->required();
  census->add_option("--checkpoints", config.checkpoints, "Ascending checkpoints ending at --limit")->delimiter(',');
  census->add_option("--family", family, "paper, full or both")->check(CLI::IsMember({"paper", "full", "both"}));
  census->add_option("--jobs,-j", config.jobs, "Worker threads")->check(CLI::PositiveNumber);
  census->add_option("--seed", config.seed, "Recorded in meta");
  census->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  census->add_option("--phi-cap", config.phi_cap, "Largest phi(a) for lattice enumeration");
  add_output(census);

  auto* fit = app.add_subcommand("fit", "Fitted constant from a census report");
  std::string input;
  fit->add_option("census", input, "Census JSON report")->required();
  add_output(fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : efrac::cli::kExitUsage;
  }

  config.subcommand = app.get_subcommands().front()->get_name();
  if (!cache.empty()) config.cache_path = cache;
  if (!out.empty()) config.output_path = out;
  if (!input.empty()) config.input_path = input;
  config.format = format == "csv" ? efrac::cli::Format::Csv : efrac::cli::Format::Json;
  try {
    config.family_choice = efrac::parse_family_choice(family);
  } catch (const efrac::DomainError& e) {
    std::cerr << "efrac: " << e.what() << "\n";
    return efrac::cli::kExitUsage;
  }
  return efrac::cli::run_command(config, std::cout, std::cerr);
}
