#include <iostream>

#include <CLI11.hpp>

#include "selmer_flat/cli.hpp"

using selmer_flat::cli::RunConfig;

namespace {

void add_caps(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--trial-division", cfg.factor_limits.trial_division_bound, "trial division bound when factoring")
      ->check(CLI::PositiveNumber);
  sub->add_option("--rho-iterations", cfg.factor_limits.rho_iterations, "Pollard rho iteration cap")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-enum", cfg.enumeration_limits.max_order, "largest group enumerated element by element")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--pretty", cfg.pretty, "human-readable text instead of JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selmer groups, flat cohomology and component groups of elliptic curves"};
  app.require_subcommand(1);
  RunConfig cfg;
  // one string per positional, so inline JSON arrays are not split into lists
  std::string first, second;

  auto* tate = app.add_subcommand("tate", "local data at the bad primes (or at -p)");
  tate->add_option("curve", first, "curve JSON, file or named curve")->required();
  tate->add_option("-p", cfg.p, "a single prime");

  auto* sigma = app.add_subcommand("sigma", "excluded prime set for a curve over a field");
  sigma->add_option("curve", first, "curve")->required();
  sigma->add_option("field", second, "field")->required();

  auto* check = app.add_subcommand("check", "hypotheses for an isogeny of degree n");
  check->add_option("curve", first, "curve")->required();
  check->add_option("field", second, "field")->required();
  check->add_option("-n", cfg.n, "isogeny degree")->required()->check(CLI::PositiveNumber);
  check->add_option("--curveB", cfg.curve_b, "target curve (default: the source curve)");
  check->add_option("--fieldL", cfg.field_l, "field of the Selmer group (default: K)");
  check->add_option("--real", cfg.real, "component behaviour at real places")
      ->check(CLI::IsMember({"unknown", "connected", "disconnected"}));

  auto* predict = app.add_subcommand("predict11a1", "5-Selmer prediction for 11a1 over a field");
  predict->add_option("field", first, "field JSON or file")->required();
  predict->add_option("--base", cfg.base, "base field K when the input is a quadratic extension of K");

  auto* companion = app.add_subcommand("companion", "side conditions for two curves with isomorphic p-torsion");
  companion->add_option("first", first, "first curve")->required();
  companion->add_option("second", second, "second curve")->required();
  companion->add_option("-p", cfg.p, "the prime")->required();

  auto* verify = app.add_subcommand("frobmod-verify", "randomized check of the local index formulas");
  verify->add_option("--seed", cfg.seed, "RNG seed");
  verify->add_option("--iters", cfg.iters, "number of instances")->check(CLI::NonNegativeNumber);
  verify->add_option("--max-order", cfg.max_order, "largest group order")->check(CLI::PositiveNumber);

  for (auto* sub : {tate, sigma, check, predict, companion, verify}) add_caps(sub, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : selmer_flat::cli::kError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  for (const auto* s : {&first, &second})
    if (!s->empty()) cfg.inputs.push_back(*s);
  return selmer_flat::cli::run(cfg, std::cout, std::cerr);
}
