#include <CLI11.hpp>
#include <iostream>

#include "swing/cli.hpp"

int main(int argc, char** argv) {
  using namespace swing::cli;
  CLI::App app{"Swing game option pricing, hedging and shortfall risk on a binomial lattice"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "json", capital;
  std::optional<int> decimals;

  auto common = [&](CLI::App* sub) {
    sub->add_option("contract", cfg.input, "Contract JSON file")->required();
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--cap", cfg.cap, "Enumeration cap for exhaustive checks");
    sub->add_option("--decimal", decimals, "Render numbers with this many decimals (display only)")
        ->check(CLI::Range(0, 60));
  };
  auto* price = app.add_subcommand("price", "Price V* and the root value of every aggregated game");
  common(price);
  price->add_flag("--stack", cfg.stack, "Include the value stack at every node");
  auto* strategies = app.add_subcommand("strategies", "Optimal seller and buyer stop tables");
  common(strategies);
  auto* hedge = app.add_subcommand("hedge-simulate", "Wealth of the perfect hedge along every path");
  common(hedge);
  hedge->add_option("--buyer", cfg.buyer, "optimal | immediate | never | levels:k1,k2,...");
  auto* risk = app.add_subcommand("risk", "Shortfall risk R(x) for initial capital x");
  common(risk);
  risk->add_option("--capital", capital, "Initial capital x as a rational string");
  risk->add_flag("--policy", cfg.policy, "Include the optimal stock and infusion controls");
  auto* curve = app.add_subcommand("risk-curve", "The risk curve x -> R(x)");
  common(curve);
  curve->add_option("--samples", cfg.samples, "Number of CSV samples")->check(CLI::Range(2, 100000));
  auto* verify = app.add_subcommand("verify", "Oracle certificates for pricing, hedging and risk");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSpec;
  }
  cfg.command = *parse_command(app.get_subcommands().front()->get_name());
  cfg.format = format == "csv" ? Format::csv : Format::json;
  cfg.decimals = decimals;
  if (!capital.empty()) {
    try {
      cfg.capital = swing::Rational::parse(capital);
    } catch (const std::exception& e) {
      std::cerr << "error: --capital: " << e.what() << '\n';
      return kExitSpec;
    }
  }
  return run(cfg, std::cout, std::cerr);
}
