#include <CLI11.hpp>
#include <iostream>

#include "pem/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "pemrun: construct Poincare-Einstein / ambient metrics from Einstein factors "
      "and run tolerance-checked curvature verifications"};

  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::string tol_tier = "analytic";
  std::string out_path;
  std::string format;
  bool list_builtins = false;

  app.add_option("--scenario", scenario, "scenario file path or builtin name");
  app.add_option("--seed", seed, "sample plan seed (overrides the scenario)");
  app.add_option("--samples", samples, "sample count (overrides the scenario)");
  app.add_option("--tol-tier", tol_tier, "tolerance tier: analytic | fd")
      ->check(CLI::IsMember({"analytic", "fd"}));
  app.add_option("--out", out_path, "report output path (overrides the scenario)");
  app.add_option("--format", format, "report format: csv | plain")
      ->check(CLI::IsMember({"csv", "plain"}));
  app.add_flag("--list-builtins", list_builtins, "list builtin scenarios and exit");

  CLI11_PARSE(app, argc, argv);

  if (list_builtins) {
    for (const auto& [name, _] : pem::builtin_scenarios()) {
      std::cout << name << "\n";
    }
    return 0;
  }
  if (scenario.empty()) {
    std::cerr << "error: --scenario is required (or use --list-builtins)\n";
    return 2;
  }

  try {
    pem::ScenarioConfig cfg = pem::load_scenario(scenario);
    if (seed) cfg.seed = *seed;
    if (samples) cfg.samples = *samples;
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!format.empty()) cfg.format = format;

    const pem::TolTier tier = (tol_tier == "fd") ? pem::TolTier::finite_difference
                                                 : pem::TolTier::analytic;
    auto reports = pem::run_scenario(cfg, tier);
    std::cout << pem::to_plain(reports);
    pem::emit_report(reports, cfg.format, cfg.out_path);
    if (!cfg.out_path.empty()) {
      std::cout << "report written to " << cfg.out_path << " (" << cfg.format << ")\n";
    }
    return pem::all_pass(reports) ? 0 : 1;
  } catch (const pem::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
