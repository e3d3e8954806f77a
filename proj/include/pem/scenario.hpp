#pragma once

#include <map>
#include <optional>
#include <vector>

#include "pem/catalog.hpp"
#include "pem/report.hpp"

namespace pem {

enum class TolTier { analytic, finite_difference };

struct CheckRequest {
  std::string name;
  std::optional<double> tol;  // overrides the tier default
};

// A validated scenario: factor specs by catalog name, construction chain,
// checks with tolerance overrides, sample plan and output destination.
struct ScenarioConfig {
  std::string name = "unnamed";
  std::uint64_t seed = 0;
  int samples = 20;

  std::map<std::string, std::string> factor_names;  // g1, g2, g0, list
  std::vector<std::string> chain;
  std::optional<Rational> mu_override;
  double dilation_alpha = 4.0;
  std::vector<CheckRequest> checks;
  std::map<std::string, std::string> expects;

  std::string out_path;
  std::string format = "csv";

  // resolved factors
  std::optional<EinsteinSpec> g1, g2, g0;
  std::vector<EinsteinSpec> recursion_list;
};

// Parse and validate; ParseError carries line/column, ValidationError lists
// every problem found (not just the first).
ScenarioConfig load_scenario_text(const std::string& text,
                                  const std::string& origin = "<string>");
ScenarioConfig load_scenario(const std::string& path_or_builtin);

const std::map<std::string, std::string>& builtin_scenarios();

// Default tolerance for a check under a tier; 0 means exact.
double default_tolerance(const std::string& check, TolTier tier);

std::vector<CheckReport> run_scenario(const ScenarioConfig& config,
                                      TolTier tier = TolTier::analytic);

// CSV is bit-exact per the verifier column contract; plain is a fixed-width
// table. Empty path writes nothing.
void emit_report(std::span<const CheckReport> reports, const std::string& format,
                 const std::string& path);

bool all_pass(std::span<const CheckReport> reports);

}  // namespace pem
