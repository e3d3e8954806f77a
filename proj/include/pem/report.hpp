#pragma once

#include <span>
#include <string>
#include <vector>

namespace pem {

// Residual statistics of a single tolerance check.
struct CheckReport {
  std::string check_name;
  std::string scenario;
  int samples = 0;
  double tolerance = 0.0;
  double max_abs_residual = 0.0;
  double mean_abs_residual = 0.0;
  bool pass = false;
  std::string notes;

  static CheckReport from_residuals(std::string name, std::span<const double> residuals,
                                    double tolerance, std::string notes = "");
};

// Shortest round-trip decimal formatting (deterministic across runs).
std::string format_double(double v);

// CSV with the fixed column order:
// check_name,scenario,samples,tolerance,max_abs_residual,mean_abs_residual,pass
std::string to_csv(std::span<const CheckReport> reports);
// Fixed-width human-readable table.
std::string to_plain(std::span<const CheckReport> reports);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace pem
