#include "pem/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "pem/errors.hpp"

namespace pem {

CheckReport CheckReport::from_residuals(std::string name,
                                        std::span<const double> residuals,
                                        double tolerance, std::string notes) {
  CheckReport r;
  r.check_name = std::move(name);
  r.samples = static_cast<int>(residuals.size());
  r.tolerance = tolerance;
  double sum = 0.0;
  for (double v : residuals) {
    const double a = std::abs(v);
    r.max_abs_residual = std::max(r.max_abs_residual, a);
    sum += a;
  }
  r.mean_abs_residual = residuals.empty() ? 0.0 : sum / residuals.size();
  r.pass = r.max_abs_residual <= tolerance;
  r.notes = std::move(notes);
  return r;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_csv(std::span<const CheckReport> reports) {
  std::string out =
      "check_name,scenario,samples,tolerance,max_abs_residual,mean_abs_residual,pass\n";
  for (const auto& r : reports) {
    out += r.check_name;
    out += ',';
    out += r.scenario;
    out += ',';
    out += std::to_string(r.samples);
    out += ',';
    out += format_double(r.tolerance);
    out += ',';
    out += format_double(r.max_abs_residual);
    out += ',';
    out += format_double(r.mean_abs_residual);
    out += ',';
    out += r.pass ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string to_plain(std::span<const CheckReport> reports) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof(line), "%-28s %-24s %8s %12s %14s %14s %6s\n", "check",
                "scenario", "samples", "tolerance", "max_resid", "mean_resid", "pass");
  out += line;
  out.append(110, '-');
  out += '\n';
  for (const auto& r : reports) {
    std::snprintf(line, sizeof(line), "%-28s %-24s %8d %12.3g %14.6g %14.6g %6s\n",
                  r.check_name.c_str(), r.scenario.c_str(), r.samples, r.tolerance,
                  r.max_abs_residual, r.mean_abs_residual, r.pass ? "pass" : "FAIL");
    out += line;
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw IoError("write failed for '" + path + "'");
}

}  // namespace pem
