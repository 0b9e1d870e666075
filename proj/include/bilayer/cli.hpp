#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bilayer/fieldcases.hpp"
#include "bilayer/susy.hpp"

/// Command-line front end. Verbs: spectrum, densities, envelope, validate, bands.
///
/// Exit codes: 0 ok, 1 I/O, 2 constraint/domain/usage, 3 validation failure.
/// Every failure prints exactly one line "error: <Kind>: <message>" to stderr.
namespace bilayer::cli {

enum ExitCode { kOk = 0, kIoError = 1, kDomainError = 2, kValidationFailed = 3 };

/// Flat JSON config keys (all optional; flags override):
///   case, omega, alpha, D, k, B0, nmax, window [lo, hi], grid_n, delta,
///   format, units, length_scale, out, levels [m...], branch,
///   kx_range [lo, hi], ky_range [lo, hi], samples, lattice_a.
struct RunConfig {
  std::optional<CaseKind> kind;
  CaseParams params;
  int n_max = 5;
  std::optional<std::pair<double, double>> window;
  int grid_n = 4001;
  std::optional<double> delta;
  std::string format = "csv";
  std::string units = "natural";
  std::optional<double> length_scale;  // meters, physical units only
  std::string out;                     // empty: stdout
  std::vector<int> levels = {0, 1};
  Branch branch = Branch::Electron;
  // Unset ranges default to a 0.2/a square centered on K.
  std::optional<std::pair<double, double>> kx_range;
  std::optional<std::pair<double, double>> ky_range;
  int samples = 41;
  double lattice_a = 1.0;
};

/// Throws InvalidConfig on unknown keys or bad types, IoError when the file
/// cannot be read.
RunConfig load_config(const std::string& path);
void apply_config(RunConfig& cfg, const nlohmann::json& j);

/// Fixed 12-significant-digit formatting used by every CSV artifact.
std::string format_number(double v);

nlohmann::json spectrum_to_json(const SpectrumResult& s);
SpectrumResult spectrum_from_json(const nlohmann::json& j);

/// Runs one invocation; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bilayer::cli
