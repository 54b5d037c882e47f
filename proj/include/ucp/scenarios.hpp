#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ucp/field.hpp"
#include "ucp/operator.hpp"

namespace ucp {

struct GridSpec {
  int n = 257;
  double half_width = 2.0;
  Point center;

  Grid2D make() const { return make_grid(center, half_width, n); }
};

struct Scenario {
  std::string name;
  std::string preset;  ///< operator preset, or "tables"
  std::map<std::string, double> params;
  EllipticOperator op;
  ScalarFn u;    ///< exact solution, empty when none
  ScalarFn phi;  ///< positive multiplier, empty when none
  GridSpec grid;
  std::map<std::string, double> expected;  ///< e.g. "vanishing_order", "lambda"
  std::optional<double> v_plus_max, v_minus_max;  ///< tabulated potential split
  std::optional<double> solution_residual;        ///< max|𝓛u| / max|u| on interior nodes
  std::optional<double> multiplier_residual;
  std::vector<std::string> warnings;
};

/// Names of the operator presets in a stable order.
std::vector<std::string> builtin_names();

/// Positional parameter names of a preset (e.g. decaying_negative → mu1, eps1).
std::vector<std::string> builtin_parameters(const std::string& name);

/// Presets: harmonic(n), cosh(k), decaying_negative(mu1, eps1), variable_A(mu0, eps0),
/// drift(mu2, eps2), laplacian, constant_A(d1, d2, theta), bump(delta). Missing parameters take
/// defaults. Throws ValidationError for unknown names and parameters outside the hypothesis class.
Scenario builtin(const std::string& name, const std::map<std::string, double>& params = {});
Scenario builtin(const std::string& name, const std::vector<double>& positional);

/// Reads a scenario file; table paths are relative to the file. Throws SchemaError with a JSON
/// pointer on schema violations. Residuals above 1e−3 are recorded as warnings.
Scenario load_scenario(const std::filesystem::path& path);

/// A scenario file path, or "name" / "name:p1,p2,…" for a preset.
Scenario parse_scenario_arg(const std::string& arg);

/// Fills solution_residual and multiplier_residual on the scenario grid.
void check_residuals(Scenario& s);

}  // namespace ucp
