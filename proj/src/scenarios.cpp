#include "ucp/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ucp/error.hpp"
#include "ucp/io.hpp"

namespace ucp {

namespace {

using nlohmann::json;

double bracket2(Point z) { return 1.0 + z.x * z.x + z.y * z.y; }

struct Preset {
  std::vector<std::string> names;
  std::vector<double> defaults;
};

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> table = {
      {"harmonic", {{"n"}, {3}}},
      {"cosh", {{"k"}, {1}}},
      {"decaying_negative", {{"mu1", "eps1"}, {1, 1}}},
      {"variable_A", {{"mu0", "eps0"}, {0.5, 0.5}}},
      {"drift", {{"mu2", "eps2"}, {1, 1}}},
      {"laplacian", {{}, {}}},
      {"constant_A", {{"d1", "d2", "theta"}, {4, 1, 0}}},
      {"bump", {{"delta"}, {0.01}}},
  };
  return table;
}

std::map<std::string, double> resolve(const std::string& name,
                                      const std::map<std::string, double>& given) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ValidationError("unknown scenario preset '" + name + "'");
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < it->second.names.size(); ++i)
    out[it->second.names[i]] = it->second.defaults[i];
  for (const auto& [k, v] : given) {
    if (!out.count(k))
      throw ValidationError("preset '" + name + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw ValidationError("parameter '" + k + "' must be finite");
    out[k] = v;
  }
  return out;
}

/// Re zⁿ by repeated complex multiplication.
double re_power(Point z, int n) {
  cplx p(1.0, 0.0);
  for (int i = 0; i < n; ++i) p *= cplx(z.x, z.y);
  return p.real();
}

/// div(A∇f) by nested centered differences (step 1e−3).
double div_a_grad(const EllipticOperator& op, const ScalarFn& f, Point z) {
  const double e = 1e-3;
  auto flux = [&](Point p) {
    const double fx = (f({p.x + e, p.y}) - f({p.x - e, p.y})) / (2 * e);
    const double fy = (f({p.x, p.y + e}) - f({p.x, p.y - e})) / (2 * e);
    return op.A(p) * Vec2{fx, fy};
  };
  return (flux({z.x + e, z.y}).x - flux({z.x - e, z.y}).x) / (2 * e) +
         (flux({z.x, z.y + e}).y - flux({z.x, z.y - e}).y) / (2 * e);
}

Scenario make_builtin(const std::string& name, const std::map<std::string, double>& p) {
  Scenario s;
  s.name = name;
  s.preset = name;
  s.params = p;
  StructureParams sp;
  if (name == "harmonic") {
    const double nd = p.at("n");
    if (!(nd >= 0 && nd == std::floor(nd) && nd <= 64))
      throw ValidationError("harmonic: n must be an integer in [0, 64]");
    const int n = static_cast<int>(nd);
    s.u = [n](Point z) { return re_power(z, n); };
    s.phi = [](Point) { return 1.0; };
    s.expected["vanishing_order"] = n;
  } else if (name == "cosh") {
    const double k = p.at("k");
    if (!(k > 0)) throw ValidationError("cosh: k must be positive");
    sp.mu1 = k;
    sp.potential_class = PotentialClass::Bounded;
    s.op = s.op.with_V([k](Point) { return k * k; });
    s.u = [k](Point z) { return std::sinh(k * z.x); };
    s.phi = [k](Point z) { return std::cosh(k * z.x); };
    s.expected["vanishing_order"] = 1;
  } else if (name == "decaying_negative") {
    const double mu1 = p.at("mu1"), eps1 = p.at("eps1");
    if (!(mu1 > 0 && eps1 > 0)) throw ValidationError("decaying_negative: μ₁, ε₁ must be positive");
    const double a = 2 * eps1;
    const double kappa = 0.9 * std::min(mu1 * mu1, 1.0) / (a * std::max(2.0, a));
    const ScalarFn phi = [kappa, a](Point z) { return 1.0 + kappa * std::pow(bracket2(z), -a / 2); };
    const EllipticOperator lap;
    s.phi = phi;
    s.op = s.op.with_V([phi, lap](Point z) { return div_a_grad(lap, phi, z) / phi(z); });
    sp.mu1 = mu1;
    sp.eps1 = eps1;
    s.expected["kappa"] = kappa;
  } else if (name == "variable_A") {
    const double mu0 = p.at("mu0"), eps0 = p.at("eps0");
    if (!(mu0 > 0 && eps0 > 0)) throw ValidationError("variable_A: μ₀, ε₀ must be positive");
    const double c = 1.0 / std::hypot(std::max(1.0, eps0), (1 + eps0) / 2);
    const double spread = std::sqrt(1.25) * mu0 * c;  // eigenvalues of M are ±√(5/4)
    if (!(spread < 1)) throw ValidationError("variable_A: μ₀ too large for ellipticity");
    const ScalarFn prof = [c, eps0](Point z) {
      return c * z.x * std::pow(bracket2(z), -(1 + eps0) / 2);
    };
    s.op = s.op.with_A([prof, mu0](Point z) { return 1 + mu0 * prof(z); },
                       [prof, mu0](Point z) { return 0.5 * mu0 * prof(z); },
                       [prof, mu0](Point z) { return 1 - mu0 * prof(z); });
    s.phi = [](Point) { return 1.0; };
    sp.lambda = 1 - spread;
    sp.mu0 = mu0;
    sp.eps0 = eps0;
    s.expected["lambda"] = sp.lambda;
  } else if (name == "drift") {
    const double mu2 = p.at("mu2"), eps2 = p.at("eps2");
    if (!(mu2 > 0 && eps2 > 0)) throw ValidationError("drift: μ₂, ε₂ must be positive");
    s.op = s.op.with_W([mu2, eps2](Point z) {
      const double amp = 0.9 * mu2 * std::pow(bracket2(z), -(1 + eps2) / 2);
      return Vec2{amp * std::cos(z.y), amp * std::sin(z.y)};
    });
    s.phi = [](Point) { return 1.0; };
    sp.mu2 = mu2;
    sp.eps2 = eps2;
  } else if (name == "laplacian") {
    s.phi = [](Point) { return 1.0; };
  } else if (name == "constant_A") {
    const double d1 = p.at("d1"), d2 = p.at("d2"), th = p.at("theta");
    if (!(d1 > 0 && d2 > 0)) throw ValidationError("constant_A: eigenvalues must be positive");
    const double c = std::cos(th), sn = std::sin(th);
    const Mat2 a{d1 * c * c + d2 * sn * sn, (d1 - d2) * c * sn, (d1 - d2) * c * sn,
                 d1 * sn * sn + d2 * c * c};
    sp.lambda = std::min({d1, d2, 1 / d1, 1 / d2});
    s.op = EllipticOperator::constant(a, sp);
    // u = Re(Q⁻¹z)³ with Q² = A solves div(A∇u) = 0
    const Mat2 qi = sqrt_spd(a).inverse();
    s.u = [qi](Point z) { return re_power(qi * z, 3); };
    s.phi = [](Point) { return 1.0; };
    s.expected["vanishing_order"] = 3;
  } else if (name == "bump") {
    const double delta = p.at("delta");
    const double peak = std::exp(-0.5) / std::sqrt(2.0);  // max |x e^{−|z|²}|
    if (!(std::abs(delta) * peak < 1)) throw ValidationError("bump: |δ| too large for ellipticity");
    const ScalarFn diag = [delta](Point z) {
      return 1 + delta * z.x * std::exp(-(z.x * z.x + z.y * z.y));
    };
    s.op = s.op.with_A(diag, [](Point) { return 0.0; }, diag);
    s.phi = [](Point) { return 1.0; };
    sp.lambda = std::min(1 - std::abs(delta) * peak, 1 / (1 + std::abs(delta) * peak));
  }
  s.op = s.op.with_params(sp);
  s.expected["lambda"] = sp.lambda;
  return s;
}

std::string pointer(const std::string& base, const std::string& key) { return base + "/" + key; }

double number_at(const json& j, const std::string& key, const std::string& base) {
  if (!j.contains(key)) throw SchemaError(pointer(base, key), "missing");
  if (!j.at(key).is_number()) throw SchemaError(pointer(base, key), "expected a number");
  return j.at(key).get<double>();
}

std::map<std::string, double> params_of(const json& j, const std::string& base) {
  std::map<std::string, double> out;
  if (!j.contains("params")) return out;
  const json& p = j.at("params");
  if (!p.is_object()) throw SchemaError(base + "/params", "expected an object");
  for (const auto& [k, v] : p.items()) {
    if (!v.is_number()) throw SchemaError(base + "/params/" + k, "expected a number");
    out[k] = v.get<double>();
  }
  return out;
}

/// Solution and multiplier presets.
ScalarFn function_preset(const std::string& name, const std::map<std::string, double>& p,
                         const std::string& where) {
  auto get = [&](const std::string& k, double def) {
    const auto it = p.find(k);
    return it == p.end() ? def : it->second;
  };
  if (name == "harmonic") {
    const double nd = get("n", 3);
    if (!(nd >= 0 && nd == std::floor(nd) && nd <= 64))
      throw SchemaError(where + "/params/n", "expected an integer in [0, 64]");
    const int n = static_cast<int>(nd);
    return [n](Point z) { return re_power(z, n); };
  }
  if (name == "sinh") {
    const double k = get("k", 1);
    return [k](Point z) { return std::sinh(k * z.x); };
  }
  if (name == "cosh") {
    const double k = get("k", 1);
    return [k](Point z) { return std::cosh(k * z.x); };
  }
  if (name == "constant") {
    const double c = get("c", 1);
    return [c](Point) { return c; };
  }
  throw SchemaError(where + "/preset", "unknown function preset '" + name + "'");
}

ScalarField real_table(const std::filesystem::path& path, const std::string& where) {
  try {
    return real_part(read_field(path));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(where, std::string("cannot read table: ") + e.what());
  }
}

ScalarFn table_fn(const ScalarField& f) {
  return [f](Point z) {
    const Grid2D& g = f.grid();
    const Point c{std::clamp(z.x, g.x(0), g.x(g.n() - 1)), std::clamp(z.y, g.y(0), g.y(g.n() - 1))};
    return f.at(c);
  };
}

/// "solution" / "multiplier" entry: preset object, table object or null.
std::optional<ScalarFn> function_entry(const json& root, const std::string& key,
                                       const std::filesystem::path& dir) {
  if (!root.contains(key)) return std::nullopt;
  const json& j = root.at(key);
  const std::string base = "/" + key;
  if (j.is_null()) return ScalarFn{};
  if (!j.is_object()) throw SchemaError(base, "expected an object or null");
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) throw SchemaError(base + "/preset", "expected a string");
    return function_preset(j.at("preset").get<std::string>(), params_of(j, base), base);
  }
  if (j.contains("table")) {
    if (!j.at("table").is_string()) throw SchemaError(base + "/table", "expected a path");
    return table_fn(real_table(dir / j.at("table").get<std::string>(), base + "/table"));
  }
  throw SchemaError(base, "expected 'preset' or 'table'");
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : presets()) out.push_back(k);
  return out;
}

std::vector<std::string> builtin_parameters(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ValidationError("unknown scenario preset '" + name + "'");
  return it->second.names;
}

Scenario builtin(const std::string& name, const std::map<std::string, double>& params) {
  return make_builtin(name, resolve(name, params));
}

Scenario builtin(const std::string& name, const std::vector<double>& positional) {
  const std::vector<std::string> names = builtin_parameters(name);
  if (positional.size() > names.size())
    throw ValidationError("preset '" + name + "' takes at most " + std::to_string(names.size()) +
                          " parameters");
  std::map<std::string, double> p;
  for (std::size_t i = 0; i < positional.size(); ++i) p[names[i]] = positional[i];
  return builtin(name, p);
}

void check_residuals(Scenario& s) {
  const Grid2D grid = s.grid.make();
  auto residual = [&](const ScalarFn& f) {
    const ScalarField uf = ScalarField::sample(grid, f);
    const ScalarField lu = StencilOperator(s.op, grid).apply(uf);
    double res = 0.0, sup = 0.0;
    for (int j = 2; j < grid.n() - 2; ++j)
      for (int i = 2; i < grid.n() - 2; ++i) {
        res = std::max(res, std::abs(lu(i, j)));
        sup = std::max(sup, std::abs(uf(i, j)));
      }
    return sup > 0 ? res / sup : res;
  };
  if (s.u) {
    s.solution_residual = residual(s.u);
    if (*s.solution_residual > 1e-3)
      s.warnings.push_back("solution residual " + std::to_string(*s.solution_residual) +
                           " above 1e-3");
  }
  if (s.phi) {
    s.multiplier_residual = residual(s.phi);
    if (*s.multiplier_residual > 1e-3)
      s.warnings.push_back("multiplier residual " + std::to_string(*s.multiplier_residual) +
                           " above 1e-3");
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw SchemaError("", "expected an object");
  const std::filesystem::path dir = path.parent_path();

  Scenario s;
  if (!root.contains("operator")) throw SchemaError("/operator", "missing");
  const json& op = root.at("operator");
  if (!op.is_object()) throw SchemaError("/operator", "expected an object");
  if (op.contains("preset")) {
    if (!op.at("preset").is_string()) throw SchemaError("/operator/preset", "expected a string");
    const std::string preset = op.at("preset").get<std::string>();
    if (!presets().count(preset))
      throw SchemaError("/operator/preset", "unknown preset '" + preset + "'");
    const auto params = params_of(op, "/operator");
    for (const auto& [k, v] : params) {
      const auto names = builtin_parameters(preset);
      if (std::find(names.begin(), names.end(), k) == names.end())
        throw SchemaError("/operator/params/" + k, "unknown parameter for '" + preset + "'");
    }
    s = builtin(preset, params);
  } else if (op.contains("tables")) {
    const json& t = op.at("tables");
    if (!t.is_object()) throw SchemaError("/operator/tables", "expected an object");
    auto entry = [&](const std::string& k) -> std::optional<std::filesystem::path> {
      if (!t.contains(k)) return std::nullopt;
      if (!t.at(k).is_string()) throw SchemaError("/operator/tables/" + k, "expected a path");
      return dir / t.at(k).get<std::string>();
    };
    for (const char* req : {"a11", "a22"})
      if (!t.contains(req)) throw SchemaError(std::string("/operator/tables/") + req, "missing");
    const ScalarField a11 = real_table(*entry("a11"), "/operator/tables/a11");
    const ScalarField a22 = real_table(*entry("a22"), "/operator/tables/a22");
    const ScalarField a12 = entry("a12") ? real_table(*entry("a12"), "/operator/tables/a12")
                                         : ScalarField(a11.grid(), std::vector<double>(a11.grid().size(), 0.0));
    std::optional<ComplexField> w;
    if (auto p = entry("w")) {
      try {
        w = read_field(*p);
      } catch (const std::exception& e) {
        throw SchemaError("/operator/tables/w", std::string("cannot read table: ") + e.what());
      }
    }
    std::optional<ScalarField> v;
    if (auto p = entry("v")) v = real_table(*p, "/operator/tables/v");
    for (const auto& [key, g] : {std::pair<std::string, Grid2D>{"a22", a22.grid()},
                                 {"a12", a12.grid()}})
      if (!(g == a11.grid())) throw SchemaError("/operator/tables/" + key, "grid differs from a11");
    if (w && !(w->grid() == a11.grid())) throw SchemaError("/operator/tables/w", "grid differs from a11");
    if (v && !(v->grid() == a11.grid())) throw SchemaError("/operator/tables/v", "grid differs from a11");
    StructureParams sp;
    if (op.contains("params")) {
      const auto p = params_of(op, "/operator");
      for (const auto& [k, val] : p) {
        if (k == "lambda") sp.lambda = val;
        else if (k == "mu0") sp.mu0 = val;
        else if (k == "eps0") sp.eps0 = val;
        else if (k == "mu1") sp.mu1 = val;
        else if (k == "eps1") sp.eps1 = val;
        else if (k == "mu2") sp.mu2 = val;
        else if (k == "eps2") sp.eps2 = val;
        else throw SchemaError("/operator/params/" + k, "unknown structural parameter");
      }
    }
    s.preset = "tables";
    s.op = EllipticOperator::from_tables(a11, a12, a22, w ? &*w : nullptr, v ? &*v : nullptr, sp);
    s.grid = {a11.grid().n(), a11.grid().half_width(), a11.grid().center()};
    if (v) {
      double plus = 0.0, minus = 0.0;
      for (double x : v->values()) {
        plus = std::max(plus, x);
        minus = std::max(minus, -x);
      }
      s.v_plus_max = plus;
      s.v_minus_max = minus;
    }
  } else {
    throw SchemaError("/operator", "expected 'preset' or 'tables'");
  }

  if (root.contains("name")) {
    if (!root.at("name").is_string()) throw SchemaError("/name", "expected a string");
    s.name = root.at("name").get<std::string>();
  } else {
    throw SchemaError("/name", "missing");
  }
  if (root.contains("grid")) {
    const json& g = root.at("grid");
    if (!g.is_object()) throw SchemaError("/grid", "expected an object");
    const double n = number_at(g, "n", "/grid");
    if (!(n == std::floor(n) && n >= 16 && n <= 1 << 14))
      throw SchemaError("/grid/n", "expected an integer in [16, 16384]");
    s.grid.n = static_cast<int>(n);
    s.grid.half_width = number_at(g, "half_width", "/grid");
    if (!(s.grid.half_width > 0)) throw SchemaError("/grid/half_width", "must be positive");
    if (g.contains("center")) {
      const json& c = g.at("center");
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
        throw SchemaError("/grid/center", "expected [x, y]");
      s.grid.center = {c[0].get<double>(), c[1].get<double>()};
    }
  }
  if (auto u = function_entry(root, "solution", dir)) {
    s.u = *u;
    if (root.at("solution").contains("preset") && root.at("solution").at("preset") == "harmonic")
      s.expected["vanishing_order"] = params_of(root.at("solution"), "/solution").count("n")
                                          ? params_of(root.at("solution"), "/solution").at("n")
                                          : 3.0;
  }
  if (auto phi = function_entry(root, "multiplier", dir)) s.phi = *phi;
  check_residuals(s);
  return s;
}

Scenario parse_scenario_arg(const std::string& arg) {
  const std::filesystem::path p(arg);
  if (p.extension() == ".json" || std::filesystem::exists(p)) return load_scenario(p);
  const auto colon = arg.find(':');
  const std::string name = arg.substr(0, colon);
  std::vector<double> values;
  if (colon != std::string::npos) {
    std::stringstream ss(arg.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ValidationError("scenario parameter '" + tok + "' is not a number");
      }
    }
  }
  Scenario s = builtin(name, values);
  check_residuals(s);
  return s;
}

}  // namespace ucp
