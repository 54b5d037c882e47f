#include "ucp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ucp/beltrami.hpp"
#include "ucp/error.hpp"
#include "ucp/greens.hpp"
#include "ucp/io.hpp"
#include "ucp/landis.hpp"
#include "ucp/multiplier.hpp"
#include "ucp/quasiball.hpp"
#include "ucp/report_json.hpp"
#include "ucp/scenarios.hpp"
#include "ucp/vanishing.hpp"

namespace ucp {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string manifest_hash(const json& manifest) {
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(manifest.dump());
  return o.str();
}

namespace {

/// Output directory, manifest and hash shared by every file a subcommand writes.
class Sink {
 public:
  Sink(fs::path dir, json manifest, bool plot_data)
      : dir_(std::move(dir)), manifest_(std::move(manifest)), plot_data_(plot_data) {
    hash_ = manifest_hash(manifest_);
    fs::create_directories(dir_);
    json m = manifest_;
    m["manifest_hash"] = hash_;
    write_text("manifest.json", m.dump(2) + "\n");
  }

  const std::string& hash() const { return hash_; }
  bool plot_data() const { return plot_data_; }
  fs::path path(const std::string& name) const { return dir_ / name; }
  std::string comment() const { return "manifest_hash=" + hash_; }

  json stamp(json report) const {
    report["manifest_hash"] = hash_;
    return report;
  }

  void write_json(const std::string& name, const json& report) const {
    write_text(name, stamp(report).dump(2) + "\n");
  }

  void write_csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) const {
    std::ostringstream o;
    o << "# " << comment() << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) o << (i ? "," : "") << header[i];
    o << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r[i];
      o << "\n";
    }
    write_text(name, o.str());
  }

  /// Tidy long-format rows (series, x, y) for external plotting; written only with --plot-data.
  void write_plot(const std::string& name,
                  const std::vector<std::tuple<std::string, double, double>>& rows) const {
    if (!plot_data_) return;
    std::vector<std::vector<std::string>> out;
    for (const auto& [s, x, y] : rows) out.push_back({s, cell(x), cell(y)});
    write_csv(name, {"series", "x", "y"}, out);
  }

  static std::string cell(double v) {
    if (!std::isfinite(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  void write_text(const std::string& name, const std::string& text) const {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + (dir_ / name).string());
    f << text;
  }

  fs::path dir_;
  json manifest_;
  bool plot_data_;
  std::string hash_;
};

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError(what + ": '" + tok + "' is not a number");
    }
  }
  if (out.empty()) throw ValidationError(what + ": empty list");
  return out;
}

Disk default_region(const Grid2D& g) {
  return Disk{g.center(), g.half_width() - 4 * g.h()};
}

Point nearest_node(const Grid2D& g, Point p) {
  const int i = std::clamp(static_cast<int>(std::lround((p.x - g.x(0)) / g.h())), 0, g.n() - 1);
  const int j = std::clamp(static_cast<int>(std::lround((p.y - g.y(0)) / g.h())), 0, g.n() - 1);
  return g.node(i, j);
}

/// Field rows x, y, value(s) for CSV output.
void write_scalar(const Sink& sink, const std::string& name, const ScalarField& f) {
  write_field_csv(f, sink.path(name), sink.comment());
}

void write_complex(const Sink& sink, const std::string& name, const ComplexField& f) {
  write_field_csv(f, sink.path(name), sink.comment());
}

struct Common {
  std::string scenario;
  std::string out = "ucp-out";
  bool plot_data = false;
};

void add_common(CLI::App* sub, Common& c, bool needs_scenario) {
  auto* opt = sub->add_option("--scenario", c.scenario, "scenario JSON file or preset[:p1,p2]");
  if (needs_scenario) opt->required();
  sub->add_option("--out", c.out, "output directory");
  sub->add_flag("--plot-data", c.plot_data, "emit tidy long-format CSV for plotting");
}

json base_manifest(const std::string& sub, const Common& c) {
  return {{"subcommand", sub},
          {"scenario", c.scenario},
          {"output_directory", c.out},
          {"plot_data", c.plot_data}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantitative unique continuation toolkit"};
  app.require_subcommand(1);
  Common common;

  // verify-operator
  auto* verify = app.add_subcommand("verify-operator", "check the structural conditions");
  add_common(verify, common, true);
  std::optional<double> region_radius, tolerance;
  verify->add_option("--region-radius", region_radius, "disk radius around the grid centre");
  verify->add_option("--tolerance", tolerance, "per-node tolerance");

  // gamma
  auto* gamma = app.add_subcommand("gamma", "fundamental solution and perturbation study");
  add_common(gamma, common, true);
  std::string delta_sweep;
  double fs_radius = 1.0;
  gamma->add_option("--delta-sweep", delta_sweep, "comma-separated perturbation sizes");
  gamma->add_option("--radius", fs_radius, "ball radius for max |Γ − Γ₀|");

  // quasiball
  auto* quasi = app.add_subcommand("quasiball", "quasi-circles and their radii");
  add_common(quasi, common, true);
  std::string s_list;
  quasi->add_option("--s", s_list, "comma-separated levels s")->required();

  // multiplier
  auto* mult = app.add_subcommand("multiplier", "positive multiplier construction");
  add_common(mult, common, true);
  double mK = 1.0, mm = 1.4, mb = 1.2;
  mult->add_option("--K", mK, "coefficient scale K")->required();
  mult->add_option("--m", mm, "outer radius m");
  mult->add_option("--b", mb, "radius b for the gradient bound");

  // similarity
  auto* sim = app.add_subcommand("similarity", "similarity-principle factorization w = f g");
  add_common(sim, common, true);
  double sK = 1.0, sF = 0.25;
  int sn = 256;
  sim->add_option("--K", sK, "K");
  sim->add_option("--F", sF, "F(K)");
  sim->add_option("--n", sn, "working grid size (power of two)");

  // three-circle
  auto* three = app.add_subcommand("three-circle", "three-quasi-circle inequality");
  add_common(three, common, true);
  std::string radii;
  double tc_tol = 1e-6;
  three->add_option("--radii", radii, "s1,s2,s3")->required();
  three->add_option("--tolerance", tc_tol, "relative tolerance");

  // vanishing
  auto* van = app.add_subcommand("vanishing", "order-of-vanishing pipeline");
  add_common(van, common, true);
  double vK = 1.0, vF = 0.25, vp = 1.0, r_min = 1e-3, r_max = 1e-1;
  int r_count = 21, vn = 256;
  std::optional<double> vC1, vc1;
  van->add_option("--K", vK, "K")->required();
  van->add_option("--F", vF, "F(K)")->required();
  van->add_option("--p", vp, "exponent p")->required();
  van->add_option("--C1", vC1, "upper-bound constant C₁");
  van->add_option("--c1", vc1, "lower-bound constant c₁");
  van->add_option("--r-min", r_min, "smallest radius");
  van->add_option("--r-max", r_max, "largest radius");
  van->add_option("--r-count", r_count, "number of radii");
  van->add_option("--n", vn, "working grid size (power of two)");

  // iterate
  auto* iter = app.add_subcommand("iterate", "exponent iteration and radii schedule");
  add_common(iter, common, false);
  double alpha0 = 0, ig = 0, ie = 0, Lambda = 1.0;
  std::optional<double> S0;
  iter->add_option("--alpha0", alpha0, "initial exponent")->required();
  iter->add_option("--gamma", ig, "γ")->required();
  iter->add_option("--eps", ie, "ε")->required();
  iter->add_option("--S0", S0, "initial radius (default: minimal admissible)");
  iter->add_option("--Lambda", Lambda, "Λ");

  // certificate
  auto* cert = app.add_subcommand("certificate", "end-to-end Landis certificate");
  add_common(cert, common, false);
  std::string mode = "general", params_text;
  double cK = 1.0;
  cert->add_option("--mode", mode, "general | global")->check(CLI::IsMember({"general", "global"}));
  cert->add_option("--params", params_text, "key=value,… (eps, eps0, eps1, eps2, lambda, mu0, "
                                            "mu1, mu2, C0, alpha0, S0, R, class)");
  cert->add_option("--K", cK, "K for the numerical leg");

  auto fail = [&err](const std::string& type, const std::string& message, json extra = {}) {
    json e = {{"type", type}, {"message", message}};
    for (auto& [k, v] : extra.items()) e[k] = v;
    err << json{{"error", e}}.dump() << "\n";
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    fail("validation", e.what());
    return 2;
  }

  try {
    if (verify->parsed()) {
      json man = base_manifest("verify-operator", common);
      man["region_radius"] = region_radius ? json(*region_radius) : json(nullptr);
      man["tolerance"] = tolerance ? json(*tolerance) : json(nullptr);
      const Sink sink(common.out, man, common.plot_data);
      const Scenario sc = parse_scenario_arg(common.scenario);
      const Grid2D g = sc.grid.make();
      const Disk region = region_radius ? Disk{g.center(), *region_radius} : default_region(g);
      const StructureReport rep = verify_structure(sc.op, g, region, tolerance);
      json j = to_json(rep);
      j["scenario"] = to_json(sc);
      sink.write_json("structure.json", j);
      out << sink.stamp(j).dump(2) << "\n";
      return 0;
    }

    if (gamma->parsed()) {
      json man = base_manifest("gamma", common);
      man["delta_sweep"] = delta_sweep;
      man["radius"] = fs_radius;
      const Sink sink(common.out, man, common.plot_data);
      const Scenario sc = parse_scenario_arg(common.scenario);
      const Grid2D g = sc.grid.make();
      const Point pole = nearest_node(g, g.center());
      const GreensField gf = variable_gamma(sc.op, pole, g);
      json j = to_json(gf);
      std::vector<std::vector<std::string>> rows;
      for (int jj = 0; jj < g.n(); ++jj)
        for (int ii = 0; ii < g.n(); ++ii)
          rows.push_back({Sink::cell(g.x(ii)), Sink::cell(g.y(jj)), Sink::cell(gf.gamma(ii, jj)),
                          Sink::cell(gf.remainder(ii, jj))});
      sink.write_csv("gamma.csv", {"x", "y", "gamma", "remainder"}, rows);
      if (!delta_sweep.empty()) {
        const std::vector<double> deltas = parse_list(delta_sweep, "--delta-sweep");
        std::function<EllipticOperator(double)> family;
        if (sc.preset == "bump") {
          family = [](double d) { return builtin("bump", {d}).op; };
        } else {
          const EllipticOperator base = sc.op;
          const Mat2 a0 = base.A(pole);
          family = [base, a0](double d) {
            return base.with_A(
                [base, a0, d](Point z) { return a0.a11 + d * (base.a11(z) - a0.a11); },
                [base, a0, d](Point z) { return a0.a12 + d * (base.a12(z) - a0.a12); },
                [base, a0, d](Point z) { return a0.a22 + d * (base.a22(z) - a0.a22); });
          };
        }
        const PerturbationStudy ps = check_fs_perturbation(family, deltas, g, fs_radius, pole);
        j["perturbation"] = to_json(ps);
        std::vector<std::vector<std::string>> prow;
        std::vector<std::tuple<std::string, double, double>> plot;
        for (std::size_t i = 0; i < ps.deltas.size(); ++i) {
          prow.push_back({Sink::cell(ps.deltas[i]), Sink::cell(ps.sup_diffs[i])});
          plot.emplace_back("sup_diff", ps.deltas[i], ps.sup_diffs[i]);
        }
        sink.write_csv("perturbation.csv", {"delta", "sup_diff"}, prow);
        sink.write_plot("plot_perturbation.csv", plot);
      }
      sink.write_json("gamma.json", j);
      out << sink.stamp(j).dump(2) << "\n";
      return 0;
    }

    if (quasi->parsed()) {
      json man = base_manifest("quasiball", common);
      man["s"] = s_list;
      const Sink sink(common.out, man, common.plot_data);
      const Scenario sc = parse_scenario_arg(common.scenario);
      const Grid2D g = sc.grid.make();
      const std::vector<double> levels = parse_list(s_list, "--s");
      const GreensField gf = variable_gamma(sc.op, nearest_node(g, g.center()), g);
      std::vector<QuasiGeometry> family;
      std::vector<std::vector<std::string>> table;
      std::vector<std::tuple<std::string, double, double>> plot;
      json geoms = json::array();
      for (std::size_t i = 0; i < levels.size(); ++i) {
        QuasiGeometry q = quasi_circle(gf, levels[i]);
        std::vector<std::vector<std::string>> pts;
        for (const Point& p : q.contour) pts.push_back({Sink::cell(p.x), Sink::cell(p.y)});
        sink.write_csv("contour_" + std::to_string(i) + ".csv", {"x", "y"}, pts);
        table.push_back({Sink::cell(q.s), Sink::cell(q.sigma), Sink::cell(q.rho)});
        plot.emplace_back("sigma", q.s, q.sigma);
        plot.emplace_back("rho", q.s, q.rho);
        geoms.push_back(to_json(q));
        family.push_back(std::move(q));
      }
      sink.write_csv("radii.csv", {"s", "sigma", "rho"}, table);
      sink.write_plot("plot_radii.csv", plot);
      json j = {{"geometries", geoms}, {"grid_h", g.h()}};
      if (family.size() >= 2) j["annulus_exponents"] = to_json(annulus_bounds(family));
      sink.write_json("quasiball.json", j);
      out << sink.stamp(j).dump(2) << "\n";
      return 0;
    }

    if (mult->parsed()) {
      json man = base_manifest("multiplier", common);
      man["K"] = mK;
      man["m"] = mm;
      man["b"] = mb;
      const Sink sink(common.out, man, common.plot_data);
      const Scenario sc = parse_scenario_arg(common.scenario);
      const Grid2D g = sc.grid.make();
      std::function<double(Point)> boundary;
      if (sc.phi) boundary = sc.phi;
      const MultiplierBundle mbundle =
          multiplier_bundle(sc.op, g, mK, sc.op.params().lambda, mm, mb, boundary);
      write_scalar(sink, "phi.csv", mbundle.positive.phi);
      json j = to_json(mbundle);
      sink.write_json("multiplier.json", j);
      out << sink.stamp(j).dump(2) << "\n";
      return 0;
    }

    if (sim->parsed()) {
      json man = base_manifest("similarity", common);
      man["K"] = sK;
      man["F"] = sF;
      man["n"] = sn;
      const Sink sink(common.out, man, common.plot_data);
      const Scenario sc = parse_scenario_arg(common.scenario);
      if (!sc.u || !sc.phi) throw ValidationError("similarity: scenario needs a solution and a multiplier");
      VanishingConfig cfg;
      cfg.K = sK;
      cfg.F = sF;
      cfg.n = sn;
      cfg.lambda = sc.op.params().lambda;
      const BeltramiStage st = prepare_beltrami_stage(sc.op, sc.u, sc.phi, cfg);
      json j = {{"degenerate", st.degenerate}, {"k", st.k}, {"b", st.config.b}};
      if (!st.degenerate) {
        const SimilarityFactors f =
            similarity_decompose(st.w, st.eta, st.coefficient, Disk{{0, 0}, st.config.b});
        j["factors"] = to_json(f);
        write_complex(sink, "f.csv", f.f);
        write_complex(sink, "g.csv", f.g);
      }
      sink.write_json("similarity.json", j);
      out << sink.stamp(j).dump(2) << "\n";
      return 0;
    }

    if (three->parsed()) {
      json man = base_manifest("three-circle", common);
      man["radii"] = radii;
      man["tolerance"] = tc_tol;
      const Sink sink(common.out, man, common.plot_data);
      const Scenario sc = parse_scenario_arg(common.scenario);
      const std::vector<double> s = parse_list(radii, "--radii");
      if (s.size() != 3) throw ValidationError("--radii needs exactly three values");
      if (!sc.u || !sc.phi) throw ValidationError("three-circle: scenario needs a solution and a multiplier");
      ThreeCircleResult r;
      std::string route;
      const Mat2 a0 = sc.op.A({0, 0});
      const bool simple = !sc.op.has_drift() && !sc.op.has_potential() &&
                          sc.phi({0, 0}) == 1.0 && sc.phi({0.5, 0.5}) == 1.0 &&
                          sc.op.A({1.0, 0.5}).a11 == a0.a11 && sc.op.A({-0.7, 1.3}).a12 == a0.a12 &&
                          sc.op.A({0.3, -1.1}).a22 == a0.a22;
      if (simple) {
        // constant Ā, φ ≡ 1: w = D̃u is D-holomorphic with g ≡ 1
        route = "closure";
        const double sd = std::sqrt(a0.det());
        const Mat2 ab = a0.scaled(1.0 / sd);
        const ConstantGamma g0(ab);
        const ScalarFn u = sc.u;
        const auto f = [u, ab](Point z) {
          const double e = 1e-5 * std::max(1.0, norm(z));
          const double ux = (u({z.x + e, z.y}) - u({z.x - e, z.y})) / (2 * e);
          const double uy = (u({z.x, z.y + e}) - u({z.x, z.y - e})) / (2 * e);
          return cplx(1 + ab.a11, -ab.a12) * ux + cplx(ab.a12, -(1 + ab.a22)) * uy;
        };
        const Grid2D g = make_grid({0, 0}, 1.2 * g0.outer_radius(s[2]) + 0.1, 257);
        r = three_circle_check(f, g, GeometrySource::analytic(g0), s[0], s[1], s[2], tc_tol);
      } else {
        route = "field";
        VanishingConfig cfg;
        cfg.lambda = sc.op.params().lambda;
        cfg.F = std::min(0.5, s[2] - 1.0 > 0 ? s[2] - 1.0 : 0.25);
        const BeltramiStage st = prepare_beltrami_stage(sc.op, sc.u, sc.phi, cfg);
        if (st.degenerate) throw ValidationError("three-circle: w vanishes identically");
        const SimilarityFactors f =
            similarity_decompose(st.w, st.eta, st.coefficient, Disk{{0, 0}, st.config.b});
        r = three_circle_check(f.f, st.eta, st.geometry, s[0], s[1], s[2], tc_tol);
      }
      json j = to_json(r);
      j["route"] = route;
      j["equality_gap"] = r.rhs > 0 ? std::abs(r.lhs - r.rhs) / r.rhs : 0.0;
      sink.write_plot("plot_three_circle.csv",
                      {{"norm", r.s1, r.norm1}, {"norm", r.s2, r.norm2}, {"norm", r.s3, r.norm3}});
      sink.write_json("three_circle.json", j);
      out << sink.stamp(j).dump(2) << "\n";
      return 0;
    }

    if (van->parsed()) {
      json man = base_manifest("vanishing", common);
      man["K"] = vK;
      man["F"] = vF;
      man["p"] = vp;
      man["C1"] = vC1 ? json(*vC1) : json(nullptr);
      man["c1"] = vc1 ? json(*vc1) : json(nullptr);
      man["r_min"] = r_min;
      man["r_max"] = r_max;
      man["r_count"] = r_count;
      man["n"] = vn;
      const Sink sink(common.out, man, common.plot_data);
      const Scenario sc = parse_scenario_arg(common.scenario);
      if (!sc.u || !sc.phi) throw ValidationError("vanishing: scenario needs a solution and a multiplier");
      VanishingConfig cfg;
      cfg.K = vK;
      cfg.F = vF;
      cfg.p = vp;
      cfg.C1 = vC1;
      cfg.c1 = vc1;
      cfg.n = vn;
      cfg.lambda = sc.op.params().lambda;
      cfg.r_grid = log_space(r_min, r_max, r_count);
      const VanishingReport rep = vanishing_pipeline(sc.op, sc.u, sc.phi, cfg);
      json j = to_json(rep);
      j["verify"] = to_json(verify_oofv_bound(rep, rep.config));
      std::vector<std::vector<std::string>> rows;
      std::vector<std::tuple<std::string, double, double>> plot;
      for (const auto& row : rep.rows) {
        rows.push_back({Sink::cell(row.r), Sink::cell(row.u_norm), Sink::cell(row.bound)});
        plot.emplace_back("measured_norm", row.r, row.u_norm);
        plot.emplace_back("predicted", row.r, row.predicted);
        plot.emplace_back("bound", row.r, row.bound);
      }
      sink.write_csv("vanishing.csv", {"r", "measured_norm", "predicted_bound"}, rows);
      sink.write_plot("plot_vanishing.csv", plot);
      sink.write_json("vanishing.json", j);
      out << sink.stamp(j).dump(2) << "\n";
      return 0;
    }

    if (iter->parsed()) {
      json man = base_manifest("iterate", common);
      man["alpha0"] = alpha0;
      man["gamma"] = ig;
      man["eps"] = ie;
      man["S0"] = S0 ? json(*S0) : json(nullptr);
      man["Lambda"] = Lambda;
      const Sink sink(common.out, man, common.plot_data);
      const IterationTrace t = iterate_exponents(alpha0, ig, ie);
      const long double s0 = S0 ? static_cast<long double>(*S0) : minimal_admissible_S(ig, Lambda, 1.0);
      std::vector<long double> schedule;
      std::string schedule_note;
      try {
        schedule = radii_schedule(s0, ig, Lambda, t.N);
      } catch (const ValidationError& e) {
        schedule_note = e.what();
      }
      std::vector<std::vector<std::string>> rows;
      std::vector<std::tuple<std::string, double, double>> plot;
      for (std::size_t n = 0; n < t.alpha.size(); ++n) {
        const std::string s = n < schedule.size() ? Sink::cell(static_cast<double>(schedule[n])) : "";
        const std::string b = n < t.beta.size() ? Sink::cell(t.beta[n]) : "";
        rows.push_back({std::to_string(n), s, Sink::cell(t.alpha[n]), b});
        plot.emplace_back("alpha", static_cast<double>(n), t.alpha[n]);
        if (n < t.beta.size()) plot.emplace_back("beta", static_cast<double>(n), t.beta[n]);
      }
      sink.write_csv("trace.csv", {"n", "S_n", "alpha_n", "beta_n"}, rows);
      sink.write_plot("plot_trace.csv", plot);
      json j = {{"gamma", t.gamma},
                {"alpha0", t.alpha0},
                {"N", t.N},
                {"N0", t.N0},
                {"exact_steps", t.exact_steps},
                {"S0", static_cast<double>(s0)},
                {"R0", schedule.empty() ? json(nullptr) : json(static_cast<double>(schedule.back()))},
                {"final_exponent", t.final_exponent},
                {"schedule_note", schedule_note},
                {"trace", to_json(t)}};
      sink.write_json("certificate.json", j);
      out << sink.stamp(j).dump(2) << "\n";
      return 0;
    }

    if (cert->parsed()) {
      json man = base_manifest("certificate", common);
      man["mode"] = mode;
      man["params"] = params_text;
      man["K"] = cK;
      const Sink sink(common.out, man, common.plot_data);
      LandisParams lp;
      lp.mode = mode == "global" ? LandisMode::Global : LandisMode::General;
      if (!params_text.empty()) {
        std::stringstream ss(params_text);
        std::string kv;
        while (std::getline(ss, kv, ',')) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw ValidationError("--params: expected key=value, got '" + kv + "'");
          const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
          if (k == "class") {
            if (v == "bounded") lp.cls = LandisClass::BoundedPotential;
            else if (v == "decaying") lp.cls = LandisClass::DecayingNegative;
            else throw ValidationError("--params: class must be bounded or decaying");
            continue;
          }
          const double x = parse_list(v, "--params " + k).front();
          if (k == "eps") lp.eps = x;
          else if (k == "eps0") lp.eps0 = x;
          else if (k == "eps1") lp.eps1 = x;
          else if (k == "eps2") lp.eps2 = x;
          else if (k == "lambda") lp.lambda = x;
          else if (k == "mu0") lp.mu0 = x;
          else if (k == "mu1") lp.mu1 = x;
          else if (k == "mu2") lp.mu2 = x;
          else if (k == "C0") lp.C0 = x;
          else if (k == "alpha0") lp.alpha0 = x;
          else if (k == "S0") lp.S0 = x;
          else if (k == "R") lp.R = x;
          else throw ValidationError("--params: unknown key '" + k + "'");
        }
      }
      LegRunner leg;
      std::optional<Scenario> sc;
      if (!common.scenario.empty()) {
        sc = parse_scenario_arg(common.scenario);
        if (!sc->u || !sc->phi) throw ValidationError("certificate: leg scenario needs a solution and a multiplier");
        const Scenario scen = *sc;
        const std::string name = common.scenario;
        leg = [scen, name, cK](const WindowParams& w) {
          VanishingConfig cfg;
          cfg.K = cK;
          cfg.F = std::clamp(static_cast<double>(w.F), 0.01, 0.5);
          cfg.lambda = scen.op.params().lambda;
          const VanishingReport rep = vanishing_pipeline(scen.op, scen.u, scen.phi, cfg);
          NumericalLeg l;
          l.scenario = name;
          l.K = cfg.K;
          l.F = cfg.F;
          l.measured_order = rep.order.order;
          l.c_hat = rep.c_hat;
          l.pass = rep.pass;
          l.note = cfg.F != static_cast<double>(w.F) ? "F(K) clamped to [0.01, 0.5]" : "";
          return l;
        };
      }
      const LandisCertificate c = landis_certificate(lp, leg);
      json j = to_json(c);
      sink.write_json("certificate.json", j);
      out << sink.stamp(j).dump(2) << "\n";
      return 0;
    }
  } catch (const SchemaError& e) {
    fail("schema", e.what(), {{"path", e.path()}});
    return 2;
  } catch (const ValidationError& e) {
    fail("validation", e.what());
    return 2;
  } catch (const CertificationError& e) {
    fail("certification", e.what(), {{"stage", e.stage()}});
    return 3;
  } catch (const std::exception& e) {
    fail("internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace ucp
