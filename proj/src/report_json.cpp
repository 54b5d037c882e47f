#include "ucp/report_json.hpp"

#include <cmath>

namespace ucp {

using nlohmann::json;

namespace {

/// Non-finite doubles become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json num(long double v) { return num(static_cast<double>(v)); }

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? num(static_cast<double>(*v)) : json(nullptr);
}

}  // namespace

json to_json(const Point& p) { return json::array({num(p.x), num(p.y)}); }

json to_json(const ConditionReport& c) {
  return {{"name", c.name},        {"checked", c.checked},
          {"margin", num(c.margin)}, {"worst_point", to_json(c.worst_point)},
          {"failing_nodes", c.failing_nodes}, {"nodes", c.nodes},
          {"pass", c.pass}};
}

json to_json(const StructureReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) conds.push_back(to_json(c));
  return {{"conditions", conds}, {"pass", r.pass}};
}

json to_json(const GreensField& g) {
  return {{"pole", to_json(g.pole())},
          {"frozen", {{"d1", num(g.frozen.d1())},
                      {"d2", num(g.frozen.d2())},
                      {"rotation", num(g.frozen.rotation())},
                      {"perimeter", num(g.frozen.perimeter())}}},
          {"iterations", g.iterations},
          {"solver_residual", num(g.solver_residual)},
          {"boundary_offset", num(g.boundary_offset)},
          {"equation_residual", num(g.equation_residual)},
          {"boundary", g.boundary_description}};
}

json to_json(const PerturbationStudy& p) {
  json rows = json::array();
  for (std::size_t i = 0; i < p.deltas.size(); ++i)
    rows.push_back({{"delta", num(p.deltas[i])}, {"sup_diff", num(p.sup_diffs[i])}});
  return {{"rows", rows}, {"slope", num(p.slope)}, {"radius", num(p.radius)}};
}

json to_json(const LogBracket& b) {
  return {{"c_lower", num(b.c_lower)}, {"c_upper", num(b.c_upper)}, {"pass", b.pass}};
}

json to_json(const QuasiGeometry& q) {
  return {{"s", num(q.s)},
          {"sigma", num(q.sigma)},
          {"rho", num(q.rho)},
          {"vertices", q.contour.size()},
          {"contour_tolerance", num(q.contour_tolerance)},
          {"pole", to_json(q.pole)}};
}

json to_json(const AnnulusExponents& a) {
  return {{"c_inner", num(a.c_inner)}, {"c_outer", num(a.c_outer)}};
}

json to_json(const SubsolutionResult& s) {
  return {{"c", num(s.c)},         {"K", num(s.K)},
          {"lambda", num(s.lambda)}, {"worst_ratio", num(s.worst_ratio)},
          {"max_value", num(s.max_value)}, {"worst_point", to_json(s.worst_point)},
          {"nodes", s.nodes},       {"pass", s.pass}};
}

json to_json(const SupersolutionResult& s) {
  return {{"m", num(s.m)},
          {"margin_gradient", num(s.margin_gradient)},
          {"margin_v_minus", num(s.margin_v_minus)},
          {"margin_drift", num(s.margin_drift)},
          {"min_value", num(s.min_value)},
          {"worst_point", to_json(s.worst_point)},
          {"pass", s.pass}};
}

json to_json(const PositiveSolutionResult& p) {
  return {{"scale", num(p.scale)},
          {"iterations", p.iterations},
          {"solver_residual", num(p.solver_residual)},
          {"min_value", num(p.min_value)},
          {"equation_residual", num(p.equation_residual)}};
}

json to_json(const PointwiseBounds& b) {
  return {{"min", num(b.min)}, {"max", num(b.max)}, {"c", num(b.c)}, {"pass", b.pass}};
}

json to_json(const MultiplierBundle& m) {
  return {{"K", num(m.K)},
          {"lambda", num(m.lambda)},
          {"m", num(m.m)},
          {"b", num(m.b)},
          {"subsolution", m.sub ? to_json(*m.sub) : json(nullptr)},
          {"subsolution_error", m.sub_error},
          {"supersolution", m.super ? to_json(*m.super) : json(nullptr)},
          {"supersolution_error", m.super_error},
          {"positive_solution", to_json(m.positive)},
          {"log_gradient_ratio", num(m.log_gradient_ratio)},
          {"pointwise_bounds", to_json(m.bounds)},
          {"sandwich_lower", num(m.sandwich_lower)},
          {"sandwich_upper", num(m.sandwich_upper)}};
}

json to_json(const SimilarityFactors& s) {
  return {{"iterations", s.iterations},
          {"fixed_point_residual", num(s.fixed_point_residual)},
          {"df_residual", num(s.df_residual)},
          {"k", num(s.k)},
          {"log_g_max", num(s.log_g_max)},
          {"a_norm_t", num(s.a_norm_t)},
          {"a_norm_inf", num(s.a_norm_inf)},
          {"omega_norm_t", num(s.omega_norm_t)},
          {"holder_constant", num(s.holder_constant)},
          {"achieved_c", num(s.achieved_c)},
          {"bracket_pass", s.bracket_pass}};
}

json to_json(const ThreeCircleResult& t) {
  return {{"s", {num(t.s1), num(t.s2), num(t.s3)}},
          {"norms", {num(t.norm1), num(t.norm2), num(t.norm3)}},
          {"theta", num(t.theta)},
          {"lhs", num(t.lhs)},
          {"rhs", num(t.rhs)},
          {"df_residual", num(t.df_residual)},
          {"pass", t.pass}};
}

json to_json(const VanishingConfig& c) {
  return {{"K", num(c.K)},   {"F", num(c.F)},     {"C1", opt(c.C1)},
          {"c1", opt(c.c1)}, {"p", num(c.p)},     {"q", num(c.q())},
          {"lambda", num(c.lambda)}, {"n", c.n},  {"d", num(c.d)},
          {"b", num(c.b)},   {"m", num(c.m)},
          {"residual_tolerance", num(c.residual_tolerance)}};
}

json to_json(const VanishingOrder& o) {
  return {{"order", num(o.order)},
          {"window", {num(o.r_lo), num(o.r_hi)}},
          {"residual", num(o.residual)}};
}

json to_json(const VanishingReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"r", num(row.r)},
                    {"s", num(row.s)},
                    {"theta", num(row.theta)},
                    {"u_norm", num(row.u_norm)},
                    {"grad_v_half", num(row.grad_v_half)},
                    {"three_ball_rhs", num(row.three_ball_rhs)},
                    {"predicted", num(row.predicted)},
                    {"bound", num(row.bound)}});
  return {{"config", to_json(r.config)},
          {"rows", rows},
          {"order", to_json(r.order)},
          {"degenerate", r.degenerate},
          {"geometry", r.geometry_kind},
          {"quotient_residual", num(r.quotient_residual)},
          {"equation_residual", num(r.equation_residual)},
          {"similarity", {{"iterations", r.similarity_iterations},
                          {"fixed_point_residual", num(r.similarity_residual)},
                          {"df_residual", num(r.df_residual)},
                          {"k", num(r.k)}}},
          {"three_circle", to_json(r.three_circle)},
          {"c_w", num(r.c_w)},
          {"C_w", num(r.C_w)},
          {"g_max", num(r.g_max)},
          {"g_min", num(r.g_min)},
          {"grad_v_q1", num(r.grad_v_q1)},
          {"grad_v_b", num(r.grad_v_b)},
          {"C_int", num(r.C_int)},
          {"log_E", num(r.log_E)},
          {"lower_bound", {{"case", r.lower_bound_case},
                           {"c_phi", num(r.c_phi)},
                           {"c1", num(r.c1)},
                           {"C1", num(r.C1)},
                           {"u_norm_d", num(r.u_norm_d)},
                           {"u_norm_m", num(r.u_norm_m)},
                           {"z0", to_json(r.z0)},
                           {"z1", to_json(r.z1)},
                           {"difference", num(r.difference)},
                           {"required_difference", num(r.required_difference)},
                           {"L_low", num(r.L_low)}}},
          {"c_hat", num(r.c_hat)},
          {"theta_regression", {{"slope", num(r.theta_slope)}, {"r2", num(r.theta_r2)}}},
          {"monotone", r.monotone},
          {"theta_in_range", r.theta_in_range},
          {"bound_pass", r.bound_pass},
          {"pass", r.pass}};
}

json to_json(const BoundCheck& b) {
  return {{"worst_log_margin", num(b.worst_log_margin)},
          {"r2", num(b.r2)},
          {"slope", num(b.slope)},
          {"bound_pass", b.bound_pass},
          {"regression_pass", b.regression_pass},
          {"pass", b.pass}};
}

json to_json(const WindowParams& w) {
  return {{"S", num(w.S)},
          {"gamma", num(w.gamma)},
          {"Lambda", num(w.Lambda)},
          {"lambda", num(w.lambda)},
          {"T", num(w.T)},
          {"R", num(w.R)},
          {"a", num(w.a)},
          {"K", num(w.K)},
          {"F", num(w.F)},
          {"d", num(w.d)},
          {"b", num(w.b)},
          {"m", num(w.m)},
          {"containment_lhs", num(w.containment_lhs)},
          {"containment_rhs", num(w.containment_rhs)},
          {"containment", w.containment},
          {"inner_sanity", w.inner_sanity},
          {"outer_sanity", w.outer_sanity},
          {"radius_model", w.radius_model}};
}

json to_json(const IterationTrace& t) {
  json contraction = json::array();
  for (bool b : t.contraction) contraction.push_back(b);
  return {{"gamma", num(t.gamma)},
          {"alpha0", num(t.alpha0)},
          {"eps", num(t.eps)},
          {"alpha", t.alpha},
          {"beta", t.beta},
          {"contraction", contraction},
          {"N", t.N},
          {"N0", t.N0},
          {"exact_steps", t.exact_steps},
          {"fixed_point", num(t.fixed_point)},
          {"final_exponent", num(t.final_exponent)},
          {"contraction_pass", t.contraction_pass},
          {"n_bound_pass", t.n_bound_pass},
          {"final_pass", t.final_pass},
          {"monotone_pass", t.monotone_pass},
          {"beta_identity_pass", t.beta_identity_pass}};
}

json to_json(const SweepResult& s) {
  return {{"cases", s.cases},
          {"n_bound_violations", s.n_bound_violations},
          {"contraction_violations", s.contraction_violations},
          {"worst", {{"alpha0", num(s.worst_alpha0)},
                     {"gamma", num(s.worst_gamma)},
                     {"N", s.worst_N},
                     {"N0", s.worst_N0}}},
          {"pass", s.pass}};
}

json to_json(const NumericalLeg& l) {
  return {{"scenario", l.scenario}, {"window", l.window},
          {"K", num(l.K)},           {"F", num(l.F)},
          {"measured_order", num(l.measured_order)},
          {"c_hat", num(l.c_hat)},   {"pass", l.pass},
          {"note", l.note}};
}

json to_json(const LandisCertificate& c) {
  json out = {{"mode", c.mode == LandisMode::General ? "general" : "global"},
              {"pass", c.pass},
              {"final_exponent", num(c.final_exponent)},
              {"leg", c.leg ? to_json(*c.leg) : json(nullptr)}};
  json windows = json::array();
  for (const auto& w : c.windows) windows.push_back(to_json(w));
  out["windows"] = windows;
  if (c.mode == LandisMode::Global) {
    out["d"] = num(c.d);
    out["b"] = num(c.b);
    out["m"] = num(c.m);
    out["F"] = num(c.F);
    out["K"] = num(c.K);
    out["beta"] = num(c.beta);
    out["C1"] = num(c.C1);
    out["c1"] = num(c.c1);
    out["p"] = num(c.p);
    out["log_bound_over_C"] = num(c.log_bound_over_C);
    return out;
  }
  json schedule = json::array();
  for (long double s : c.schedule) schedule.push_back(num(s));
  out["gamma"] = num(c.gamma);
  out["alpha0"] = num(c.alpha0);
  out["eps"] = num(c.eps);
  out["N"] = c.trace.N;
  out["N0"] = c.trace.N0;
  out["trace"] = to_json(c.trace);
  out["S0"] = num(c.S0);
  out["schedule"] = schedule;
  out["R0"] = num(c.R0);
  out["C2"] = {{"value", num(c.C2)}, {"assumed", c.C2_assumed}};
  out["log10_S_log_large"] = num(c.log10_S_log_large);
  return out;
}

json to_json(const Scenario& s) {
  json params = json::object();
  for (const auto& [k, v] : s.params) params[k] = num(v);
  json expected = json::object();
  for (const auto& [k, v] : s.expected) expected[k] = num(v);
  return {{"name", s.name},
          {"preset", s.preset},
          {"params", params},
          {"grid", {{"n", s.grid.n},
                    {"half_width", num(s.grid.half_width)},
                    {"center", to_json(s.grid.center)}}},
          {"has_solution", static_cast<bool>(s.u)},
          {"has_multiplier", static_cast<bool>(s.phi)},
          {"expected", expected},
          {"v_plus_max", opt(s.v_plus_max)},
          {"v_minus_max", opt(s.v_minus_max)},
          {"solution_residual", opt(s.solution_residual)},
          {"multiplier_residual", opt(s.multiplier_residual)},
          {"warnings", s.warnings}};
}

}  // namespace ucp
