#include "ucp/quasiball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "ucp/error.hpp"

namespace ucp {

namespace {

double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a, ap = p - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  const double t = len2 > 0 ? std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * ab));
}

double winding_number(const std::vector<Point>& poly, Point pole) {
  double total = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Point a = poly[k] - pole, b = poly[(k + 1) % poly.size()] - pole;
    total += std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
  }
  return total / (2.0 * std::numbers::pi);
}

void fill_radii(QuasiGeometry& g) {
  g.sigma = std::numeric_limits<double>::infinity();
  g.rho = 0.0;
  for (std::size_t k = 0; k < g.contour.size(); ++k) {
    const Point a = g.contour[k], b = g.contour[(k + 1) % g.contour.size()];
    g.sigma = std::min(g.sigma, segment_distance(g.pole, a, b));
    g.rho = std::max(g.rho, norm(a - g.pole));
  }
}

}  // namespace

QuasiGeometry extract_level_curve(const ScalarField& gamma, Point pole, double s,
                                  const std::function<double(Point)>& evaluator) {
  if (!(s > 0.0)) throw ValidationError("quasi_circle: s must be positive");
  const Grid2D& g = gamma.grid();
  const int n = g.n();
  const double c = ConstantGamma::level(s);
  auto phi = [&](int i, int j) { return gamma(i, j) - c; };
  auto key_h = [&](int i, int j) { return 2 * static_cast<long long>(g.index(i, j)); };
  auto key_v = [&](int i, int j) { return 2 * static_cast<long long>(g.index(i, j)) + 1; };

  std::unordered_map<long long, Point> crossing;
  auto cross_point = [&](long long key, int i0, int j0, int i1, int j1) {
    if (crossing.count(key)) return;
    const double f0 = phi(i0, j0), f1 = phi(i1, j1);
    const double t = f0 / (f0 - f1);
    const Point a = g.node(i0, j0), b = g.node(i1, j1);
    crossing[key] = a + t * (b - a);
  };

  std::vector<std::pair<long long, long long>> segments;
  bool touches_boundary = false;
  for (int j = 0; j < n - 1; ++j)
    for (int i = 0; i < n - 1; ++i) {
      const bool in00 = phi(i, j) >= 0, in10 = phi(i + 1, j) >= 0;
      const bool in01 = phi(i, j + 1) >= 0, in11 = phi(i + 1, j + 1) >= 0;
      const int mask = in00 | (in10 << 1) | (in11 << 2) | (in01 << 3);
      if (mask == 0 || mask == 15) continue;
      if (i == 0 || j == 0 || i == n - 2 || j == n - 2) touches_boundary = true;
      const long long bottom = key_h(i, j), top = key_h(i, j + 1);
      const long long left = key_v(i, j), right = key_v(i + 1, j);
      if (in00 != in10) cross_point(bottom, i, j, i + 1, j);
      if (in01 != in11) cross_point(top, i, j + 1, i + 1, j + 1);
      if (in00 != in01) cross_point(left, i, j, i, j + 1);
      if (in10 != in11) cross_point(right, i + 1, j, i + 1, j + 1);
      std::vector<long long> edges;
      if (in00 != in10) edges.push_back(bottom);
      if (in10 != in11) edges.push_back(right);
      if (in01 != in11) edges.push_back(top);
      if (in00 != in01) edges.push_back(left);
      if (edges.size() == 2) {
        segments.emplace_back(edges[0], edges[1]);
      } else {
        // saddle: corners alternate; decide connectivity from the cell-centre average
        const double centre = 0.25 * (phi(i, j) + phi(i + 1, j) + phi(i, j + 1) + phi(i + 1, j + 1));
        const bool centre_in = centre >= 0;
        // cut off the corners whose state differs from the centre
        if (in00 != centre_in) segments.emplace_back(bottom, left);
        if (in10 != centre_in) segments.emplace_back(bottom, right);
        if (in11 != centre_in) segments.emplace_back(right, top);
        if (in01 != centre_in) segments.emplace_back(top, left);
      }
    }
  if (segments.empty()) throw ValidationError("quasi_circle: level not bracketed on the grid");
  if (touches_boundary) throw ValidationError("quasi_circle: contour touches the grid boundary");

  std::unordered_map<long long, std::vector<std::size_t>> by_edge;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    by_edge[segments[k].first].push_back(k);
    by_edge[segments[k].second].push_back(k);
  }
  std::vector<char> used(segments.size(), 0);
  std::vector<std::vector<Point>> components;
  for (std::size_t start = 0; start < segments.size(); ++start) {
    if (used[start]) continue;
    std::vector<Point> poly;
    used[start] = 1;
    const long long first = segments[start].first;
    long long cur = segments[start].second;
    poly.push_back(crossing[first]);
    std::size_t seg = start;
    while (cur != first) {
      poly.push_back(crossing[cur]);
      const auto& cand = by_edge[cur];
      std::size_t next = segments.size();
      for (std::size_t c2 : cand)
        if (c2 != seg && !used[c2]) next = c2;
      if (next == segments.size()) throw ValidationError("quasi_circle: open contour");
      used[next] = 1;
      seg = next;
      cur = segments[next].first == cur ? segments[next].second : segments[next].first;
    }
    components.push_back(std::move(poly));
  }
  if (components.size() != 1)
    throw ValidationError("quasi_circle: level set has " + std::to_string(components.size()) +
                          " components");

  QuasiGeometry geom;
  geom.s = s;
  geom.pole = pole;
  geom.contour = std::move(components.front());
  const double wn = winding_number(geom.contour, pole);
  if (std::abs(std::abs(wn) - 1.0) > 1e-6)
    throw ValidationError("quasi_circle: contour does not wind once around the pole");
  if (wn < 0) std::reverse(geom.contour.begin(), geom.contour.end());
  fill_radii(geom);
  if (geom.sigma < 2 * g.h())
    throw ValidationError("quasi_circle: contour enters the 2h pole neighborhood");
  double tol = 0.0;
  for (const Point& v : geom.contour)
    tol = std::max(tol, std::abs((evaluator ? evaluator(v) : gamma.at(v)) - c));
  geom.contour_tolerance = tol;
  return geom;
}

QuasiGeometry quasi_circle(const GreensField& gf, double s) {
  return extract_level_curve(gf.gamma, gf.pole(), s, [&gf](Point z) { return gf(z); });
}

QuasiGeometry quasi_circle(const ConstantGamma& g0, const Grid2D& grid, double s) {
  const double h = grid.h();
  const Point pole = g0.pole();
  const ScalarField gamma = ScalarField::sample(grid, [&](Point z) {
    if (norm(z - pole) < 0.25 * h) return g0({pole.x + 0.5 * h, pole.y});
    return g0(z);
  });
  return extract_level_curve(gamma, pole, s, [&g0](Point z) { return g0(z); });
}

QuasiGeometry exact_quasi_circle(const ConstantGamma& g0, double s, int vertices) {
  QuasiGeometry geom;
  geom.s = s;
  geom.pole = g0.pole();
  geom.contour = g0.level_ellipse(s, vertices);
  geom.sigma = g0.inner_radius(s);
  geom.rho = g0.outer_radius(s);
  const double c = ConstantGamma::level(s);
  for (const Point& v : geom.contour)
    geom.contour_tolerance = std::max(geom.contour_tolerance, std::abs(g0(v) - c));
  return geom;
}

bool nested(const QuasiGeometry& inner, const QuasiGeometry& outer) {
  const Region r = outer.region();
  return std::all_of(inner.contour.begin(), inner.contour.end(),
                     [&r](Point p) { return region_contains(r, p); });
}

RadiiMargins check_radii_bounds(const QuasiGeometry& geom, double lambda, double p, double delta,
                                double c, double tolerance) {
  const double scale = std::pow(geom.s, p / (2.0 * std::numbers::pi));
  RadiiMargins m;
  m.rho_ratio = geom.rho / (scale / std::sqrt(lambda));
  m.sigma_ratio = geom.sigma / (scale * std::sqrt(lambda));
  m.log_rho_excess = std::log(m.rho_ratio);
  m.log_sigma_excess = -std::log(m.sigma_ratio);
  const double allowed = c * delta + tolerance;
  m.pass = m.log_rho_excess <= allowed && m.log_sigma_excess <= allowed;
  return m;
}

AnnulusExponents annulus_bounds(std::span<const QuasiGeometry> family) {
  std::vector<double> ls, lsig, lrho;
  for (const auto& g : family) {
    ls.push_back(std::log(g.s));
    lsig.push_back(std::log(g.sigma));
    lrho.push_back(std::log(g.rho));
  }
  return {least_squares_slope(ls, lsig), least_squares_slope(ls, lrho)};
}

RadiusModel RadiusModel::identity() {
  return {[](double s) { return s; }, [](double s) { return s; }, "identity"};
}

RadiusModel RadiusModel::constant(const ConstantGamma& g0) {
  return {[g0](double s) { return g0.inner_radius(s); },
          [g0](double s) { return g0.outer_radius(s); }, "constant"};
}

RadiusModel RadiusModel::numeric(std::shared_ptr<const GreensField> gf) {
  return {[gf](double s) { return quasi_circle(*gf, s).sigma; },
          [gf](double s) { return quasi_circle(*gf, s).rho; }, "numeric"};
}

}  // namespace ucp
