#include "ucp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "ucp/error.hpp"

namespace ucp {

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_field_csv(const ComplexField& f, const std::filesystem::path& path,
                     const std::string& comment) {
  auto out = open_out(path);
  out.precision(17);
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "x,y,re,im\n";
  const Grid2D& g = f.grid();
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      const cplx v = f(i, j);
      out << g.x(i) << ',' << g.y(j) << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

void write_field_csv(const ScalarField& f, const std::filesystem::path& path,
                     const std::string& comment) {
  write_field_csv(to_complex(f), path, comment);
}

ComplexField read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open field file " + path.string());
  std::string line;
  std::vector<double> xs, ys;
  std::vector<cplx> vals;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("x,y", 0) == 0) continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, y, re, im = 0.0;
    if (!(row >> x >> y >> re)) throw ValidationError("malformed row in " + path.string());
    row >> im;
    xs.push_back(x);
    ys.push_back(y);
    vals.emplace_back(re, im);
  }
  const auto count = static_cast<std::int64_t>(vals.size());
  const auto n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(count))));
  if (static_cast<std::int64_t>(n) * n != count || n < 16)
    throw ValidationError("field file " + path.string() + " is not a square grid with n >= 16");
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  const double hw = 0.5 * (*xmax - *xmin);
  if (std::abs((*ymax - *ymin) - (*xmax - *xmin)) > 1e-9 * hw)
    throw ValidationError("field file " + path.string() + " does not cover a square");
  Grid2D grid({0.5 * (*xmin + *xmax), 0.5 * (*ymin + *ymax)}, hw, n);
  std::vector<cplx> ordered(grid.size());
  std::vector<char> seen(grid.size(), 0);
  for (std::size_t k = 0; k < vals.size(); ++k) {
    const int i = static_cast<int>(std::lround((xs[k] - grid.x(0)) / grid.h()));
    const int j = static_cast<int>(std::lround((ys[k] - grid.y(0)) / grid.h()));
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw ValidationError("field file " + path.string() + " has an off-grid node");
    ordered[grid.index(i, j)] = vals[k];
    seen[grid.index(i, j)] = 1;
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0)
    throw ValidationError("field file " + path.string() + " has missing nodes");
  return ComplexField(grid, std::move(ordered));
}

void write_field_binary(const ComplexField& f, const std::filesystem::path& path) {
  auto out = open_out(path, true);
  const Grid2D& g = f.grid();
  const std::int64_t n = g.n();
  const double header[3] = {g.half_width(), g.center().x, g.center().y};
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  for (const cplx& v : f.values()) {
    const double pair[2] = {v.real(), v.imag()};
    out.write(reinterpret_cast<const char*>(pair), sizeof pair);
  }
}

ComplexField read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open field file " + path.string());
  std::int64_t n = 0;
  double header[3];
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || n < 16 || n > (1 << 15))
    throw ValidationError("field file " + path.string() + " has a bad header");
  Grid2D grid({header[1], header[2]}, header[0], static_cast<int>(n));
  std::vector<cplx> vals(grid.size());
  for (auto& v : vals) {
    double pair[2];
    in.read(reinterpret_cast<char*>(pair), sizeof pair);
    v = {pair[0], pair[1]};
  }
  if (!in) throw ValidationError("field file " + path.string() + " is truncated");
  return ComplexField(grid, std::move(vals));
}

ComplexField read_field(const std::filesystem::path& path) {
  return path.extension() == ".bin" ? read_field_binary(path) : read_field_csv(path);
}

}  // namespace ucp
