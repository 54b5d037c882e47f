#include "ucp/linear_solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "ucp/error.hpp"

namespace ucp {

namespace {

constexpr double kSolveTolerance = 1e-10;
constexpr int kMaxIterations = 20000;

template <typename Solver>
Eigen::VectorXd run(Solver& solver, const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                    const std::string& stage, int& iterations, double& residual) {
  solver.setTolerance(kSolveTolerance);
  solver.setMaxIterations(kMaxIterations);
  solver.compute(a);
  if (solver.info() != Eigen::Success)
    throw CertificationError(stage, "preconditioner factorization failed");
  Eigen::VectorXd x = solver.solve(b);
  iterations = static_cast<int>(solver.iterations());
  const double bn = b.norm();
  residual = bn > 0 ? (a * x - b).norm() / bn : 0.0;
  if (solver.info() != Eigen::Success || !(residual <= 10 * kSolveTolerance))
    throw CertificationError(stage, "non-convergent linear solve (relative residual " +
                                        std::to_string(residual) + ")");
  return x;
}

}  // namespace

DirichletSolution solve_dirichlet(const StencilOperator& stencil, const std::vector<char>& unknown,
                                  const ScalarField& rhs, const ScalarField& boundary,
                                  const std::string& stage) {
  const Grid2D& g = stencil.grid();
  if (!(rhs.grid() == g) || !(boundary.grid() == g) || unknown.size() != g.size())
    throw ValidationError(stage + ": grid mismatch in Dirichlet solve");
  const int n = g.n();
  std::vector<int> id(g.size(), -1);
  int count = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (unknown[g.index(i, j)]) {
        if (i == 0 || j == 0 || i == n - 1 || j == n - 1)
          throw ValidationError(stage + ": unknown node on the grid boundary");
        id[g.index(i, j)] = count++;
      }
  std::vector<double> values(boundary.values().begin(), boundary.values().end());
  if (count == 0) return {ScalarField(g, std::move(values)), 0, 0.0};

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(count) * 9);
  Eigen::VectorXd b(count);
  for (int j = 1; j < n - 1; ++j)
    for (int i = 1; i < n - 1; ++i) {
      const int row = id[g.index(i, j)];
      if (row < 0) continue;
      double r = rhs(i, j);
      const auto& w = stencil.weights(i, j);
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const double c = w[(dj + 1) * 3 + (di + 1)];
          if (c == 0.0) continue;
          const int col = id[g.index(i + di, j + dj)];
          if (col >= 0)
            trip.emplace_back(row, col, c);
          else
            r -= c * boundary(i + di, j + dj);
        }
      b[row] = r;
    }
  Eigen::SparseMatrix<double> a(count, count);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();

  int iterations = 0;
  double residual = 0.0;
  Eigen::VectorXd x;
  if (stencil.symmetric_matrix()) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    x = run(cg, a, b, stage, iterations, residual);
  } else {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> bicg;
    bicg.preconditioner().setDroptol(1e-6);
    bicg.preconditioner().setFillfactor(20);
    x = run(bicg, a, b, stage, iterations, residual);
  }
  for (std::size_t k = 0; k < g.size(); ++k)
    if (id[k] >= 0) values[k] = x[id[k]];
  return {ScalarField(g, std::move(values)), iterations, residual};
}

}  // namespace ucp
