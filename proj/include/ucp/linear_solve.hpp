#pragma once

#include <string>
#include <vector>

#include "ucp/field.hpp"
#include "ucp/operator.hpp"

namespace ucp {

struct DirichletSolution {
  ScalarField u;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves (𝓛u)(node) = rhs(node) at every node with unknown[node] != 0, with u fixed to
/// `boundary` at all other nodes. Unknown nodes must be interior. Uses conjugate gradients with
/// incomplete Cholesky when the stencil is symmetric, BiCGSTAB with incomplete LUT otherwise;
/// stops at relative residual 1e−10. Throws CertificationError(stage, ...) on non-convergence.
DirichletSolution solve_dirichlet(const StencilOperator& stencil, const std::vector<char>& unknown,
                                  const ScalarField& rhs, const ScalarField& boundary,
                                  const std::string& stage);

}  // namespace ucp
