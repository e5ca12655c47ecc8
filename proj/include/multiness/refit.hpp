#pragma once

// Eigenvalue refitting: keep the eigenvectors and ranks of a convex fit and
// re-estimate the eigenvalues by maximizing the unpenalized likelihood over
// observed pairs i <= j. This is a GLM whose predictors are the products
// V_il V_jl (common) and U_k,il U_k,jl (layer k only): least squares for the
// Gaussian family, logistic regression for the Bernoulli family.

#include <string>
#include <vector>

#include "multiness/solver.hpp"

namespace multiness {

struct RefitOptions {
  int max_newton_iter = 50;
  double gradient_tol = 1e-8;
  // Reciprocal condition number below which the design counts as rank deficient.
  double rank_tol = 1e-10;
};

struct RefitResult {
  LatentDecomposition decomposition;
  // Set when the logistic fit did not converge and the input eigenvalues were kept.
  bool fell_back = false;
  int newton_iterations = 0;
  std::vector<std::string> warnings;
};

// Works on the eigenpairs that pass the default numerical-rank tolerance;
// the rest are dropped. Throws DegenerateDesign on a rank-deficient design.
RefitResult refit_eigenvalues(const EdgeFamily& family, const MultiplexNetwork& net, const LatentDecomposition& dec,
                              const RefitOptions& options = {});

// Convex fit followed by eigenvalue refitting.
FitResult fit_plus(const EdgeFamily& family, const MultiplexNetwork& net, const SolverConfig& cfg,
                   const RefitOptions& options = {});

}  // namespace multiness
