#pragma once

// Blockwise proximal gradient descent for the nuclear-norm penalized multiplex
// objective
//
//   sum_k sum_{(i,j) observed} loss(A_kij; F_ij + G_kij)
//     + lambda ||F||_* + sum_k lambda alpha_k ||G_k||_*
//
// where the loss sum runs over ordered entries, so its entrywise gradient is the
// masked residual g(F + G_k) - A_k. One sweep updates F with step eta/m and
// threshold eta*lambda/m, then every G_k (using the new F) with step eta and
// threshold eta*lambda*alpha_k. In the Gaussian family with eta = 1 this is the
// alternating soft-thresholding scheme
//   F <- S_{lambda/m}( mean_k (A_k - G_k) ),  G_k <- S_{lambda alpha_k}(A_k - F).

#include <optional>
#include <string>
#include <vector>

#include "multiness/model.hpp"

namespace multiness {

struct SolverConfig {
  double lambda = 0.0;
  // Individual penalty weights; empty means m^{-1/2} for every layer.
  std::vector<double> alphas;
  double eta = 1.0;
  int max_iter = 200;
  // Stop when the relative objective decrease is below rel_tol and no block
  // moved by more than step_tol (relative Frobenius) in the last sweep.
  double rel_tol = 1e-6;
  double step_tol = 1e-7;
  bool psd_constrain = false;
  // Fixed eigensolver budget per prox; retried with a doubled budget when exceeded.
  std::optional<Index> svd_budget;
  // Without a fixed budget, use 2 * (previous rank) + 10 once ranks are known.
  bool adaptive_budget = true;
  // Rank of the initializer [mean_k A_k]_{d1}; defaults to n (no truncation).
  std::optional<Index> d1_init;
  // Worker threads for the individual-block updates.
  int threads = 1;

  // Validates ranges and returns the per-layer alphas (defaults filled in).
  std::vector<double> resolved_alphas(Index m) const;
};

struct FitReport {
  // Penalized objective at the initializer followed by one value per sweep.
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  Index common_rank = 0;
  std::vector<Index> individual_ranks;
  double lambda = 0.0;
  std::vector<double> alphas;
  double final_eta = 1.0;
  double wall_time_seconds = 0.0;
  bool refitted = false;
  std::vector<std::string> warnings;
};

struct FitResult {
  LatentDecomposition decomposition;
  FitReport report;
};

struct StepResult {
  LatentDecomposition decomposition;
  double objective = 0.0;
};

// [ (1/m) sum_k A_k ]_{d1} with unobserved entries read as 0; the diagonal is
// zeroed when the network has no self-loops.
Matrix initialize_common(const MultiplexNetwork& net, Index d1);

// Penalized objective; nuclear norms come from the stored eigenvalues.
double objective(const EdgeFamily& family, const MultiplexNetwork& net, const LatentDecomposition& dec,
                 double lambda, const std::vector<double>& alphas);

// One Gauss-Seidel sweep (F, then every G_k) at step cfg.eta.
StepResult pgd_step(const EdgeFamily& family, const MultiplexNetwork& net, const LatentDecomposition& dec,
                    const SolverConfig& cfg);

// Iterates sweeps from (initialize_common, G_k = 0). The step is halved whenever a
// sweep would increase the objective.
FitResult fit(const EdgeFamily& family, const MultiplexNetwork& net, const SolverConfig& cfg);

// Ranks read off a decomposition with the default numerical-rank tolerance.
Index numerical_rank(const LowRankSym& block);

}  // namespace multiness
