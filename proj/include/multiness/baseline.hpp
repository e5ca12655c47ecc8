#pragma once

// Reference estimators: non-convex alternating rank truncation with known ranks,
// and single-layer low-rank imputation by iterative singular value thresholding.

#include <optional>
#include <string>
#include <vector>

#include "multiness/model.hpp"

namespace multiness {

struct OracleResult {
  LatentDecomposition decomposition;
  int iterations = 0;
  bool converged = false;
};

// From G_k = 0, alternates F <- [mean_k (A_k - G_k)]_{d1} and G_k <- [A_k - F]_{d2}
// on the full matrices (diagonal included) until the relative change of the
// stacked blocks drops below tol, or t_max iterations.
OracleResult oracle_alternating(const MultiplexNetwork& net, Index d1, Index d2, int t_max = 100, double tol = 1e-6);

struct SvtOptions {
  // Soft threshold; when neither is set the default (2 + delta) sigma_MAD sqrt(n)
  // is used, sigma_MAD taken from the zero-filled matrix.
  std::optional<double> threshold;
  // Hard rank constraint instead of soft thresholding.
  std::optional<Index> rank;
  double delta = 0.309;
  int max_iter = 500;
  double tol = 1e-6;
};

struct SvtResult {
  Matrix completed;
  double threshold = 0.0;
  // 0.5 ||mask o (A - X)||_F^2 + threshold ||X||_* after each pass (soft mode).
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

// Repeats X <- S_T(mask o A + (1 - mask) o X) from X = 0. `mask` is a symmetric
// 0/1 matrix of observed entries.
SvtResult svt_impute(const Matrix& a, const Matrix& mask, const SvtOptions& options = {});

}  // namespace multiness
