#pragma once

// Latent positions from estimated matrices, column-sign alignment, the relative
// error metrics used for evaluation, and the layer-graph identifiability check.

#include <utility>
#include <vector>

#include "multiness/model.hpp"

namespace multiness {

struct Embedding {
  Matrix coords;  // n x d
  Signature signature;
  // |gamma| of the columns, in column order (zero for padding columns).
  Vector magnitudes;
};

// Adjacency spectral embedding with indefinite signature: eigenvectors scaled by
// |gamma|^{1/2} for the leading d eigenvalues by magnitude. Columns with positive
// gamma come first, then negative ones, each block by decreasing |gamma|.
// Dimensions beyond the numerical rank become zero columns at the end of the
// positive block, so coords I_{p,q} coords^T = [M]_d.
Embedding ase(const Matrix& m, Index d);
Embedding ase(const LowRankSym& block, Index d);

struct Alignment {
  Matrix aligned;
  std::vector<int> signs;
};

// Per-column sign flip bringing xhat closest to xref; ties keep +1.
Alignment align_columns(const Matrix& xhat, const Matrix& xref);

struct ErrorMetrics {
  double err_f = 0.0;
  double err_g = 0.0;
  double err_p = 0.0;
  // False when the truth had zero hollow norm and the absolute error is reported.
  bool f_normalized = true;
  bool g_normalized = true;
  bool p_normalized = true;
};

// Relative hollow-Frobenius errors. Err_G and Err_P average over layers; Err_P
// compares g(F + G_k), i.e. probabilities for the Bernoulli family.
ErrorMetrics error_metrics(const EdgeFamily& family, const LatentDecomposition& estimate,
                           const LatentDecomposition& truth);
ErrorMetrics error_metrics(const EdgeFamily& family, const Matrix& f_hat, const std::vector<Matrix>& g_hat,
                           const Matrix& f_true, const std::vector<Matrix>& g_true);

struct IdentifiabilityResult {
  std::vector<std::pair<Index, Index>> edges;  // 0-based layer pairs k < l
  bool connected = false;
};

// Edge (k, l) iff [V U_k U_l] has full column rank at relative tolerance tol
// (singular values against the largest one). Connectivity by breadth-first search.
IdentifiabilityResult identifiability_check(const Matrix& v, const std::vector<Matrix>& u, double tol = 1e-8);

// Consecutive gaps |gamma_j| - |gamma_{j+1}| of the leading d magnitudes (the last
// entry is |gamma_d| - |gamma_{d+1}|), for judging whether sign alignment is safe.
Vector eigen_gaps(const Matrix& m, Index d);

}  // namespace multiness
