#pragma once

// Dense symmetric-matrix primitives: soft singular-value thresholding, rank
// truncation, hollow norms, truncated eigendecomposition, PSD projection.
//
// Symmetric matrices are plain Eigen::MatrixXd. Symmetry is imposed once on
// ingestion (symmetrized()); every operation here maps symmetric input to
// symmetric output exactly.

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace multiness {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Leading eigenpairs of a symmetric matrix, ordered by decreasing |value|.
// Equal magnitudes put the positive value first.
struct EigenPair {
  Matrix vectors;  // n x d, orthonormal columns
  Vector values;   // length d

  Index dim() const { return vectors.rows(); }
  Index size() const { return values.size(); }
  Matrix reconstruct() const;
  double nuclear_norm() const { return values.cwiseAbs().sum(); }
};

// Default relative tolerance for reading ranks off thresholded matrices.
inline constexpr double kDefaultRankTol = 1e-8;

// (M + M^T) / 2. Throws InvalidInput on non-square or non-finite input.
Matrix symmetrized(const Matrix& m);

void require_finite(const Matrix& m, const char* what);

// Permutation sorting `values` by decreasing magnitude, positive first on ties,
// solver order preserved otherwise.
std::vector<Index> magnitude_order(const Vector& values);

// Full eigendecomposition ordered by magnitude.
EigenPair eigen_full(const Matrix& m);

// Leading d eigenpairs by magnitude (1 <= d <= n).
EigenPair eigen_truncated(const Matrix& m, Index d);

// Soft singular-value thresholding: prox of T * nuclear norm. For symmetric input
// the eigenvalues are shrunk toward zero by T. With a budget only the leading
// `budget` eigenpairs are computed; throws BudgetExceeded if the (budget+1)-th
// magnitude still exceeds T. `nonnegative` additionally clips negative eigenvalues
// (the PSD-constrained prox).
EigenPair soft_threshold_eigen(const Matrix& m, double threshold,
                               std::optional<Index> budget = std::nullopt,
                               bool nonnegative = false);
Matrix soft_threshold_svd(const Matrix& m, double threshold,
                          std::optional<Index> budget = std::nullopt);

// Best rank-d approximation [M]_d (Eckart-Young), d = 0 gives the zero matrix.
EigenPair truncate_rank_eigen(const Matrix& m, Index d);
Matrix truncate_rank(const Matrix& m, Index d);

// Frobenius norm over off-diagonal entries.
double hollow_frobenius(const Matrix& m);

Matrix psd_project(const Matrix& m);

// Number of eigenvalues with |gamma| > tol * max(1, |gamma_1|).
Index numerical_rank(const Matrix& m, double tol = kDefaultRankTol);
Index numerical_rank(const Vector& ordered_values, double tol = kDefaultRankTol);

// Nuclear norm of a symmetric matrix (sum of |eigenvalues|).
double nuclear_norm(const Matrix& m);

}  // namespace multiness
