#include "multiness/block_krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace multiness::detail {

namespace {

// Fixed seed: the start block only needs to be generic, and results must not
// depend on anything outside the input matrix.
constexpr std::uint64_t kStartSeed = 0x6d756c74696e6573ULL;

Matrix gaussian_block(Index rows, Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(gen);
  return out;
}

// Orthonormalize `w` against the first `k` columns of `basis` and itself
// (classical Gram-Schmidt, applied twice). Columns that collapse are replaced
// with fresh random directions so the block keeps its width.
Matrix orthonormal_extension(const Matrix& basis, Index k, Matrix w, std::mt19937_64& gen) {
  const Index n = w.rows();
  for (Index j = 0; j < w.cols(); ++j) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double before = w.col(j).norm();
      for (int pass = 0; pass < 2; ++pass) {
        if (k > 0) w.col(j) -= basis.leftCols(k) * (basis.leftCols(k).transpose() * w.col(j));
        if (j > 0) w.col(j) -= w.leftCols(j) * (w.leftCols(j).transpose() * w.col(j));
      }
      const double after = w.col(j).norm();
      if (after > 1e-8 * before && after > std::numeric_limits<double>::min()) {
        w.col(j) /= after;
        break;
      }
      w.col(j) = gaussian_block(n, 1, gen);
    }
  }
  return w;
}

}  // namespace

std::optional<EigenPair> block_krylov_leading(const Matrix& m, Index count, double tol) {
  const Index n = m.rows();
  if (count <= 0) return EigenPair{Matrix(n, 0), Vector(0)};
  if (count >= n) return std::nullopt;

  const Index block = std::clamp<Index>(count, 2, 8);
  const Index limit = n / 2;
  if (count + block > limit) return std::nullopt;

  std::mt19937_64 gen(kStartSeed);
  Matrix q(n, limit);
  Matrix mq(n, limit);
  Index k = 0;

  Matrix fresh = orthonormal_extension(q, 0, gaussian_block(n, block, gen), gen);
  q.leftCols(block) = fresh;
  mq.leftCols(block).noalias() = m * fresh;
  k = block;

  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, m.norm());

  while (true) {
    if (k >= count) {
      Matrix h = q.leftCols(k).transpose() * mq.leftCols(k);
      h = (h + h.transpose()) * 0.5;
      Eigen::SelfAdjointEigenSolver<Matrix> small(h);
      if (small.info() == Eigen::Success) {
        const auto order = magnitude_order(small.eigenvalues());
        Matrix s(k, count);
        Vector theta(count);
        for (Index j = 0; j < count; ++j) {
          s.col(j) = small.eigenvectors().col(order[j]);
          theta(j) = small.eigenvalues()(order[j]);
        }
        const Matrix x = q.leftCols(k) * s;
        const Matrix residual = mq.leftCols(k) * s - x * theta.asDiagonal();
        bool converged = true;
        for (Index j = 0; j < count && converged; ++j) {
          const double allowed = std::max(tol * std::max(1.0, std::abs(theta(j))), floor);
          converged = residual.col(j).norm() <= allowed;
        }
        if (converged) return EigenPair{x, theta};
      }
    }
    if (k + block > limit) return std::nullopt;
    Matrix next = orthonormal_extension(q, k, mq.middleCols(k - block, block), gen);
    q.middleCols(k, block) = next;
    mq.middleCols(k, block).noalias() = m * next;
    k += block;
  }
}

}  // namespace multiness::detail
