#include "multiness/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "multiness/block_krylov.hpp"
#include "multiness/errors.hpp"

namespace multiness {

namespace {

// Below this size a dense decomposition always wins.
constexpr Index kKrylovMinDim = 64;

EigenPair select_columns(const Matrix& vectors, const Vector& values,
                         const std::vector<Index>& order, Index count) {
  EigenPair out;
  out.vectors.resize(vectors.rows(), count);
  out.values.resize(count);
  for (Index j = 0; j < count; ++j) {
    out.vectors.col(j) = vectors.col(order[j]);
    out.values(j) = values(order[j]);
  }
  return out;
}

// Leading `count` pairs, via block Krylov when that is clearly cheaper.
EigenPair eigen_leading(const Matrix& m, Index count) {
  const Index n = m.rows();
  if (n >= kKrylovMinDim && 4 * count < n) {
    if (auto pairs = detail::block_krylov_leading(m, count)) return *std::move(pairs);
  }
  EigenPair full = eigen_full(m);
  EigenPair out;
  out.vectors = full.vectors.leftCols(count);
  out.values = full.values.head(count);
  return out;
}

}  // namespace

Matrix EigenPair::reconstruct() const {
  Matrix r = (vectors * values.asDiagonal()) * vectors.transpose();
  return (r + r.transpose()) * 0.5;
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw InvalidInput(std::string(what) + " contains non-finite entries");
}

Matrix symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("matrix is not square");
  require_finite(m, "matrix");
  return (m + m.transpose()) * 0.5;
}

std::vector<Index> magnitude_order(const Vector& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(values(a)) > std::abs(values(b));
  });
  if (order.empty()) return order;
  const double scale = std::max(1.0, std::abs(values(order.front())));
  const double tie = 1e-12 * scale;
  // Within groups of (numerically) equal magnitude, positives go first.
  auto group_begin = order.begin();
  while (group_begin != order.end()) {
    const double head = std::abs(values(*group_begin));
    auto group_end = std::find_if(group_begin, order.end(), [&](Index i) {
      return head - std::abs(values(i)) > tie;
    });
    std::stable_partition(group_begin, group_end, [&](Index i) { return values(i) > 0.0; });
    group_begin = group_end;
  }
  return order;
}

EigenPair eigen_full(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
  const auto order = magnitude_order(solver.eigenvalues());
  return select_columns(solver.eigenvectors(), solver.eigenvalues(), order, m.rows());
}

EigenPair eigen_truncated(const Matrix& m, Index d) {
  if (d < 1 || d > m.rows()) throw InvalidInput("eigen_truncated: d must lie in [1, n]");
  return eigen_leading(m, d);
}

EigenPair soft_threshold_eigen(const Matrix& m, double threshold, std::optional<Index> budget,
                               bool nonnegative) {
  require_finite(m, "soft_threshold_svd input");
  if (!(threshold >= 0.0)) throw InvalidInput("soft_threshold_svd: threshold must be >= 0");
  const Index n = m.rows();
  if (budget && *budget < 1) throw InvalidInput("soft_threshold_svd: budget must be >= 1");

  EigenPair pairs;
  if (budget && *budget < n) {
    pairs = eigen_leading(m, *budget + 1);
    if (std::abs(pairs.values(*budget)) > threshold) {
      throw BudgetExceeded(*budget, "soft_threshold_svd: more than " + std::to_string(*budget) +
                                        " eigenvalues exceed the threshold");
    }
  } else {
    pairs = eigen_full(m);
  }

  std::vector<Index> keep;
  for (Index j = 0; j < pairs.size(); ++j) {
    const double g = pairs.values(j);
    if (nonnegative ? g > threshold : std::abs(g) > threshold) keep.push_back(j);
  }
  EigenPair out;
  out.vectors.resize(n, static_cast<Index>(keep.size()));
  out.values.resize(static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const Index j = keep[c];
    const double g = pairs.values(j);
    out.vectors.col(static_cast<Index>(c)) = pairs.vectors.col(j);
    out.values(static_cast<Index>(c)) = (g > 0.0 ? 1.0 : -1.0) * (std::abs(g) - threshold);
  }
  return out;
}

Matrix soft_threshold_svd(const Matrix& m, double threshold, std::optional<Index> budget) {
  return soft_threshold_eigen(m, threshold, budget).reconstruct();
}

EigenPair truncate_rank_eigen(const Matrix& m, Index d) {
  if (d < 0 || d > m.rows()) throw InvalidInput("truncate_rank: d must lie in [0, n]");
  require_finite(m, "truncate_rank input");
  if (d == 0) return EigenPair{Matrix(m.rows(), 0), Vector(0)};
  return eigen_leading(m, d);
}

Matrix truncate_rank(const Matrix& m, Index d) { return truncate_rank_eigen(m, d).reconstruct(); }

double hollow_frobenius(const Matrix& m) {
  double sum = 0.0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j) sum += m(i, j) * m(i, j);
    }
  }
  return std::sqrt(sum);
}

Matrix psd_project(const Matrix& m) {
  require_finite(m, "psd_project input");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
  const Vector clipped = solver.eigenvalues().cwiseMax(0.0);
  Matrix r = (solver.eigenvectors() * clipped.asDiagonal()) * solver.eigenvectors().transpose();
  return (r + r.transpose()) * 0.5;
}

Index numerical_rank(const Vector& ordered_values, double tol) {
  if (ordered_values.size() == 0) return 0;
  const double cut = tol * std::max(1.0, ordered_values.cwiseAbs().maxCoeff());
  return (ordered_values.array().abs() > cut).count();
}

Index numerical_rank(const Matrix& m, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("numerical_rank: tol must be > 0");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
  return numerical_rank(solver.eigenvalues(), tol);
}

double nuclear_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
  return solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace multiness
