#include "multiness/baseline.hpp"

#include <cmath>

#include "multiness/errors.hpp"
#include "multiness/tuning.hpp"

namespace multiness {

namespace {

double stacked_change(const Matrix& f0, const std::vector<Matrix>& g0, const Matrix& f1,
                      const std::vector<Matrix>& g1) {
  double diff = (f1 - f0).squaredNorm();
  double scale = std::max(f0.squaredNorm(), f1.squaredNorm());
  for (std::size_t k = 0; k < g0.size(); ++k) {
    diff += (g1[k] - g0[k]).squaredNorm();
    scale += std::max(g0[k].squaredNorm(), g1[k].squaredNorm());
  }
  return scale == 0.0 ? 0.0 : std::sqrt(diff / scale);
}

EigenPair soft_threshold_budgeted(const Matrix& x, double threshold, Index previous_rank) {
  std::optional<Index> budget;
  if (previous_rank >= 0) budget = 2 * previous_rank + 10;
  while (budget && *budget < x.rows()) {
    try {
      return soft_threshold_eigen(x, threshold, budget);
    } catch (const BudgetExceeded&) {
      budget = 2 * *budget;
    }
  }
  return soft_threshold_eigen(x, threshold);
}

}  // namespace

OracleResult oracle_alternating(const MultiplexNetwork& net, Index d1, Index d2, int t_max, double tol) {
  const Index n = net.n();
  const Index m = net.m();
  if (d1 < 0 || d1 > n || d2 < 0 || d2 > n) throw InvalidInput("oracle ranks must lie in [0, n]");
  if (t_max < 1) throw InvalidInput("t_max must be >= 1");

  OracleResult out;
  Matrix f = Matrix::Zero(n, n);
  std::vector<Matrix> g(static_cast<std::size_t>(m), Matrix::Zero(n, n));
  EigenPair f_eig{Matrix(n, 0), Vector(0)};
  std::vector<EigenPair> g_eig(static_cast<std::size_t>(m), EigenPair{Matrix(n, 0), Vector(0)});

  for (int t = 1; t <= t_max; ++t) {
    Matrix mean = Matrix::Zero(n, n);
    for (Index k = 0; k < m; ++k) mean += net.layer(k) - g[k];
    mean /= static_cast<double>(m);
    EigenPair nf = truncate_rank_eigen(mean, d1);
    Matrix f_next = nf.reconstruct();
    std::vector<Matrix> g_next(static_cast<std::size_t>(m));
    for (Index k = 0; k < m; ++k) {
      g_eig[k] = truncate_rank_eigen(net.layer(k) - f_next, d2);
      g_next[k] = g_eig[k].reconstruct();
    }
    const double change = stacked_change(f, g, f_next, g_next);
    f_eig = std::move(nf);
    f = std::move(f_next);
    g = std::move(g_next);
    out.iterations = t;
    // Without individual structure one step is already the fixed point.
    if (d2 == 0 || change < tol) {
      out.converged = true;
      break;
    }
  }
  out.decomposition.common = LowRankSym{std::move(f_eig)};
  for (auto& e : g_eig) out.decomposition.individual.push_back(LowRankSym{std::move(e)});
  return out;
}

SvtResult svt_impute(const Matrix& a, const Matrix& mask, const SvtOptions& options) {
  if (a.rows() != a.cols() || mask.rows() != a.rows() || mask.cols() != a.cols())
    throw InvalidInput("svt_impute needs square matrices of equal size");
  require_finite(a, "svt_impute input");
  if (!mask.isApprox(mask.transpose(), 0.0)) throw InvalidInput("svt_impute mask must be symmetric");
  if (options.rank && (*options.rank < 0 || *options.rank > a.rows()))
    throw InvalidInput("svt_impute rank must lie in [0, n]");
  if (options.threshold && !(*options.threshold >= 0.0)) throw InvalidInput("svt_impute threshold must be >= 0");
  if (options.max_iter < 1) throw InvalidInput("svt_impute max_iter must be >= 1");

  const Index n = a.rows();
  const Matrix observed = mask.cwiseProduct(a);
  const Matrix missing = Matrix::Ones(n, n) - mask;

  SvtResult out;
  for (Index i = 0; i < n; ++i)
    if (mask.row(i).sum() == 0.0) {
      out.warnings.push_back("ImputationUnderdetermined: row " + std::to_string(i + 1) +
                             " has no observed entries; it keeps the zero baseline where unconstrained");
    }
  if (!options.rank) {
    out.threshold = options.threshold.value_or((2.0 + options.delta) * sigma_mad(observed) *
                                               std::sqrt(static_cast<double>(n)));
  }

  Matrix x = Matrix::Zero(n, n);
  Index rank_hint = -1;
  for (int it = 1; it <= options.max_iter; ++it) {
    const Matrix filled = observed + missing.cwiseProduct(x);
    Matrix next;
    double nuclear = 0.0;
    if (options.rank) {
      next = truncate_rank(filled, *options.rank);
    } else {
      const EigenPair e = soft_threshold_budgeted(filled, out.threshold, rank_hint);
      rank_hint = e.size();
      nuclear = e.nuclear_norm();
      next = e.reconstruct();
    }
    const double scale = std::max(x.norm(), next.norm());
    const double change = scale == 0.0 ? 0.0 : (next - x).norm() / scale;
    x = std::move(next);
    out.iterations = it;
    if (!options.rank)
      out.objective_trace.push_back(0.5 * mask.cwiseProduct(a - x).squaredNorm() + out.threshold * nuclear);
    if (change < options.tol) {
      out.converged = true;
      break;
    }
  }
  out.completed = std::move(x);
  return out;
}

}  // namespace multiness
