#include "multiness/refit.hpp"

#include <cmath>

#include "multiness/errors.hpp"

namespace multiness {

namespace {

LowRankSym leading_part(const LowRankSym& block) {
  const Index r = numerical_rank(block);
  return LowRankSym{EigenPair{block.eig.vectors.leftCols(r), block.eig.values.head(r)}};
}

// Column layout of the GLM: common coefficients first, then each layer's block.
struct Design {
  Index common_rank = 0;
  std::vector<Index> offset;
  std::vector<Index> rank;
  Index width = 0;

  explicit Design(const LatentDecomposition& dec) : common_rank(dec.common.rank()) {
    width = common_rank;
    for (const auto& g : dec.individual) {
      offset.push_back(width);
      rank.push_back(g.rank());
      width += g.rank();
    }
  }
};

// Calls fn(k, i, j, local_row) for every observed pair i <= j, where local_row
// holds the layer-k predictors [common..., individual_k...].
template <typename Fn>
void for_each_triple(const MultiplexNetwork& net, const LatentDecomposition& dec, Fn&& fn) {
  const Index d1 = dec.common.rank();
  for (Index k = 0; k < net.m(); ++k) {
    const Index d2 = dec.individual[k].rank();
    Matrix w(net.n(), d1 + d2);
    w.leftCols(d1) = dec.common.eig.vectors;
    w.rightCols(d2) = dec.individual[k].eig.vectors;
    const Matrix& mask = net.mask().weights(k);
    Eigen::RowVectorXd row(d1 + d2);
    for (Index j = 0; j < net.n(); ++j) {
      for (Index i = 0; i <= j; ++i) {
        if (mask(i, j) == 0.0) continue;
        row = w.row(i).cwiseProduct(w.row(j));
        fn(k, i, j, row);
      }
    }
  }
}

// Scatter a layer-local vector / matrix into global coordinates.
struct Accumulator {
  const Design& design;
  Matrix gram;
  Vector rhs;
  explicit Accumulator(const Design& d) : design(d), gram(Matrix::Zero(d.width, d.width)), rhs(Vector::Zero(d.width)) {}

  void add(Index k, const Eigen::RowVectorXd& row, double weight, double target) {
    const Index d1 = design.common_rank;
    const Index d2 = design.rank[k];
    const Index off = design.offset[k];
    auto global = [&](Index local) { return local < d1 ? local : off + (local - d1); };
    for (Index a = 0; a < d1 + d2; ++a) {
      const Index ga = global(a);
      rhs(ga) += row(a) * target;
      for (Index b = 0; b <= a; ++b) gram(ga, global(b)) += weight * row(a) * row(b);
    }
  }

  Matrix symmetric_gram() const {
    Matrix g = gram;
    for (Index a = 0; a < g.rows(); ++a)
      for (Index b = 0; b < a; ++b) {
        const double v = g(a, b) + g(b, a);
        g(a, b) = v;
        g(b, a) = v;
      }
    return g;
  }
};

Vector current_coefficients(const LatentDecomposition& dec, const Design& design) {
  Vector beta(design.width);
  beta.head(design.common_rank) = dec.common.eig.values;
  for (std::size_t k = 0; k < dec.individual.size(); ++k)
    beta.segment(design.offset[k], design.rank[k]) = dec.individual[k].eig.values;
  return beta;
}

double local_dot(const Design& design, Index k, const Eigen::RowVectorXd& row, const Vector& beta) {
  const Index d1 = design.common_rank;
  return row.head(d1).dot(beta.head(d1)) + row.tail(design.rank[k]).dot(beta.segment(design.offset[k], design.rank[k]));
}

LowRankSym with_values(const LowRankSym& block, const Vector& values) {
  const auto order = magnitude_order(values);
  LowRankSym out;
  out.eig.vectors.resize(block.n(), values.size());
  out.eig.values.resize(values.size());
  for (Index j = 0; j < values.size(); ++j) {
    out.eig.vectors.col(j) = block.eig.vectors.col(order[j]);
    out.eig.values(j) = values(order[j]);
  }
  return out;
}

LatentDecomposition assemble(const LatentDecomposition& dec, const Design& design, const Vector& beta) {
  LatentDecomposition out;
  out.common = with_values(dec.common, beta.head(design.common_rank));
  for (std::size_t k = 0; k < dec.individual.size(); ++k)
    out.individual.push_back(with_values(dec.individual[k], beta.segment(design.offset[k], design.rank[k])));
  return out;
}

void require_full_rank(const Matrix& gram, double rank_tol) {
  Eigen::ColPivHouseholderQR<Matrix> qr(gram);
  qr.setThreshold(rank_tol);
  if (qr.rank() < gram.cols())
    throw DegenerateDesign("refit design is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                           std::to_string(gram.cols()) + " columns)");
}

double logistic_loss(const MultiplexNetwork& net, const LatentDecomposition& dec, const Design& design,
                     const Vector& beta) {
  double loss = 0.0;
  for_each_triple(net, dec, [&](Index k, Index i, Index j, const Eigen::RowVectorXd& row) {
    const double theta = local_dot(design, k, row, beta);
    loss += log1p_exp(theta) - net.layer(k)(i, j) * theta;
  });
  return loss;
}

}  // namespace

RefitResult refit_eigenvalues(const EdgeFamily& family, const MultiplexNetwork& net, const LatentDecomposition& dec,
                              const RefitOptions& options) {
  if (dec.n() != net.n() || dec.m() != net.m()) throw InvalidInput("decomposition dimensions do not match the network");
  validate_support(family, net);

  LatentDecomposition trimmed;
  trimmed.common = leading_part(dec.common);
  for (const auto& g : dec.individual) trimmed.individual.push_back(leading_part(g));
  const Design design(trimmed);

  RefitResult result;
  if (design.width == 0) {
    result.decomposition = std::move(trimmed);
    return result;
  }

  if (family.kind() == EdgeFamily::Kind::GaussianIdentity) {
    Accumulator acc(design);
    for_each_triple(net, trimmed, [&](Index k, Index i, Index j, const Eigen::RowVectorXd& row) {
      acc.add(k, row, 1.0, net.layer(k)(i, j));
    });
    const Matrix gram = acc.symmetric_gram();
    require_full_rank(gram, options.rank_tol);
    const Vector beta = gram.ldlt().solve(acc.rhs);
    if (!beta.allFinite()) throw NumericalFailure("refit least-squares solve produced non-finite values");
    result.decomposition = assemble(trimmed, design, beta);
    return result;
  }

  // Bernoulli: damped Newton from the convex-fit eigenvalues.
  {
    Accumulator design_check(design);
    for_each_triple(net, trimmed, [&](Index k, Index, Index, const Eigen::RowVectorXd& row) {
      design_check.add(k, row, 1.0, 0.0);
    });
    require_full_rank(design_check.symmetric_gram(), options.rank_tol);
  }

  Vector beta = current_coefficients(trimmed, design);
  double loss = logistic_loss(net, trimmed, design, beta);
  bool converged = false;
  for (int iter = 0; iter < options.max_newton_iter; ++iter) {
    Accumulator acc(design);
    for_each_triple(net, trimmed, [&](Index k, Index i, Index j, const Eigen::RowVectorXd& row) {
      const double p = logistic(local_dot(design, k, row, beta));
      acc.add(k, row, p * (1.0 - p), p - net.layer(k)(i, j));
    });
    const Vector& gradient = acc.rhs;
    result.newton_iterations = iter;
    if (gradient.lpNorm<Eigen::Infinity>() <= options.gradient_tol) {
      converged = true;
      break;
    }
    const Matrix hessian = acc.symmetric_gram();
    const Vector step = hessian.ldlt().solve(gradient);
    if (!step.allFinite()) break;

    double scale = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
      const Vector trial = beta - scale * step;
      const double trial_loss = logistic_loss(net, trimmed, design, trial);
      if (trial_loss <= loss) {
        beta = trial;
        loss = trial_loss;
        improved = true;
        break;
      }
    }
    if (!improved || step.lpNorm<Eigen::Infinity>() * scale <= 1e-14 * (1.0 + beta.lpNorm<Eigen::Infinity>())) {
      // No further progress possible in double precision: accept as stationary.
      converged = improved || gradient.lpNorm<Eigen::Infinity>() <= 1e-6;
      break;
    }
  }

  if (!converged) {
    result.fell_back = true;
    result.warnings.push_back("logistic refit did not converge; keeping convex-fit eigenvalues");
    result.decomposition = std::move(trimmed);
    return result;
  }
  result.decomposition = assemble(trimmed, design, beta);
  return result;
}

FitResult fit_plus(const EdgeFamily& family, const MultiplexNetwork& net, const SolverConfig& cfg,
                   const RefitOptions& options) {
  FitResult convex = fit(family, net, cfg);
  RefitResult refit = refit_eigenvalues(family, net, convex.decomposition, options);
  convex.decomposition = std::move(refit.decomposition);
  convex.report.refitted = true;
  for (auto& w : refit.warnings) convex.report.warnings.push_back(std::move(w));
  return convex;
}

}  // namespace multiness
