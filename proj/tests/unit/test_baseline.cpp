#include <gtest/gtest.h>

#include <cmath>

#include "multiness/baseline.hpp"
#include "multiness/linalg.hpp"
#include "multiness/simulate.hpp"
#include "oracles.hpp"

using namespace multiness;

namespace {

Matrix mean_layer(const MultiplexNetwork& net) {
  Matrix s = Matrix::Zero(net.n(), net.n());
  for (const auto& a : net.layers()) s += a;
  return s / static_cast<double>(net.m());
}

Matrix observed_mask(Index n, double missing, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution drop(missing);
  Matrix w = Matrix::Ones(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < j; ++i)
      if (drop(gen)) w(i, j) = w(j, i) = 0.0;
  return w;
}

}  // namespace

TEST(Oracle, NoIndividualPartIsOneTruncation) {
  const Simulation sim = gen_gaussian(30, 3, 2, 1, 1.0, 1);
  const OracleResult r = oracle_alternating(sim.network, 2, 0);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.decomposition.common.dense() - truncate_rank(mean_layer(sim.network), 2)).norm(), 1e-10);
  for (const auto& g : r.decomposition.individual) EXPECT_EQ(g.rank(), 0);
}

TEST(Oracle, SingleLayerWithoutCommonPart) {
  const Simulation sim = gen_gaussian(25, 1, 1, 2, 1.0, 2);
  const OracleResult r = oracle_alternating(sim.network, 0, 2);
  EXPECT_EQ(r.decomposition.common.rank(), 0);
  EXPECT_LT((r.decomposition.individual[0].dense() - truncate_rank(sim.network.layer(0), 2)).norm(), 1e-10);
}

TEST(Oracle, NoiselessExactRecovery) {
  const Index n = 40, m = 3;
  const Matrix v = oracle::random_gaussian(n, 2, 3);
  const Matrix f = 2.0 * v * v.transpose();
  std::vector<Matrix> layers, g;
  for (Index k = 0; k < m; ++k) {
    const Matrix u = oracle::random_gaussian(n, 1, 4 + static_cast<std::uint64_t>(k));
    g.push_back(u * u.transpose());
    layers.push_back(f + g.back());
  }
  const MultiplexNetwork net(layers, true);
  const OracleResult r = oracle_alternating(net, 2, 1, 5000, 1e-13);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.decomposition.common.dense() - f).norm() / f.norm(), 1e-6);
  for (Index k = 0; k < m; ++k)
    EXPECT_LT((r.decomposition.individual[k].dense() - g[k]).norm() / g[k].norm(), 1e-6);
}

TEST(Svt, FullyObservedIsOneSoftThreshold) {
  const Matrix a = oracle::random_symmetric(15, 5, 2.0);
  SvtOptions opts;
  opts.threshold = 1.5;
  const SvtResult r = svt_impute(a, Matrix::Ones(15, 15), opts);
  EXPECT_LT((r.completed - soft_threshold_svd(a, 1.5)).norm(), 1e-10);
  EXPECT_TRUE(r.converged);
}

TEST(Svt, RecoversRankOneMatrix) {
  // Small next to the leading eigenvalue (about n), large enough to converge
  // within the default iteration cap.
  const Index n = 100;
  const Matrix x = oracle::random_gaussian(n, 1, 6);
  const Matrix a = x * x.transpose();
  const Matrix w = observed_mask(n, 0.1, 7);
  SvtOptions opts;
  opts.threshold = 0.05;
  opts.tol = 1e-12;
  const SvtResult r = svt_impute(a, w, opts);
  double sq = 0.0, count = 0.0;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (w(i, j) == 0.0) sq += std::pow(r.completed(i, j) - a(i, j), 2), count += 1.0;
  ASSERT_GT(count, 0.0);
  EXPECT_LT(std::sqrt(sq / count), 1e-3);
}

TEST(Svt, ObjectiveTraceIsMonotone) {
  const Simulation sim = gen_gaussian(50, 1, 2, 0, 1.0, 8);
  const Matrix w = observed_mask(50, 0.3, 9);
  const SvtResult r = svt_impute(sim.network.layer(0), w);
  ASSERT_GE(r.objective_trace.size(), 2u);
  for (std::size_t t = 1; t < r.objective_trace.size(); ++t)
    EXPECT_LE(r.objective_trace[t], r.objective_trace[t - 1] + 1e-9 * std::abs(r.objective_trace[t - 1]));
}

TEST(Svt, DefaultThresholdIsAdaptive) {
  const Simulation sim = gen_gaussian(40, 1, 1, 0, 1.0, 10);
  const Matrix w = observed_mask(40, 0.2, 11);
  const SvtResult r = svt_impute(sim.network.layer(0), w);
  const Matrix filled = sim.network.layer(0).cwiseProduct(w);
  // sigma_MAD is the median |eigenvalue| scaled by sqrt(n * mp_median).
  Vector e = oracle::plain_eigenvalues(filled).cwiseAbs();
  std::sort(e.data(), e.data() + e.size());
  const double median = 0.5 * (e(19) + e(20));
  const double expected = (2.0 + 0.309) * median / std::sqrt(40.0 * oracle::mp_median_closed_form()) * std::sqrt(40.0);
  EXPECT_NEAR(r.threshold, expected, 1e-8 * expected);
}

TEST(Svt, EmptyRowWarns) {
  const Matrix a = oracle::random_symmetric(8, 12);
  Matrix w = Matrix::Ones(8, 8);
  w.row(3).setZero();
  w.col(3).setZero();
  SvtOptions opts;
  opts.threshold = 0.5;
  const SvtResult r = svt_impute(a, w, opts);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("ImputationUnderdetermined"), std::string::npos);
  EXPECT_TRUE(r.completed.allFinite());
}

TEST(Svt, HardRankMode) {
  const Matrix x = oracle::random_gaussian(30, 2, 13);
  const Matrix a = x * x.transpose();
  SvtOptions opts;
  opts.rank = 2;
  const SvtResult r = svt_impute(a, Matrix::Ones(30, 30), opts);
  EXPECT_LT((r.completed - a).norm(), 1e-8 * a.norm());
}
