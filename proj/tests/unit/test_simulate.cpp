#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "multiness/errors.hpp"
#include "multiness/simulate.hpp"

using namespace multiness;

namespace {

double density(const MultiplexNetwork& net) {
  double edges = 0.0, pairs = 0.0;
  for (Index k = 0; k < net.m(); ++k) {
    edges += net.layer(k).sum() / 2.0;
    pairs += static_cast<double>(net.n() * (net.n() - 1) / 2);
  }
  return edges / pairs;
}

void expect_reconstruction(const SimTruth& t) {
  EXPECT_LT((similarity_matrix(t.common_latent, t.common_signature) - t.common).norm(), 1e-10);
  for (std::size_t k = 0; k < t.individual.size(); ++k)
    EXPECT_LT((similarity_matrix(t.individual_latent[k], t.individual_signature[k]) - t.individual[k]).norm(), 1e-10);
}

}  // namespace

TEST(GenGaussian, Deterministic) {
  const Simulation a = gen_gaussian(30, 3, 2, 1, 1.0, 5), b = gen_gaussian(30, 3, 2, 1, 1.0, 5);
  for (Index k = 0; k < 3; ++k) EXPECT_EQ(a.network.layer(k), b.network.layer(k));
  const Simulation c = gen_gaussian(30, 3, 2, 1, 1.0, 6);
  EXPECT_NE(a.network.layer(0), c.network.layer(0));
}

TEST(GenGaussian, NoiselessIsHollowTruth) {
  const Simulation s = gen_gaussian(20, 2, 2, 2, 0.0, 1);
  for (Index k = 0; k < 2; ++k) {
    Matrix expected = s.truth.common + s.truth.individual[k];
    expected.diagonal().setZero();
    EXPECT_EQ(s.network.layer(k), expected);
  }
  EXPECT_FALSE(s.network.self_loops());
  expect_reconstruction(s.truth);
}

TEST(GenGaussian, NoiseVariance) {
  const Simulation s = gen_gaussian(300, 2, 1, 1, 1.0, 2);
  for (Index k = 0; k < 2; ++k) {
    const Matrix e = s.network.layer(k) - s.truth.common - s.truth.individual[k];
    double sum = 0.0, sq = 0.0, count = 0.0;
    for (Index j = 0; j < 300; ++j)
      for (Index i = 0; i < j; ++i) sum += e(i, j), sq += e(i, j) * e(i, j), count += 1.0;
    const double var = sq / count - (sum / count) * (sum / count);
    EXPECT_GE(var, 0.97);
    EXPECT_LE(var, 1.03);
  }
}

TEST(GenGaussian, AddingLayersKeepsEarlierDraws) {
  const Simulation a = gen_gaussian(25, 2, 1, 1, 1.0, 9), b = gen_gaussian(25, 4, 1, 1, 1.0, 9);
  EXPECT_EQ(a.network.layer(0), b.network.layer(0));
  EXPECT_EQ(a.network.layer(1), b.network.layer(1));
}

TEST(GenGaussian, ZeroDimensions) {
  const Simulation s = gen_gaussian(10, 2, 0, 0, 1.0, 3);
  EXPECT_EQ(s.truth.common.norm(), 0.0);
  EXPECT_EQ(s.truth.decomposition().common.rank(), 0);
}

TEST(GenLogistic, FairCoinDensity) {
  const Simulation s = gen_logistic(200, 1, 0, 0, 0.0, 4);
  const double d = density(s.network);
  EXPECT_GE(d, 0.47);
  EXPECT_LE(d, 0.53);
}

TEST(GenLogistic, SparseRegimeDensity) {
  const Simulation s = gen_logistic(400, 8, 2, 2, 6.0, 5);
  const double d = density(s.network);
  EXPECT_GE(d, 0.008);
  EXPECT_LE(d, 0.025);
}

TEST(GenLogistic, BinarySymmetricHollow) {
  const Simulation s = gen_logistic(40, 3, 1, 1, 1.0, 6);
  for (Index k = 0; k < 3; ++k) {
    const Matrix& a = s.network.layer(k);
    EXPECT_EQ(a, a.transpose());
    EXPECT_EQ(a.diagonal().norm(), 0.0);
    EXPECT_TRUE((a.array() == 0.0 || a.array() == 1.0).all());
  }
  expect_reconstruction(s.truth);
}

TEST(GenLogistic, OffsetIsDisassortativeCommonDimension) {
  const Simulation s = gen_logistic(15, 2, 2, 1, 2.0, 7);
  EXPECT_EQ(s.truth.common_signature, (Signature{2, 1}));
  const Matrix v = s.truth.common_latent.leftCols(2);
  EXPECT_LT((s.truth.common - (v * v.transpose() - Matrix::Constant(15, 15, 2.0))).norm(), 1e-10);
}

TEST(GenLogistic, DensityFallsWithBeta) {
  double previous = 1.0;
  for (double beta = 0.0; beta <= 6.0; beta += 1.0) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) total += density(gen_logistic(100, 2, 2, 2, beta, seed).network);
    EXPECT_LE(total / 5.0, previous);
    previous = total / 5.0;
  }
}

TEST(GenCorrelated, RhoZeroMatchesGaussian) {
  const Simulation a = gen_correlated(30, 3, 2, 2, 1.0, 0.0, 8), b = gen_gaussian(30, 3, 2, 2, 1.0, 8);
  for (Index k = 0; k < 3; ++k) EXPECT_EQ(a.network.layer(k), b.network.layer(k));
}

TEST(GenCorrelated, RhoOneSharesColumnSpace) {
  const Simulation s = gen_correlated(20, 3, 2, 2, 1.0, 1.0, 9);
  const Matrix& v = s.truth.common_latent;
  const Matrix proj = v * (v.transpose() * v).inverse() * v.transpose();
  for (Index k = 0; k < 3; ++k) {
    const Matrix& u = s.truth.individual_latent[k];
    EXPECT_LT((proj * u - u).norm(), 1e-10);
    const Matrix o = (v.transpose() * v).ldlt().solve(v.transpose() * u);
    EXPECT_LT((o.transpose() * o - Matrix::Identity(2, 2)).norm(), 1e-10);
  }
}

TEST(GenCorrelated, EntryVarianceIsOne) {
  for (double rho : {0.3, 0.7}) {
    const Simulation s = gen_correlated(500, 2, 2, 2, 1.0, rho, 10);
    for (const auto& u : s.truth.individual_latent) {
      const double mean = u.mean();
      const double var = (u.array() - mean).square().mean();
      EXPECT_GE(var, 0.95);
      EXPECT_LE(var, 1.05);
    }
  }
}

TEST(GenCorrelated, RejectsBadInput) {
  EXPECT_THROW(gen_correlated(10, 2, 2, 1, 1.0, 0.5, 1), InvalidInput);
  EXPECT_THROW(gen_correlated(10, 2, 2, 2, 1.0, 1.5, 1), InvalidInput);
}

TEST(RandomOrthogonal, IsOrthogonal) {
  auto gen = make_stream(3, RandomStream::Rotation, 0);
  const Matrix o = random_orthogonal(4, gen);
  EXPECT_LT((o.transpose() * o - Matrix::Identity(4, 4)).norm(), 1e-12);
}

TEST(HoldOut, ZeroFractionIsNoOp) {
  const Simulation s = gen_gaussian(20, 2, 1, 1, 1.0, 11);
  const Holdout h = hold_out(s.network, 0.0, 1);
  EXPECT_TRUE(h.held_out.empty());
  for (Index k = 0; k < 2; ++k) EXPECT_EQ(h.train.mask().weights(k), s.network.mask().weights(k));
}

TEST(HoldOut, SymmetricAndSized) {
  const Simulation s = gen_gaussian(100, 3, 1, 1, 1.0, 12);
  const Holdout h = hold_out(s.network, 0.2, 4);
  const double target = 0.2 * 100.0 * 99.0 / 2.0;
  for (Index k = 0; k < 3; ++k) {
    const auto count = std::count_if(h.held_out.begin(), h.held_out.end(), [&](const Triple& t) { return t.layer == k; });
    EXPECT_LE(std::abs(static_cast<double>(count) - target), 0.03 * target);
  }
  for (const auto& t : h.held_out) {
    EXPECT_LT(t.i, t.j);
    EXPECT_FALSE(h.train.mask().observed(t.layer, t.i, t.j));
    EXPECT_FALSE(h.train.mask().observed(t.layer, t.j, t.i));
  }
  const Index total = s.network.mask().observed_pairs(0) + s.network.mask().observed_pairs(1) +
                      s.network.mask().observed_pairs(2);
  const Index left = h.train.mask().observed_pairs(0) + h.train.mask().observed_pairs(1) +
                     h.train.mask().observed_pairs(2);
  EXPECT_EQ(total - left, static_cast<Index>(h.held_out.size()));
}

TEST(HoldOut, SingleLayerNonzeroOnly) {
  const Simulation s = gen_logistic(60, 3, 1, 1, 1.0, 13);
  HoldoutOptions opts;
  opts.layer = 1;
  opts.nonzero_only = true;
  const Holdout h = hold_out(s.network, 0.3, 2, opts);
  ASSERT_FALSE(h.held_out.empty());
  for (const auto& t : h.held_out) {
    EXPECT_EQ(t.layer, 1);
    EXPECT_EQ(s.network.layer(1)(t.i, t.j), 1.0);
  }
  EXPECT_EQ(h.train.mask().observed_pairs(0), s.network.mask().observed_pairs(0));
}

TEST(HoldOut, DeterministicPerFold) {
  const Simulation s = gen_gaussian(30, 2, 1, 1, 1.0, 14);
  EXPECT_EQ(hold_out(s.network, 0.1, 5, {}, 0).held_out, hold_out(s.network, 0.1, 5, {}, 0).held_out);
  EXPECT_NE(hold_out(s.network, 0.1, 5, {}, 0).held_out, hold_out(s.network, 0.1, 5, {}, 1).held_out);
}

TEST(HoldOut, TooLargeThrows) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = a(1, 0) = 1.0;
  const MultiplexNetwork net({a}, false);
  EXPECT_THROW(hold_out(net, 0.9, 1), HoldoutTooLarge);
  EXPECT_THROW(hold_out(net, 1.0, 1), InvalidInput);
}
