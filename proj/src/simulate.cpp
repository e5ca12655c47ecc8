#include "multiness/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multiness/errors.hpp"

namespace multiness {

namespace {

Matrix standard_normal(Index rows, Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(gen);
  return out;
}

void check_dims(Index n, Index m, Index d1, Index d2) {
  if (n < 1 || m < 1) throw InvalidInput("n and m must be >= 1");
  if (d1 < 0 || d2 < 0) throw InvalidInput("d1 and d2 must be >= 0");
}

LowRankSym exact_low_rank(const Matrix& m, Index rank) {
  if (rank == 0) return LowRankSym::zero(m.rows());
  return LowRankSym{eigen_truncated(m, std::min(rank, m.rows()))};
}

// Shared Gaussian assembly once the latent positions are fixed.
Simulation assemble_gaussian(Matrix v, std::vector<Matrix> u, double sigma, std::uint64_t seed) {
  const Index n = v.rows();
  const Index m = static_cast<Index>(u.size());
  SimTruth truth;
  truth.family = EdgeFamily::gaussian(sigma);
  truth.common_signature = Signature{v.cols(), 0};
  truth.common = similarity_matrix(v, truth.common_signature);
  truth.sigma = sigma;
  truth.seed = seed;

  std::vector<Matrix> layers;
  layers.reserve(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) {
    const Signature sig{u[k].cols(), 0};
    Matrix g = similarity_matrix(u[k], sig);
    Matrix a = truth.common + g;
    auto gen = make_stream(seed, RandomStream::Noise, static_cast<std::uint64_t>(k));
    std::normal_distribution<double> noise(0.0, 1.0);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < j; ++i) {
        const double e = sigma * noise(gen);
        a(i, j) += e;
        a(j, i) = a(i, j);
      }
      a(j, j) = 0.0;
    }
    layers.push_back(std::move(a));
    truth.individual.push_back(std::move(g));
    truth.individual_signature.push_back(sig);
  }
  truth.common_latent = std::move(v);
  truth.individual_latent = std::move(u);
  return Simulation{MultiplexNetwork(std::move(layers), false), std::move(truth)};
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, RandomStream stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index & 0xffffffffu),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

LatentDecomposition SimTruth::decomposition() const {
  LatentDecomposition dec;
  dec.common = exact_low_rank(common, common_signature.dim());
  for (std::size_t k = 0; k < individual.size(); ++k)
    dec.individual.push_back(exact_low_rank(individual[k], individual_signature[k].dim()));
  return dec;
}

Simulation gen_gaussian(Index n, Index m, Index d1, Index d2, double sigma, std::uint64_t seed) {
  check_dims(n, m, d1, d2);
  if (!(sigma >= 0.0)) throw InvalidInput("sigma must be >= 0");
  auto common_gen = make_stream(seed, RandomStream::Common, 0);
  Matrix v = standard_normal(n, d1, common_gen);
  std::vector<Matrix> u;
  for (Index k = 0; k < m; ++k) {
    auto gen = make_stream(seed, RandomStream::Individual, static_cast<std::uint64_t>(k));
    u.push_back(standard_normal(n, d2, gen));
  }
  return assemble_gaussian(std::move(v), std::move(u), sigma, seed);
}

Simulation gen_correlated(Index n, Index m, Index d1, Index d2, double sigma, double rho, std::uint64_t seed) {
  check_dims(n, m, d1, d2);
  if (d1 != d2) throw InvalidInput("gen_correlated requires d1 == d2");
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidInput("rho must lie in [0, 1]");
  if (!(sigma >= 0.0)) throw InvalidInput("sigma must be >= 0");
  auto common_gen = make_stream(seed, RandomStream::Common, 0);
  Matrix v = standard_normal(n, d1, common_gen);
  const double keep = std::sqrt(1.0 - rho * rho);
  std::vector<Matrix> u;
  for (Index k = 0; k < m; ++k) {
    auto z_gen = make_stream(seed, RandomStream::Individual, static_cast<std::uint64_t>(k));
    const Matrix z = standard_normal(n, d2, z_gen);
    auto o_gen = make_stream(seed, RandomStream::Rotation, static_cast<std::uint64_t>(k));
    const Matrix o = random_orthogonal(d2, o_gen);
    u.push_back(rho * (v * o) + keep * z);
  }
  Simulation sim = assemble_gaussian(std::move(v), std::move(u), sigma, seed);
  sim.truth.rho = rho;
  return sim;
}

Simulation gen_logistic(Index n, Index m, Index d1, Index d2, double beta, std::uint64_t seed) {
  check_dims(n, m, d1, d2);
  if (!(beta >= 0.0)) throw InvalidInput("beta must be >= 0");
  auto common_gen = make_stream(seed, RandomStream::Common, 0);
  const Matrix v = standard_normal(n, d1, common_gen);

  SimTruth truth;
  truth.family = EdgeFamily::bernoulli();
  truth.beta = beta;
  truth.seed = seed;
  if (beta > 0.0) {
    truth.common_latent.resize(n, d1 + 1);
    truth.common_latent.leftCols(d1) = v;
    truth.common_latent.col(d1).setConstant(std::sqrt(beta));
    truth.common_signature = Signature{d1, 1};
  } else {
    truth.common_latent = v;
    truth.common_signature = Signature{d1, 0};
  }
  truth.common = similarity_matrix(truth.common_latent, truth.common_signature);

  std::vector<Matrix> layers;
  for (Index k = 0; k < m; ++k) {
    auto u_gen = make_stream(seed, RandomStream::Individual, static_cast<std::uint64_t>(k));
    Matrix u = standard_normal(n, d2, u_gen);
    const Signature sig{d2, 0};
    Matrix g = similarity_matrix(u, sig);
    auto gen = make_stream(seed, RandomStream::Noise, static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix a = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < j; ++i) {
        const double p = logistic(truth.common(i, j) + g(i, j));
        const double edge = unif(gen) < p ? 1.0 : 0.0;
        a(i, j) = edge;
        a(j, i) = edge;
      }
    }
    layers.push_back(std::move(a));
    truth.individual_latent.push_back(std::move(u));
    truth.individual.push_back(std::move(g));
    truth.individual_signature.push_back(sig);
  }
  return Simulation{MultiplexNetwork(std::move(layers), false), std::move(truth)};
}

Matrix random_orthogonal(Index d, std::mt19937_64& gen) {
  if (d == 0) return Matrix(0, 0);
  const Matrix g = standard_normal(d, d, gen);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

Holdout hold_out(const MultiplexNetwork& net, double frac, std::uint64_t seed, const HoldoutOptions& options,
                 std::uint64_t fold) {
  if (!(frac >= 0.0 && frac < 1.0)) throw InvalidInput("hold-out fraction must lie in [0, 1)");
  if (options.layer && (*options.layer < 0 || *options.layer >= net.m()))
    throw InvalidInput("hold-out layer index out of range");

  auto gen = make_stream(seed, RandomStream::Holdout, fold);
  ObservationMask mask = net.mask();
  std::vector<Triple> held;
  for (Index k = 0; k < net.m(); ++k) {
    if (options.layer && *options.layer != k) continue;
    std::vector<Triple> eligible;
    for (Index j = 0; j < net.n(); ++j)
      for (Index i = 0; i < j; ++i)
        if (mask.observed(k, i, j) && (!options.nonzero_only || net.layer(k)(i, j) != 0.0))
          eligible.push_back({k, i, j});
    const auto count = static_cast<std::size_t>(std::llround(frac * static_cast<double>(eligible.size())));
    if (count == 0) continue;
    std::shuffle(eligible.begin(), eligible.end(), gen);
    eligible.resize(count);
    std::sort(eligible.begin(), eligible.end(), [](const Triple& a, const Triple& b) {
      return std::tie(a.j, a.i) < std::tie(b.j, b.i);
    });
    for (const auto& t : eligible) mask.set(k, t.i, t.j, false);
    if (mask.observed_pairs(k) == 0)
      throw HoldoutTooLarge("hold-out leaves layer " + std::to_string(k + 1) + " with no observed entries");
    held.insert(held.end(), eligible.begin(), eligible.end());
  }
  return Holdout{net.with_mask(std::move(mask)), std::move(held)};
}

}  // namespace multiness
