#include "checks.hpp"

#include <cmath>
#include <random>

#include "oracles.hpp"

namespace checks {

Instance random_instance(const EdgeFamily& family, Index n, Index m, std::uint64_t seed, bool self_loops,
                         double masked_frac) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Instance inst;
  inst.common = oracle::random_symmetric(n, seed * 31 + 1, 0.7);
  std::vector<Matrix> layers;
  ObservationMask mask = ObservationMask::full(n, m, self_loops);
  for (Index k = 0; k < m; ++k) {
    inst.individual.push_back(oracle::random_symmetric(n, seed * 31 + 2 + static_cast<std::uint64_t>(k), 0.5));
    Matrix a(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i <= j; ++i) {
        double v;
        if (family.kind() == EdgeFamily::Kind::GaussianIdentity) {
          v = 3.0 * (unif(gen) - 0.5);
        } else {
          v = unif(gen) < 0.4 ? 1.0 : 0.0;
        }
        a(i, j) = a(j, i) = v;
        if ((i != j || self_loops) && unif(gen) < masked_frac) mask.set(k, i, j, false);
      }
    layers.push_back(std::move(a));
  }
  inst.net = MultiplexNetwork(std::move(layers), self_loops, std::move(mask));
  return inst;
}

double gradient_fd_error(const EdgeFamily& family, const Instance& inst, double h, double floor) {
  const Index n = inst.net.n();
  const Index m = inst.net.m();
  const LatentDecomposition dec = as_decomposition(inst.common, inst.individual);
  double worst = 0.0;
  auto compare = [&](double analytic, double numeric) {
    const double scale = std::max(std::abs(analytic), std::abs(numeric));
    const double err = scale < floor ? std::abs(analytic - numeric) / floor : std::abs(analytic - numeric) / scale;
    worst = std::max(worst, err);
  };

  const Matrix grad_f = block_gradient(family, inst.net, dec, Block::common());
  auto loss_of_f = [&](const Matrix& f) { return masked_loss(family, inst.net, f, inst.individual); };
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i) compare(grad_f(i, j), oracle::symmetric_fd(loss_of_f, inst.common, i, j, h));

  for (Index k = 0; k < m; ++k) {
    const Matrix grad_g = block_gradient(family, inst.net, dec, Block::individual(k));
    auto loss_of_g = [&](const Matrix& g) {
      std::vector<Matrix> individual = inst.individual;
      individual[k] = g;
      return masked_loss(family, inst.net, inst.common, individual);
    };
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i <= j; ++i)
        compare(grad_g(i, j), oracle::symmetric_fd(loss_of_g, inst.individual[k], i, j, h));
  }
  return worst;
}

LowRankSym as_low_rank(const Matrix& m) {
  EigenPair e = eigen_full(m);
  return LowRankSym{std::move(e)};
}

LatentDecomposition as_decomposition(const Matrix& common, const std::vector<Matrix>& individual) {
  LatentDecomposition dec;
  dec.common = as_low_rank(common);
  for (const auto& g : individual) dec.individual.push_back(as_low_rank(g));
  return dec;
}

}  // namespace checks
