#pragma once

// Seeded synthetic multiplex generators and edge hold-out utilities.
//
// Random stream layout. Every draw comes from a std::mt19937_64 seeded with
// std::seed_seq{seed_lo, seed_hi, stream, index}, where (seed_lo, seed_hi) are
// the two 32-bit halves of the user seed and
//   stream 1, index 0  common latent positions V
//   stream 2, index k  individual latent positions U_k (Z_k in the correlated model)
//   stream 3, index k  edge noise / Bernoulli draws for layer k
//   stream 4, index k  random rotation O_k (correlated model)
//   stream 5, index f  hold-out fold f
// Adding layers therefore never changes the draws of earlier layers.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "multiness/model.hpp"

namespace multiness {

enum class RandomStream : std::uint32_t {
  Common = 1,
  Individual = 2,
  Noise = 3,
  Rotation = 4,
  Holdout = 5,
};

std::mt19937_64 make_stream(std::uint64_t seed, RandomStream stream, std::uint64_t index);

struct SimTruth {
  EdgeFamily family = EdgeFamily::gaussian();
  Matrix common_latent;                    // V
  std::vector<Matrix> individual_latent;   // U_k
  Signature common_signature;
  std::vector<Signature> individual_signature;
  Matrix common;                           // F = V I_{p,q} V^T
  std::vector<Matrix> individual;          // G_k
  double sigma = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;

  // Exact-truth decomposition (eigenpairs of F and each G_k).
  LatentDecomposition decomposition() const;
};

struct Simulation {
  MultiplexNetwork network;
  SimTruth truth;
};

// A_k = V V^T + U_k U_k^T + E_k with symmetric N(0, sigma^2) off-diagonal noise
// and zero diagonal; latent entries are standard normal.
Simulation gen_gaussian(Index n, Index m, Index d1, Index d2, double sigma, std::uint64_t seed);

// Binary layers with P_k = logistic(V V^T + U_k U_k^T - beta 1 1^T). The offset is
// recorded as an extra disassortative common dimension sqrt(beta) 1.
Simulation gen_logistic(Index n, Index m, Index d1, Index d2, double beta, std::uint64_t seed);

// Gaussian layers with U_k = rho V O_k + sqrt(1 - rho^2) Z_k, O_k Haar-distributed
// orthogonal. Requires d1 == d2.
Simulation gen_correlated(Index n, Index m, Index d1, Index d2, double sigma, double rho, std::uint64_t seed);

// Haar-distributed d x d orthogonal matrix.
Matrix random_orthogonal(Index d, std::mt19937_64& gen);

struct Triple {
  Index layer;
  Index i;  // i < j
  Index j;
  bool operator==(const Triple&) const = default;
};

struct HoldoutOptions {
  // Restrict to one layer; otherwise every layer loses `frac` of its pairs.
  std::optional<Index> layer;
  // Only hold out pairs with a non-zero observed weight.
  bool nonzero_only = false;
};

struct Holdout {
  MultiplexNetwork train;
  std::vector<Triple> held_out;
};

// Removes round(frac * eligible) observed off-diagonal pairs per affected layer,
// symmetrically. Throws HoldoutTooLarge if a layer would have nothing left.
Holdout hold_out(const MultiplexNetwork& net, double frac, std::uint64_t seed, const HoldoutOptions& options = {},
                 std::uint64_t fold = 0);

}  // namespace multiness
