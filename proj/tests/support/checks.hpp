#pragma once

// Test fixtures and check harnesses shared by unit and acceptance tests.

#include <cstdint>

#include "multiness/model.hpp"

namespace checks {

using namespace multiness;

struct Instance {
  MultiplexNetwork net;
  Matrix common;
  std::vector<Matrix> individual;
};

// Random layers (Gaussian values or Bernoulli draws), random symmetric F and G_k,
// and optionally a random fraction of pairs masked out.
Instance random_instance(const EdgeFamily& family, Index n, Index m, std::uint64_t seed, bool self_loops,
                         double masked_frac);

// Largest relative discrepancy between block_gradient and a central finite
// difference of masked_loss over every entry of every block. Entries where both
// are below `floor` in magnitude are compared absolutely.
double gradient_fd_error(const EdgeFamily& family, const Instance& inst, double h = 1e-5, double floor = 1e-6);

LowRankSym as_low_rank(const Matrix& m);
LatentDecomposition as_decomposition(const Matrix& common, const std::vector<Matrix>& individual);

}  // namespace checks
