#pragma once

// Statistical model: edge families, multiplex data with observation masks,
// low-rank latent decompositions, masked likelihood and block gradients.

#include <optional>
#include <string>
#include <vector>

#include "multiness/linalg.hpp"

namespace multiness {

// (p, q) counts of assortative / disassortative latent dimensions.
struct Signature {
  Index p = 0;
  Index q = 0;
  Index dim() const { return p + q; }
  bool operator==(const Signature&) const = default;
};

// Edge distribution with its canonical link. Gaussian uses the identity link and
// least-squares loss (sigma is recorded but folded into lambda); Bernoulli uses the
// logistic link and the log-partition log(1 + e^theta).
class EdgeFamily {
 public:
  enum class Kind { GaussianIdentity, BernoulliLogistic };

  static EdgeFamily gaussian(std::optional<double> sigma = std::nullopt) {
    return EdgeFamily(Kind::GaussianIdentity, sigma);
  }
  static EdgeFamily bernoulli() { return EdgeFamily(Kind::BernoulliLogistic, std::nullopt); }
  static EdgeFamily parse(const std::string& name);

  Kind kind() const { return kind_; }
  std::optional<double> nuisance() const { return nuisance_; }
  std::string name() const;

  // Expected edge weight g(theta).
  double mean(double theta) const;
  // Negative log-likelihood of one entry up to constants.
  double loss(double a, double theta) const;
  // Per-entry held-out score: squared error (Gaussian) or deviance (Bernoulli).
  double score(double a, double theta) const;
  // Whether `a` lies in the support of the family.
  bool admits(double a) const;

  Matrix mean(const Matrix& theta) const;

 private:
  EdgeFamily(Kind kind, std::optional<double> nuisance) : kind_(kind), nuisance_(nuisance) {}
  Kind kind_;
  std::optional<double> nuisance_;
};

// Numerically stable log(1 + e^theta).
double log1p_exp(double theta);
double logistic(double theta);

// Per-layer symmetric indicator of observed (i, j, k) triples, stored as 0/1
// weights so it can multiply residual matrices directly.
class ObservationMask {
 public:
  ObservationMask() = default;
  // Everything observed except, without self-loops, the diagonal.
  static ObservationMask full(Index n, Index m, bool self_loops);

  Index layers() const { return static_cast<Index>(weights_.size()); }
  Index nodes() const { return weights_.empty() ? 0 : weights_.front().rows(); }
  bool observed(Index k, Index i, Index j) const { return weights_[k](i, j) != 0.0; }
  void set(Index k, Index i, Index j, bool observed);
  const Matrix& weights(Index k) const { return weights_[k]; }
  // Observed pairs i <= j (diagonal only when observed) in layer k.
  Index observed_pairs(Index k) const;
  Index observed_offdiagonal_pairs(Index k) const;

 private:
  friend class MultiplexNetwork;
  std::vector<Matrix> weights_;
};

// m symmetric n x n layers on a shared node set.
class MultiplexNetwork {
 public:
  MultiplexNetwork() = default;
  // Layers are symmetrized on ingestion. Without a mask every off-diagonal pair is
  // observed (and the diagonal iff self_loops). Values at unobserved triples are
  // stored as zero.
  MultiplexNetwork(std::vector<Matrix> layers, bool self_loops,
                   std::optional<ObservationMask> mask = std::nullopt);

  Index n() const { return n_; }
  Index m() const { return static_cast<Index>(layers_.size()); }
  bool self_loops() const { return self_loops_; }
  const Matrix& layer(Index k) const { return layers_[k]; }
  const std::vector<Matrix>& layers() const { return layers_; }
  const ObservationMask& mask() const { return mask_; }
  bool fully_observed() const;

  // Same data with a different mask (which must not observe the diagonal when
  // self_loops is false).
  MultiplexNetwork with_mask(ObservationMask mask) const;

 private:
  Index n_ = 0;
  std::vector<Matrix> layers_;
  ObservationMask mask_;
  bool self_loops_ = false;
};

// Symmetric low-rank matrix held as eigenpairs.
struct LowRankSym {
  EigenPair eig;

  static LowRankSym zero(Index n) { return {EigenPair{Matrix(n, 0), Vector(0)}}; }
  Index n() const { return eig.dim(); }
  Index rank() const { return eig.size(); }
  Signature signature() const;
  Matrix dense() const { return eig.reconstruct(); }
  double nuclear_norm() const { return eig.nuclear_norm(); }
};

// Common matrix F and layer-individual matrices G_k.
struct LatentDecomposition {
  LowRankSym common;
  std::vector<LowRankSym> individual;

  static LatentDecomposition zero(Index n, Index m);
  Index n() const { return common.n(); }
  Index m() const { return static_cast<Index>(individual.size()); }
};

// Which block of the decomposition a gradient refers to.
struct Block {
  static Block common() { return Block{-1}; }
  static Block individual(Index k) { return Block{k}; }
  bool is_common() const { return layer < 0; }
  Index layer = -1;
};

// X I_{p,q} X^T.
Matrix similarity_matrix(const Matrix& x, Signature sig);

// Sum over observed pairs i < j (plus observed diagonal entries) of the per-entry
// negative log-likelihood, at parameters theta_k = F + G_k.
double masked_loss(const EdgeFamily& family, const MultiplexNetwork& net,
                   const LatentDecomposition& dec);
double masked_loss(const EdgeFamily& family, const MultiplexNetwork& net, const Matrix& common,
                   const std::vector<Matrix>& individual);

// Same loss summed over ordered observed entries (i, j) and (j, i) separately:
// the smooth part of the penalized objective whose entrywise gradient is
// block_gradient. Equals 2 * masked_loss minus the diagonal terms.
double entrywise_loss(const EdgeFamily& family, const MultiplexNetwork& net,
                      const Matrix& common, const std::vector<Matrix>& individual);

// Masked residual g(F + G_k) - A_k; zero on unobserved triples.
Matrix layer_residual(const EdgeFamily& family, const MultiplexNetwork& net, Index k,
                      const Matrix& common, const Matrix& individual);

Matrix block_gradient(const EdgeFamily& family, const MultiplexNetwork& net,
                      const LatentDecomposition& dec, Block block);

Matrix expected_adjacency(const EdgeFamily& family, const Matrix& common, const Matrix& individual);

// Throws InvalidInput if an observed entry lies outside the family's support.
void validate_support(const EdgeFamily& family, const MultiplexNetwork& net);

}  // namespace multiness
