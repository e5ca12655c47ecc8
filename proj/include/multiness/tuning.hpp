#pragma once

// Tuning-parameter selection: median-singular-value noise estimate, adaptive
// lambda / alpha_k (uniform and layer-specific) and edge cross-validation.

#include <cstdint>
#include <string>
#include <vector>

#include "multiness/refit.hpp"

namespace multiness {

inline constexpr double kDefaultDelta = 0.309;

struct TuningSelection {
  enum class Method { AdaptiveUniform, AdaptiveLayerwise, CrossValidated, Fixed };

  double lambda = 0.0;
  std::vector<double> alphas;
  double delta = kDefaultDelta;
  std::vector<double> per_layer_sigma;
  Method method = Method::Fixed;
  std::vector<std::string> warnings;
};

std::string method_name(TuningSelection::Method method);

// Median of the Marchenko-Pastur law at aspect ratio 1, obtained by numerically
// integrating the density sqrt(t (4 - t)) / (2 pi t) on [0, 4] and bisecting the CDF.
// Computed once and cached.
double mp_median();

// Median singular value of A over sqrt(n * mp_median()): calibrated so that a
// symmetric matrix with iid N(0, sigma^2) entries returns about sigma.
double sigma_mad(const Matrix& a);

// layerwise = false: pooled sigma = sqrt(mean_k sigma_k^2),
//   lambda = (2 + delta) sigma sqrt(n m), alpha_k = m^{-1/2}.
// layerwise = true: lambda = (2 + delta) sqrt(n) (sum_k sigma_k^2)^{1/2},
//   alpha_k = (sigma_k^2 / sum_l sigma_l^2)^{1/2}.
// Both give the same lambda * alpha_k when the sigma_k are equal.
TuningSelection adaptive_params(const MultiplexNetwork& net, double delta = kDefaultDelta, bool layerwise = false);

// lambda = c * sqrt(n m) with uniform alphas, the form recommended for sparse
// binary networks.
TuningSelection scaled_lambda(const MultiplexNetwork& net, double c);

struct CvOptions {
  double holdout_frac = 0.1;
  int n_folds = 5;
  std::uint64_t seed = 0;
  // Score the refitted (MultiNeSS+) estimate instead of the convex fit.
  bool refit = false;
  // Template for everything except lambda / alphas.
  SolverConfig solver;
};

struct CvResult {
  TuningSelection selection;
  std::size_t selected_index = 0;
  // Mean held-out per-entry score for each candidate, in candidate order.
  std::vector<double> scores;
  int folds_used = 0;
  std::vector<std::string> warnings;
};

// Fits each candidate on every fold's training mask and scores the held-out
// triples with the per-entry deviance (squared error for Gaussian). The best
// mean score wins; ties go to the smaller lambda. A fold whose hold-out would
// empty a layer is skipped; CvFailed if all are.
CvResult edge_cv(const EdgeFamily& family, const MultiplexNetwork& net, const std::vector<TuningSelection>& candidates,
                 const CvOptions& options = {});

// Candidate builders.
std::vector<TuningSelection> delta_candidates(const MultiplexNetwork& net, const std::vector<double>& deltas,
                                              bool layerwise = false);
std::vector<TuningSelection> lambda_candidates(const MultiplexNetwork& net, const std::vector<double>& lambdas);
std::vector<TuningSelection> scale_candidates(const MultiplexNetwork& net, const std::vector<double>& constants);

}  // namespace multiness
