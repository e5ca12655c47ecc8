#include "multiness/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "multiness/errors.hpp"
#include "multiness/simulate.hpp"

namespace multiness {

namespace {

// CDF of the ratio-1 Marchenko-Pastur law. With t = 4 sin^2(phi) the density
// becomes (4 / pi) cos^2(phi) on [0, pi / 2], which composite Simpson handles
// to machine precision.
double mp_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 4.0) return 1.0;
  const double upper = std::asin(std::sqrt(x / 4.0));
  constexpr int kIntervals = 2048;
  const double h = upper / kIntervals;
  auto f = [](double phi) { return 4.0 / std::numbers::pi * std::cos(phi) * std::cos(phi); };
  double sum = f(0.0) + f(upper);
  for (int i = 1; i < kIntervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

double compute_mp_median() {
  double lo = 0.0, hi = 4.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mp_cdf(mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> uniform_alphas(Index m) {
  return std::vector<double>(static_cast<std::size_t>(m), 1.0 / std::sqrt(static_cast<double>(m)));
}

double held_out_score(const EdgeFamily& family, const MultiplexNetwork& full, const LatentDecomposition& dec,
                      const std::vector<Triple>& held) {
  const Matrix f = dec.common.dense();
  std::vector<Matrix> g;
  for (const auto& block : dec.individual) g.push_back(block.dense());
  double total = 0.0;
  for (const auto& t : held) {
    const double theta = f(t.i, t.j) + g[t.layer](t.i, t.j);
    total += family.score(full.layer(t.layer)(t.i, t.j), theta);
  }
  return total / static_cast<double>(held.size());
}

}  // namespace

std::string method_name(TuningSelection::Method method) {
  switch (method) {
    case TuningSelection::Method::AdaptiveUniform: return "adaptive_uniform";
    case TuningSelection::Method::AdaptiveLayerwise: return "adaptive_layerwise";
    case TuningSelection::Method::CrossValidated: return "cross_validated";
    case TuningSelection::Method::Fixed: return "fixed";
  }
  return "fixed";
}

double mp_median() {
  static const double median = compute_mp_median();
  return median;
}

double sigma_mad(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("sigma_mad needs a square matrix");
  const Index n = a.rows();
  if (n < 2) throw InvalidInput("sigma_mad needs n >= 2");
  require_finite(a, "sigma_mad input");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigenvalue computation failed in sigma_mad");
  std::vector<double> s(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
  std::sort(s.begin(), s.end());
  const std::size_t half = s.size() / 2;
  const double median = s.size() % 2 ? s[half] : 0.5 * (s[half - 1] + s[half]);
  return median / std::sqrt(static_cast<double>(n) * mp_median());
}

TuningSelection adaptive_params(const MultiplexNetwork& net, double delta, bool layerwise) {
  if (!(delta > -2.0) || !std::isfinite(delta)) throw InvalidInput("delta must be a finite value > -2");
  const Index n = net.n();
  const Index m = net.m();
  if (m < 1) throw InvalidInput("network has no layers");
  TuningSelection sel;
  sel.delta = delta;
  sel.method = layerwise ? TuningSelection::Method::AdaptiveLayerwise : TuningSelection::Method::AdaptiveUniform;
  double total = 0.0;
  for (Index k = 0; k < m; ++k) {
    const double s = sigma_mad(net.layer(k));
    sel.per_layer_sigma.push_back(s);
    total += s * s;
  }
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  if (total == 0.0) {
    sel.lambda = 0.0;
    sel.alphas = uniform_alphas(m);
    sel.warnings.push_back("all layers have zero estimated noise; lambda set to 0");
    return sel;
  }
  if (!layerwise) {
    const double pooled = std::sqrt(total / md);
    sel.lambda = (2.0 + delta) * pooled * std::sqrt(nd * md);
    sel.alphas = uniform_alphas(m);
  } else {
    sel.lambda = (2.0 + delta) * std::sqrt(nd) * std::sqrt(total);
    for (double s : sel.per_layer_sigma) sel.alphas.push_back(std::sqrt(s * s / total));
  }
  return sel;
}

TuningSelection scaled_lambda(const MultiplexNetwork& net, double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidInput("lambda scale must be a finite value >= 0");
  TuningSelection sel;
  sel.lambda = c * std::sqrt(static_cast<double>(net.n()) * static_cast<double>(net.m()));
  sel.alphas = uniform_alphas(net.m());
  sel.method = TuningSelection::Method::Fixed;
  return sel;
}

CvResult edge_cv(const EdgeFamily& family, const MultiplexNetwork& net, const std::vector<TuningSelection>& candidates,
                 const CvOptions& options) {
  if (candidates.empty()) throw InvalidInput("edge_cv needs at least one candidate");
  if (!(options.holdout_frac > 0.0 && options.holdout_frac < 1.0))
    throw InvalidInput("holdout fraction must lie in (0, 1)");
  if (options.n_folds < 1) throw InvalidInput("n_folds must be >= 1");

  CvResult result;
  std::vector<double> sums(candidates.size(), 0.0);
  for (int fold = 0; fold < options.n_folds; ++fold) {
    Holdout split;
    try {
      split = hold_out(net, options.holdout_frac, options.seed, {}, static_cast<std::uint64_t>(fold));
    } catch (const HoldoutTooLarge& e) {
      result.warnings.push_back("fold " + std::to_string(fold + 1) + " skipped: " + e.what());
      continue;
    }
    if (split.held_out.empty()) {
      result.warnings.push_back("fold " + std::to_string(fold + 1) + " skipped: nothing held out");
      continue;
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      SolverConfig cfg = options.solver;
      cfg.lambda = candidates[c].lambda;
      cfg.alphas = candidates[c].alphas;
      const FitResult fitted = options.refit ? fit_plus(family, split.train, cfg) : fit(family, split.train, cfg);
      sums[c] += held_out_score(family, net, fitted.decomposition, split.held_out);
    }
    ++result.folds_used;
  }
  if (result.folds_used == 0) throw CvFailed("every cross-validation fold was skipped");

  for (double s : sums) result.scores.push_back(s / result.folds_used);
  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    const double tie = 1e-12 * std::max(1.0, std::abs(result.scores[best]));
    if (result.scores[c] < result.scores[best] - tie ||
        (std::abs(result.scores[c] - result.scores[best]) <= tie && candidates[c].lambda < candidates[best].lambda))
      best = c;
  }
  result.selected_index = best;
  result.selection = candidates[best];
  result.selection.method = TuningSelection::Method::CrossValidated;
  return result;
}

std::vector<TuningSelection> delta_candidates(const MultiplexNetwork& net, const std::vector<double>& deltas,
                                              bool layerwise) {
  std::vector<TuningSelection> out;
  for (double d : deltas) out.push_back(adaptive_params(net, d, layerwise));
  return out;
}

std::vector<TuningSelection> lambda_candidates(const MultiplexNetwork& net, const std::vector<double>& lambdas) {
  std::vector<TuningSelection> out;
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidInput("lambda candidates must be finite values >= 0");
    TuningSelection sel;
    sel.lambda = l;
    sel.alphas = uniform_alphas(net.m());
    sel.method = TuningSelection::Method::Fixed;
    out.push_back(std::move(sel));
  }
  return out;
}

std::vector<TuningSelection> scale_candidates(const MultiplexNetwork& net, const std::vector<double>& constants) {
  std::vector<TuningSelection> out;
  for (double c : constants) out.push_back(scaled_lambda(net, c));
  return out;
}

}  // namespace multiness
