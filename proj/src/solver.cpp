#include "multiness/solver.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "multiness/errors.hpp"

namespace multiness {

namespace {

// Relative slack allowed on objective increases before the step is halved.
constexpr double kMonotoneSlack = 1e-9;
constexpr int kMaxHalvings = 40;

template <typename Fn>
void parallel_for(Index count, int threads, Fn&& fn) {
  const Index workers = std::min<Index>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (Index k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (Index k = w; k < count; k += workers) fn(k);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Prox of threshold * nuclear norm, honouring the budget policy.
EigenPair prox(const Matrix& arg, double threshold, Index previous_rank, const SolverConfig& cfg) {
  const Index n = arg.rows();
  std::optional<Index> budget = cfg.svd_budget;
  if (!budget && cfg.adaptive_budget && previous_rank >= 0) budget = 2 * previous_rank + 10;
  while (budget && *budget < n) {
    try {
      return soft_threshold_eigen(arg, threshold, budget, cfg.psd_constrain);
    } catch (const BudgetExceeded&) {
      budget = 2 * *budget;
    }
  }
  return soft_threshold_eigen(arg, threshold, std::nullopt, cfg.psd_constrain);
}

struct Iterate {
  LatentDecomposition dec;
  Matrix common;
  std::vector<Matrix> individual;
  // -1 when the block's rank is not known to be small (initializer).
  Index common_rank_hint = -1;

  static Iterate from(const LatentDecomposition& dec, Index hint) {
    Iterate it{dec, dec.common.dense(), {}, hint};
    it.individual.reserve(dec.individual.size());
    for (const auto& g : dec.individual) it.individual.push_back(g.dense());
    return it;
  }
};

double penalty(const LatentDecomposition& dec, double lambda, const std::vector<double>& alphas) {
  double p = lambda * dec.common.nuclear_norm();
  for (std::size_t k = 0; k < dec.individual.size(); ++k) p += lambda * alphas[k] * dec.individual[k].nuclear_norm();
  return p;
}

double iterate_objective(const EdgeFamily& family, const MultiplexNetwork& net, const Iterate& it, double lambda,
                         const std::vector<double>& alphas) {
  return entrywise_loss(family, net, it.common, it.individual) + penalty(it.dec, lambda, alphas);
}

Iterate sweep(const EdgeFamily& family, const MultiplexNetwork& net, const Iterate& cur, const SolverConfig& cfg,
              const std::vector<double>& alphas, double eta) {
  const Index m = net.m();
  const double md = static_cast<double>(m);

  Matrix grad = Matrix::Zero(net.n(), net.n());
  for (Index k = 0; k < m; ++k) grad += layer_residual(family, net, k, cur.common, cur.individual[k]);
  Iterate next;
  next.dec.common = LowRankSym{prox(cur.common - (eta / md) * grad, eta * cfg.lambda / md, cur.common_rank_hint, cfg)};
  next.common = next.dec.common.dense();
  next.common_rank_hint = next.dec.common.rank();

  next.dec.individual.resize(static_cast<std::size_t>(m));
  next.individual.resize(static_cast<std::size_t>(m));
  parallel_for(m, cfg.threads, [&](Index k) {
    const Matrix residual = layer_residual(family, net, k, next.common, cur.individual[k]);
    const Index hint = cur.common_rank_hint < 0 ? -1 : cur.dec.individual[k].rank();
    next.dec.individual[k] =
        LowRankSym{prox(cur.individual[k] - eta * residual, eta * cfg.lambda * alphas[k], hint, cfg)};
    next.individual[k] = next.dec.individual[k].dense();
  });
  return next;
}

double relative_change(const Matrix& before, const Matrix& after) {
  const double scale = std::max(before.norm(), after.norm());
  if (scale == 0.0) return 0.0;
  return (after - before).norm() / scale;
}

double max_block_change(const Iterate& a, const Iterate& b) {
  double change = relative_change(a.common, b.common);
  for (std::size_t k = 0; k < a.individual.size(); ++k)
    change = std::max(change, relative_change(a.individual[k], b.individual[k]));
  return change;
}

void check_network(const EdgeFamily& family, const MultiplexNetwork& net) {
  if (net.m() < 1 || net.n() < 1) throw InvalidInput("network is empty");
  validate_support(family, net);
}

}  // namespace

std::vector<double> SolverConfig::resolved_alphas(Index m) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be a finite value >= 0");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidInput("eta must be > 0");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  if (svd_budget && *svd_budget < 1) throw InvalidInput("svd_budget must be >= 1");
  if (alphas.empty()) return std::vector<double>(static_cast<std::size_t>(m), 1.0 / std::sqrt(static_cast<double>(m)));
  if (static_cast<Index>(alphas.size()) != m) throw InvalidInput("alphas must have one entry per layer");
  for (double a : alphas)
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidInput("alphas must be finite values >= 0");
  return alphas;
}

Index numerical_rank(const LowRankSym& block) { return numerical_rank(block.eig.values); }

Matrix initialize_common(const MultiplexNetwork& net, Index d1) {
  if (d1 < 0 || d1 > net.n()) throw InvalidInput("initializer rank must lie in [0, n]");
  Matrix mean = Matrix::Zero(net.n(), net.n());
  for (Index k = 0; k < net.m(); ++k) mean += net.mask().weights(k).cwiseProduct(net.layer(k));
  mean /= static_cast<double>(net.m());
  Matrix f = d1 == net.n() ? mean : truncate_rank(mean, d1);
  if (!net.self_loops()) f.diagonal().setZero();
  return f;
}

double objective(const EdgeFamily& family, const MultiplexNetwork& net, const LatentDecomposition& dec,
                 double lambda, const std::vector<double>& alphas) {
  if (static_cast<Index>(alphas.size()) != dec.m()) throw InvalidInput("alphas must have one entry per layer");
  std::vector<Matrix> individual;
  for (const auto& g : dec.individual) individual.push_back(g.dense());
  return entrywise_loss(family, net, dec.common.dense(), individual) + penalty(dec, lambda, alphas);
}

StepResult pgd_step(const EdgeFamily& family, const MultiplexNetwork& net, const LatentDecomposition& dec,
                    const SolverConfig& cfg) {
  check_network(family, net);
  const auto alphas = cfg.resolved_alphas(net.m());
  if (dec.n() != net.n() || dec.m() != net.m()) throw InvalidInput("decomposition dimensions do not match the network");
  Iterate cur = Iterate::from(dec, -1);
  Iterate next = sweep(family, net, cur, cfg, alphas, cfg.eta);
  const double obj = iterate_objective(family, net, next, cfg.lambda, alphas);
  return {std::move(next.dec), obj};
}

FitResult fit(const EdgeFamily& family, const MultiplexNetwork& net, const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  check_network(family, net);
  const auto alphas = cfg.resolved_alphas(net.m());

  FitReport report;
  report.lambda = cfg.lambda;
  report.alphas = alphas;

  LatentDecomposition init = LatentDecomposition::zero(net.n(), net.m());
  // Threshold 0 keeps the matrix and drops exactly-zero eigenpairs.
  init.common = LowRankSym{soft_threshold_eigen(initialize_common(net, cfg.d1_init.value_or(net.n())), 0.0)};
  Iterate cur = Iterate::from(init, -1);
  double cur_obj = iterate_objective(family, net, cur, cfg.lambda, alphas);
  report.objective_trace.push_back(cur_obj);

  double eta = cfg.eta;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    Iterate next;
    double next_obj = 0.0;
    int halvings = 0;
    while (true) {
      next = sweep(family, net, cur, cfg, alphas, eta);
      next_obj = iterate_objective(family, net, next, cfg.lambda, alphas);
      if (!std::isfinite(next_obj)) throw NumericalFailure("objective became non-finite");
      if (next_obj <= cur_obj + kMonotoneSlack * std::max(1.0, std::abs(cur_obj))) break;
      if (++halvings > kMaxHalvings) throw NumericalFailure("step size backtracking failed to decrease the objective");
      eta *= 0.5;
    }
    if (halvings > 0) report.warnings.push_back("step size halved to " + std::to_string(eta) + " at iteration " + std::to_string(iter));

    const double decrease = (cur_obj - next_obj) / std::max(std::abs(cur_obj), 1e-300);
    const double moved = max_block_change(cur, next);
    cur = std::move(next);
    cur_obj = next_obj;
    report.objective_trace.push_back(cur_obj);
    report.iterations = iter;
    if (decrease < cfg.rel_tol && moved <= cfg.step_tol) {
      report.converged = true;
      break;
    }
  }
  if (!report.converged) report.warnings.push_back("reached max_iter without converging");

  report.final_eta = eta;
  report.common_rank = numerical_rank(cur.dec.common);
  for (const auto& g : cur.dec.individual) report.individual_ranks.push_back(numerical_rank(g));
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(cur.dec), std::move(report)};
}

}  // namespace multiness
