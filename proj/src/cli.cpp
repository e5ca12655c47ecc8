#include "multiness/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "multiness/baseline.hpp"
#include "multiness/embed.hpp"
#include "multiness/errors.hpp"
#include "multiness/io.hpp"
#include "multiness/refit.hpp"
#include "multiness/simulate.hpp"
#include "multiness/tuning.hpp"

namespace multiness::cli {

namespace {

struct SimulateArgs {
  std::string family = "gaussian";
  Index n = 0, m = 0, d1 = 2, d2 = 2;
  double sigma = 1.0, beta = 0.0;
  std::optional<double> rho;
  std::uint64_t seed = 0;
  std::string out;
  std::string truth_dir;
};

struct FitArgs {
  std::string input;
  std::string family = "gaussian";
  std::string lambda = "auto";
  double delta = kDefaultDelta;
  bool layerwise = false;
  std::vector<double> alphas;
  bool refit = false;
  bool psd = false;
  int threads = 0;
  int max_iter = 200;
  double rel_tol = 1e-6;
  double eta = 1.0;
  std::optional<Index> budget;
  std::string out;
  bool no_timing = false;
  bool log1p = false;
  std::optional<std::uint64_t> seed;
};

struct CrossvalArgs {
  FitArgs fit;
  std::vector<double> deltas;
  std::vector<double> lambdas;
  std::vector<double> scales;
  double holdout = 0.1;
  int folds = 5;
  std::uint64_t seed = 0;
};

struct EmbedArgs {
  std::string matrix;
  Index d = 0;
  std::string out;
  std::string reference;
};

struct ImputeArgs {
  std::string input;
  std::string family = "gaussian";
  Index layer = 0;
  double frac = 0.2;
  std::uint64_t seed = 0;
  double delta = kDefaultDelta;
  bool convex_only = false;
  int threads = 0;
  std::string out;
  bool log1p = false;
};

struct ReportArgs {
  std::string scenario;
  std::string out;
  int threads = 0;
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("MULTINESS_THREADS")) {
    const int v = std::atoi(env);
    if (v < 1) throw InvalidInput("MULTINESS_THREADS must be a positive integer");
    return v;
  }
  return 1;
}

const CLI::IsMember& family_check() {
  static const CLI::IsMember check({"gaussian", "logistic", "bernoulli"});
  return check;
}

void add_fit_options(CLI::App* app, FitArgs& a, bool needs_lambda) {
  app->add_option("--input", a.input, "multiplex edge-list file")->required()->check(CLI::ExistingFile);
  app->add_option("--family", a.family, "gaussian or logistic")->check(family_check());
  if (needs_lambda) {
    app->add_option("--lambda", a.lambda, "penalty: 'auto' (adaptive) or a number >= 0");
    app->add_option("--alphas", a.alphas, "per-layer penalty weights (default m^-1/2)");
  }
  app->add_option("--delta", a.delta, "adaptive tuning constant")->check(CLI::Range(-2.0, 1e300));
  app->add_flag("--layerwise", a.layerwise, "layer-specific adaptive tuning");
  app->add_flag("--refit", a.refit, "refit eigenvalues after the convex fit");
  app->add_flag("--psd", a.psd, "constrain estimates to be positive semi-definite");
  app->add_option("--threads", a.threads, "worker threads (fallback: MULTINESS_THREADS)")->check(CLI::PositiveNumber);
  app->add_option("--max-iter", a.max_iter, "iteration cap")->check(CLI::PositiveNumber);
  app->add_option("--rel-tol", a.rel_tol, "relative objective tolerance")->check(CLI::PositiveNumber);
  app->add_option("--eta", a.eta, "base step size")->check(CLI::PositiveNumber);
  app->add_option("--budget", a.budget, "fixed eigensolver budget per prox")->check(CLI::PositiveNumber);
  app->add_option("--out", a.out, "output directory")->required();
  app->add_flag("--no-timing", a.no_timing, "omit timing fields from report.json");
  app->add_flag("--log1p", a.log1p, "apply log(1 + w) to weights on ingestion");
  app->add_option("--seed", a.seed, "seed recorded in the report");
}

SolverConfig solver_config(const FitArgs& a) {
  SolverConfig cfg;
  cfg.eta = a.eta;
  cfg.max_iter = a.max_iter;
  cfg.rel_tol = a.rel_tol;
  cfg.psd_constrain = a.psd;
  cfg.svd_budget = a.budget;
  cfg.threads = resolve_threads(a.threads);
  return cfg;
}

std::string join(const std::vector<Index>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

FitResult run_fit(const EdgeFamily& family, const MultiplexNetwork& net, SolverConfig cfg, const TuningSelection& sel,
                  bool refit) {
  cfg.lambda = sel.lambda;
  cfg.alphas = sel.alphas;
  return refit ? fit_plus(family, net, cfg) : fit(family, net, cfg);
}

void write_fit(const FitResult& result, const EdgeFamily& family, const TuningSelection& sel, const FitArgs& a,
               std::ostream& err, bool delta_based = false) {
  ReportContext ctx;
  ctx.family = family.name();
  ctx.delta = delta_based || sel.method == TuningSelection::Method::AdaptiveUniform ||
                      sel.method == TuningSelection::Method::AdaptiveLayerwise
                  ? std::optional<double>(sel.delta)
                  : std::nullopt;
  ctx.seed = a.seed;
  ctx.tuning_method = method_name(sel.method);
  ctx.include_timing = !a.no_timing;
  FitReport report = result.report;
  // Ranks after refitting reflect the returned decomposition.
  report.common_rank = numerical_rank(result.decomposition.common);
  report.individual_ranks.clear();
  for (const auto& g : result.decomposition.individual) report.individual_ranks.push_back(numerical_rank(g));
  for (const auto& w : sel.warnings) report.warnings.push_back(w);
  write_decomposition(result.decomposition, report_json(report, ctx), a.out);
  err << "fit: lambda=" << format_double(report.lambda) << " iterations=" << report.iterations
      << " converged=" << (report.converged ? "yes" : "no") << " ranks d1=" << report.common_rank
      << " d2=" << join(report.individual_ranks) << "\n";
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
}

int cmd_simulate(const SimulateArgs& a, std::ostream& err) {
  Simulation sim = [&] {
    if (a.family == "gaussian") {
      return a.rho ? gen_correlated(a.n, a.m, a.d1, a.d2, a.sigma, *a.rho, a.seed)
                   : gen_gaussian(a.n, a.m, a.d1, a.d2, a.sigma, a.seed);
    }
    if (a.rho) throw InvalidInput("--rho is only available for the gaussian family");
    return gen_logistic(a.n, a.m, a.d1, a.d2, a.beta, a.seed);
  }();
  write_multiplex(sim.network, std::filesystem::path(a.out));
  if (!a.truth_dir.empty()) {
    Json meta;
    meta["family"] = sim.truth.family.name();
    meta["n"] = a.n;
    meta["m"] = a.m;
    meta["d1"] = a.d1;
    meta["d2"] = a.d2;
    meta["sigma"] = a.sigma;
    meta["beta"] = a.beta;
    meta["rho"] = a.rho ? Json(*a.rho) : Json(nullptr);
    meta["seed"] = a.seed;
    meta["common_signature"] = {sim.truth.common_signature.p, sim.truth.common_signature.q};
    write_decomposition(sim.truth.decomposition(), meta, a.truth_dir);
  }
  err << "simulate: wrote " << a.out << " (n=" << a.n << ", m=" << a.m << ")\n";
  return kExitOk;
}

TuningSelection fixed_or_adaptive(const MultiplexNetwork& net, const FitArgs& a) {
  if (a.lambda == "auto") {
    TuningSelection sel = adaptive_params(net, a.delta, a.layerwise);
    if (!a.alphas.empty()) {
      sel.alphas = a.alphas;
      sel.method = TuningSelection::Method::Fixed;
    }
    return sel;
  }
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(a.lambda, &used);
    if (used != a.lambda.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InvalidInput("--lambda must be 'auto' or a number, got '" + a.lambda + "'");
  }
  if (!(value >= 0.0) || !std::isfinite(value)) throw InvalidInput("--lambda must be >= 0");
  TuningSelection sel;
  sel.lambda = value;
  sel.alphas = a.alphas;
  if (sel.alphas.empty()) sel.alphas.assign(static_cast<std::size_t>(net.m()), 1.0 / std::sqrt(double(net.m())));
  sel.method = TuningSelection::Method::Fixed;
  return sel;
}

int cmd_fit(const FitArgs& a, std::ostream& err) {
  const EdgeFamily family = EdgeFamily::parse(a.family);
  const MultiplexNetwork net = read_multiplex(a.input, a.log1p);
  if (!a.alphas.empty() && static_cast<Index>(a.alphas.size()) != net.m())
    throw InvalidInput("--alphas needs one value per layer (" + std::to_string(net.m()) + ")");
  const TuningSelection sel = fixed_or_adaptive(net, a);
  const FitResult result = run_fit(family, net, solver_config(a), sel, a.refit);
  write_fit(result, family, sel, a, err);
  return kExitOk;
}

int cmd_crossval(const CrossvalArgs& a, std::ostream& err) {
  const int given = !a.deltas.empty() + !a.lambdas.empty() + !a.scales.empty();
  if (given > 1) throw InvalidInput("give only one of --deltas, --lambdas, --scales");
  const EdgeFamily family = EdgeFamily::parse(a.fit.family);
  const MultiplexNetwork net = read_multiplex(a.fit.input, a.fit.log1p);
  std::vector<TuningSelection> candidates;
  if (!a.lambdas.empty()) {
    candidates = lambda_candidates(net, a.lambdas);
  } else if (!a.scales.empty()) {
    candidates = scale_candidates(net, a.scales);
  } else {
    candidates = delta_candidates(net, a.deltas.empty() ? std::vector<double>{kDefaultDelta} : a.deltas,
                                  a.fit.layerwise);
  }

  CvOptions opts;
  opts.holdout_frac = a.holdout;
  opts.n_folds = a.folds;
  opts.seed = a.seed;
  opts.refit = a.fit.refit;
  opts.solver = solver_config(a.fit);
  const CvResult cv = edge_cv(family, net, candidates, opts);

  Json summary;
  summary["family"] = family.name();
  summary["holdout_frac"] = a.holdout;
  summary["folds"] = a.folds;
  summary["folds_used"] = cv.folds_used;
  summary["seed"] = a.seed;
  Json rows = Json::array();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    rows.push_back({{"lambda", candidates[c].lambda},
                    {"alphas", candidates[c].alphas},
                    {"delta", candidates[c].delta},
                    {"method", method_name(candidates[c].method)},
                    {"score", cv.scores[c]}});
  }
  summary["candidates"] = rows;
  summary["selected"] = cv.selected_index;
  summary["warnings"] = cv.warnings;

  TuningSelection chosen = cv.selection;
  const FitResult result = run_fit(family, net, solver_config(a.fit), chosen, a.fit.refit);
  write_fit(result, family, chosen, a.fit, err, a.lambdas.empty() && a.scales.empty());
  write_text(std::filesystem::path(a.fit.out) / "cv.json", summary.dump(2) + "\n");
  err << "crossval: selected candidate " << cv.selected_index + 1 << " of " << candidates.size()
      << " (lambda=" << format_double(chosen.lambda) << ")\n";
  for (const auto& w : cv.warnings) err << "warning: " << w << "\n";
  return kExitOk;
}

Matrix read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError(lineno, "not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError(lineno, "ragged CSV row");
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

int cmd_embed(const EmbedArgs& a, std::ostream& err) {
  const Matrix m = symmetrized(read_matrix(a.matrix));
  Embedding emb = ase(m, a.d);
  if (!a.reference.empty()) {
    const Matrix ref = read_csv(a.reference);
    emb.coords = align_columns(emb.coords, ref).aligned;
  }
  write_embedding(emb, a.out);
  const Vector gaps = eigen_gaps(m, a.d);
  err << "embed: signature (" << emb.signature.p << ", " << emb.signature.q << "), eigen gaps";
  for (Index j = 0; j < gaps.size(); ++j) err << ' ' << format_double(gaps(j));
  err << "\n";
  return kExitOk;
}

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

int cmd_impute(const ImputeArgs& a, std::ostream& err) {
  const EdgeFamily family = EdgeFamily::parse(a.family);
  const MultiplexNetwork net = read_multiplex(a.input, a.log1p);
  if (a.layer < 1 || a.layer > net.m()) throw InvalidInput("--layer must lie in 1.." + std::to_string(net.m()));
  const Index k = a.layer - 1;
  HoldoutOptions hopts;
  hopts.layer = k;
  hopts.nonzero_only = true;
  const Holdout split = hold_out(net, a.frac, a.seed, hopts);
  if (split.held_out.empty()) throw InvalidInput("nothing to hold out in layer " + std::to_string(a.layer));

  SolverConfig cfg;
  cfg.threads = resolve_threads(a.threads);
  const TuningSelection sel = adaptive_params(split.train, a.delta, false);
  const FitResult fitted = run_fit(family, split.train, cfg, sel, !a.convex_only);
  const Matrix p = expected_adjacency(family, fitted.decomposition.common.dense(),
                                      fitted.decomposition.individual[k].dense());
  const SvtResult svt = svt_impute(split.train.layer(k), split.train.mask().weights(k));

  std::vector<double> truth, multiness_pred, svt_pred;
  for (const auto& t : split.held_out) {
    truth.push_back(net.layer(k)(t.i, t.j));
    multiness_pred.push_back(p(t.i, t.j));
    svt_pred.push_back(svt.completed(t.i, t.j));
  }
  Json out;
  out["layer"] = a.layer;
  out["frac"] = a.frac;
  out["seed"] = a.seed;
  out["held_out"] = split.held_out.size();
  out["lambda"] = sel.lambda;
  out["svt_threshold"] = svt.threshold;
  out["rmse_multiness"] = rmse(truth, multiness_pred);
  out["rmse_svt"] = rmse(truth, svt_pred);
  write_text(a.out, out.dump(2) + "\n");
  err << "impute: rmse multiness=" << format_double(out["rmse_multiness"].get<double>())
      << " svt=" << format_double(out["rmse_svt"].get<double>()) << "\n";
  return kExitOk;
}

// Scenario values may be scalars or arrays; arrays are swept as a grid.
std::vector<double> grid_values(const Json& scenario, const char* key, double fallback) {
  if (!scenario.contains(key)) return {fallback};
  const Json& v = scenario.at(key);
  if (v.is_array()) {
    if (v.empty()) throw InvalidInput(std::string("scenario field '") + key + "' is an empty list");
    return v.get<std::vector<double>>();
  }
  return {v.get<double>()};
}

int cmd_report(const ReportArgs& a, std::ostream& err) {
  std::ifstream in(a.scenario);
  if (!in) throw IoError("cannot open '" + a.scenario + "'");
  Json scenario;
  try {
    scenario = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("scenario is not valid JSON: ") + e.what());
  }
  const std::string generator = scenario.value("generator", "gaussian");
  if (generator != "gaussian" && generator != "logistic" && generator != "correlated")
    throw InvalidInput("scenario generator must be gaussian, logistic or correlated");
  const int reps = scenario.value("reps", 5);
  if (reps < 1) throw InvalidInput("scenario reps must be >= 1");
  const std::uint64_t seed = scenario.value("seed", std::uint64_t{0});
  const double delta = scenario.value("delta", kDefaultDelta);
  const bool scaled = scenario.contains("lambda_scale");
  const double scale = scaled ? scenario.at("lambda_scale").get<double>() : 0.0;
  const std::vector<std::string> methods =
      scenario.value("methods", std::vector<std::string>{"multiness", "multiness_plus"});
  for (const auto& m : methods)
    if (m != "multiness" && m != "multiness_plus" && m != "oracle")
      throw InvalidInput("unknown scenario method '" + m + "'");

  const auto ns = grid_values(scenario, "n", 200), ms = grid_values(scenario, "m", 8);
  const auto d1s = grid_values(scenario, "d1", 2), d2s = grid_values(scenario, "d2", 2);
  const auto sigmas = grid_values(scenario, "sigma", 1.0), betas = grid_values(scenario, "beta", 0.0);
  const auto rhos = grid_values(scenario, "rho", 0.0);

  SolverConfig base;
  base.threads = resolve_threads(a.threads);
  std::ostringstream csv;
  csv << "generator,n,m,d1,d2,sigma,beta,rho,rep,method,lambda,err_f,err_g,err_p,d1_hat,d2_hat_mean,iterations\n";
  for (double n : ns)
    for (double m : ms)
      for (double d1 : d1s)
        for (double d2 : d2s)
          for (double sigma : sigmas)
            for (double beta : betas)
              for (double rho : rhos)
                for (int rep = 0; rep < reps; ++rep) {
                  const auto ni = static_cast<Index>(n), mi = static_cast<Index>(m);
                  const auto d1i = static_cast<Index>(d1), d2i = static_cast<Index>(d2);
                  const std::uint64_t s = seed + static_cast<std::uint64_t>(rep);
                  const Simulation sim = generator == "gaussian"     ? gen_gaussian(ni, mi, d1i, d2i, sigma, s)
                                         : generator == "correlated" ? gen_correlated(ni, mi, d1i, d2i, sigma, rho, s)
                                                                     : gen_logistic(ni, mi, d1i, d2i, beta, s);
                  const EdgeFamily family = sim.truth.family;
                  const TuningSelection sel =
                      scaled ? scaled_lambda(sim.network, scale) : adaptive_params(sim.network, delta, false);
                  for (const auto& method : methods) {
                    LatentDecomposition dec;
                    int iterations = 0;
                    if (method == "oracle") {
                      const OracleResult o =
                          oracle_alternating(sim.network, sim.truth.common_signature.dim(), d2i, 100);
                      dec = o.decomposition;
                      iterations = o.iterations;
                    } else {
                      const FitResult r = run_fit(family, sim.network, base, sel, method == "multiness_plus");
                      dec = r.decomposition;
                      iterations = r.report.iterations;
                    }
                    std::vector<Matrix> gh;
                    double d2_mean = 0.0;
                    for (const auto& g : dec.individual) {
                      gh.push_back(g.dense());
                      d2_mean += static_cast<double>(numerical_rank(g));
                    }
                    d2_mean /= static_cast<double>(dec.m());
                    const ErrorMetrics e =
                        error_metrics(family, dec.common.dense(), gh, sim.truth.common, sim.truth.individual);
                    csv << generator << ',' << ni << ',' << mi << ',' << d1i << ',' << d2i << ','
                        << format_double(sigma) << ',' << format_double(beta) << ',' << format_double(rho) << ','
                        << rep << ',' << method << ',' << format_double(sel.lambda) << ',' << format_double(e.err_f)
                        << ',' << format_double(e.err_g) << ',' << format_double(e.err_p) << ','
                        << numerical_rank(dec.common) << ',' << format_double(d2_mean) << ',' << iterations << '\n';
                  }
                  err << "report: n=" << ni << " m=" << mi << " rep " << rep + 1 << "/" << reps << " done\n";
                }
  write_text(a.out, csv.str());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Common and individual low-rank structure in multiplex networks"};
  app.name("multiness");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic multiplex network");
  simulate->add_option("--family", sim.family, "gaussian or logistic")->check(family_check());
  simulate->add_option("--n", sim.n, "number of nodes")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--m", sim.m, "number of layers")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--d1", sim.d1, "common latent dimension")->check(CLI::NonNegativeNumber);
  simulate->add_option("--d2", sim.d2, "individual latent dimension")->check(CLI::NonNegativeNumber);
  simulate->add_option("--sigma", sim.sigma, "Gaussian noise level")->check(CLI::NonNegativeNumber);
  simulate->add_option("--beta", sim.beta, "logistic density offset")->check(CLI::NonNegativeNumber);
  simulate->add_option("--rho", sim.rho, "correlation of individual and common positions")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--out", sim.out, "output multiplex file")->required();
  simulate->add_option("--truth-dir", sim.truth_dir, "directory for the true F and G_k");

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "fit the penalized model");
  add_fit_options(fit_cmd, fit_args, true);

  CrossvalArgs cv;
  auto* cv_cmd = app.add_subcommand("crossval", "choose lambda by edge cross-validation, then fit");
  add_fit_options(cv_cmd, cv.fit, false);
  cv_cmd->add_option("--deltas", cv.deltas, "candidate deltas for adaptive lambda");
  cv_cmd->add_option("--lambdas", cv.lambdas, "candidate lambdas");
  cv_cmd->add_option("--scales", cv.scales, "candidate C in lambda = C sqrt(n m)");
  cv_cmd->add_option("--holdout", cv.holdout, "fraction of pairs held out per fold")->check(CLI::Range(0.0, 1.0));
  cv_cmd->add_option("--folds", cv.folds, "number of folds")->check(CLI::PositiveNumber);
  cv_cmd->add_option("--cv-seed", cv.seed, "seed for fold assignment");

  EmbedArgs emb;
  auto* embed = app.add_subcommand("embed", "latent positions from a dense matrix");
  embed->add_option("--matrix", emb.matrix, "dense matrix file")->required()->check(CLI::ExistingFile);
  embed->add_option("--d", emb.d, "embedding dimension")->required()->check(CLI::PositiveNumber);
  embed->add_option("--out", emb.out, "output CSV")->required();
  embed->add_option("--reference", emb.reference, "CSV to align column signs against")->check(CLI::ExistingFile);

  ImputeArgs imp;
  auto* impute = app.add_subcommand("impute", "hold out edges of one layer and compare imputations");
  impute->add_option("--input", imp.input, "multiplex edge-list file")->required()->check(CLI::ExistingFile);
  impute->add_option("--family", imp.family, "gaussian or logistic")->check(family_check());
  impute->add_option("--layer", imp.layer, "1-based layer to hold edges out of")->required();
  impute->add_option("--frac", imp.frac, "fraction of non-zero edges held out")->check(CLI::Range(0.0, 1.0));
  impute->add_option("--seed", imp.seed, "random seed");
  impute->add_option("--delta", imp.delta, "adaptive tuning constant")->check(CLI::Range(-2.0, 1e300));
  impute->add_flag("--convex-only", imp.convex_only, "skip eigenvalue refitting");
  impute->add_option("--threads", imp.threads, "worker threads")->check(CLI::PositiveNumber);
  impute->add_option("--out", imp.out, "output JSON")->required();
  impute->add_flag("--log1p", imp.log1p, "apply log(1 + w) to weights on ingestion");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "run a simulation sweep and write a CSV table");
  report->add_option("--scenario", rep.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
  report->add_option("--out", rep.out, "output CSV")->required();
  report->add_option("--threads", rep.threads, "worker threads")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, err);
    if (fit_cmd->parsed()) return cmd_fit(fit_args, err);
    if (cv_cmd->parsed()) return cmd_crossval(cv, err);
    if (embed->parsed()) return cmd_embed(emb, err);
    if (impute->parsed()) return cmd_impute(imp, err);
    if (report->parsed()) return cmd_report(rep, err);
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DegenerateDesign& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const BudgetExceeded& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInvalid;
}

}  // namespace multiness::cli
