#include "multiness/embed.hpp"

#include <cmath>
#include <queue>

#include "multiness/errors.hpp"

namespace multiness {

namespace {

Embedding embed_pairs(const EigenPair& eig, Index n, Index d) {
  const Index avail = std::min(d, eig.size());
  const double scale = avail > 0 ? std::max(1.0, std::abs(eig.values(0))) : 1.0;
  std::vector<Index> positive, negative;
  for (Index j = 0; j < avail; ++j) {
    const double g = eig.values(j);
    if (std::abs(g) <= kDefaultRankTol * scale) continue;
    (g > 0.0 ? positive : negative).push_back(j);
  }
  const Index zeros = d - static_cast<Index>(positive.size() + negative.size());

  Embedding out;
  out.coords = Matrix::Zero(n, d);
  out.magnitudes = Vector::Zero(d);
  Index col = 0;
  auto place = [&](Index j) {
    const double mag = std::abs(eig.values(j));
    out.coords.col(col) = std::sqrt(mag) * eig.vectors.col(j);
    out.magnitudes(col) = mag;
    ++col;
  };
  for (Index j : positive) place(j);
  col += zeros;
  for (Index j : negative) place(j);
  out.signature = Signature{static_cast<Index>(positive.size()) + zeros, static_cast<Index>(negative.size())};
  return out;
}

double hollow_error(const Matrix& hat, const Matrix& truth, bool& normalized) {
  const double denom = hollow_frobenius(truth);
  const double num = hollow_frobenius(hat - truth);
  if (denom == 0.0) {
    normalized = false;
    return num;
  }
  return num / denom;
}

}  // namespace

Embedding ase(const Matrix& m, Index d) {
  if (m.rows() != m.cols()) throw InvalidInput("ase needs a square matrix");
  if (d < 1 || d > m.rows()) throw InvalidInput("ase dimension must lie in [1, n]");
  return embed_pairs(eigen_truncated(m, d), m.rows(), d);
}

Embedding ase(const LowRankSym& block, Index d) {
  if (d < 1 || d > block.n()) throw InvalidInput("ase dimension must lie in [1, n]");
  return embed_pairs(block.eig, block.n(), d);
}

Alignment align_columns(const Matrix& xhat, const Matrix& xref) {
  if (xhat.rows() != xref.rows() || xhat.cols() != xref.cols())
    throw InvalidInput("align_columns needs matrices of equal shape");
  Alignment out{xhat, std::vector<int>(static_cast<std::size_t>(xhat.cols()), 1)};
  for (Index j = 0; j < xhat.cols(); ++j) {
    const double keep = (xhat.col(j) - xref.col(j)).norm();
    const double flip = (xhat.col(j) + xref.col(j)).norm();
    if (flip < keep) {
      out.aligned.col(j) *= -1.0;
      out.signs[static_cast<std::size_t>(j)] = -1;
    }
  }
  return out;
}

ErrorMetrics error_metrics(const EdgeFamily& family, const Matrix& f_hat, const std::vector<Matrix>& g_hat,
                           const Matrix& f_true, const std::vector<Matrix>& g_true) {
  if (g_hat.size() != g_true.size() || f_hat.rows() != f_true.rows() || f_hat.cols() != f_true.cols())
    throw InvalidInput("error_metrics needs decompositions of equal shape");
  ErrorMetrics out;
  out.err_f = hollow_error(f_hat, f_true, out.f_normalized);
  const std::size_t m = g_hat.size();
  if (m == 0) return out;
  for (std::size_t k = 0; k < m; ++k) {
    if (g_hat[k].rows() != f_true.rows() || g_true[k].rows() != f_true.rows())
      throw InvalidInput("error_metrics needs decompositions of equal shape");
    out.err_g += hollow_error(g_hat[k], g_true[k], out.g_normalized);
    out.err_p += hollow_error(expected_adjacency(family, f_hat, g_hat[k]), expected_adjacency(family, f_true, g_true[k]),
                              out.p_normalized);
  }
  out.err_g /= static_cast<double>(m);
  out.err_p /= static_cast<double>(m);
  return out;
}

ErrorMetrics error_metrics(const EdgeFamily& family, const LatentDecomposition& estimate,
                           const LatentDecomposition& truth) {
  std::vector<Matrix> gh, gt;
  for (const auto& g : estimate.individual) gh.push_back(g.dense());
  for (const auto& g : truth.individual) gt.push_back(g.dense());
  return error_metrics(family, estimate.common.dense(), gh, truth.common.dense(), gt);
}

IdentifiabilityResult identifiability_check(const Matrix& v, const std::vector<Matrix>& u, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("identifiability tolerance must be > 0");
  const Index n = v.rows();
  for (const auto& uk : u)
    if (uk.rows() != n) throw InvalidInput("latent matrices must share the node count");
  const Index m = static_cast<Index>(u.size());

  IdentifiabilityResult out;
  std::vector<std::vector<Index>> adjacency(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) {
    for (Index l = k + 1; l < m; ++l) {
      const Index cols = v.cols() + u[k].cols() + u[l].cols();
      if (cols > n) continue;
      bool full = true;
      if (cols > 0) {
        Matrix stacked(n, cols);
        stacked << v, u[k], u[l];
        const Vector s = Eigen::JacobiSVD<Matrix>(stacked).singularValues();
        full = s(0) > 0.0 && s(cols - 1) > tol * s(0);
      }
      if (!full) continue;
      out.edges.emplace_back(k, l);
      adjacency[static_cast<std::size_t>(k)].push_back(l);
      adjacency[static_cast<std::size_t>(l)].push_back(k);
    }
  }

  if (m <= 1) {
    out.connected = true;
    return out;
  }
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  std::queue<Index> frontier;
  frontier.push(0);
  seen[0] = true;
  Index reached = 1;
  while (!frontier.empty()) {
    const Index k = frontier.front();
    frontier.pop();
    for (Index l : adjacency[static_cast<std::size_t>(k)]) {
      if (seen[static_cast<std::size_t>(l)]) continue;
      seen[static_cast<std::size_t>(l)] = true;
      ++reached;
      frontier.push(l);
    }
  }
  out.connected = reached == m;
  return out;
}

Vector eigen_gaps(const Matrix& m, Index d) {
  if (d < 1 || d > m.rows()) throw InvalidInput("eigen_gaps dimension must lie in [1, n]");
  const EigenPair eig = eigen_truncated(m, std::min(d + 1, m.rows()));
  Vector gaps(d);
  for (Index j = 0; j < d; ++j) {
    const double next = j + 1 < eig.size() ? std::abs(eig.values(j + 1)) : 0.0;
    gaps(j) = std::abs(eig.values(j)) - next;
  }
  return gaps;
}

}  // namespace multiness
