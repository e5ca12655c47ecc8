#include "multiness/model.hpp"

#include <cmath>

#include "multiness/errors.hpp"

namespace multiness {

double log1p_exp(double theta) { return std::max(theta, 0.0) + std::log1p(std::exp(-std::abs(theta))); }

double logistic(double theta) {
  if (theta >= 0.0) return 1.0 / (1.0 + std::exp(-theta));
  const double e = std::exp(theta);
  return e / (1.0 + e);
}

EdgeFamily EdgeFamily::parse(const std::string& name) {
  if (name == "gaussian") return gaussian();
  if (name == "bernoulli" || name == "logistic") return bernoulli();
  throw InvalidInput("unknown edge family '" + name + "' (expected gaussian or logistic)");
}

std::string EdgeFamily::name() const {
  return kind_ == Kind::GaussianIdentity ? "gaussian" : "logistic";
}

double EdgeFamily::mean(double theta) const {
  return kind_ == Kind::GaussianIdentity ? theta : logistic(theta);
}

double EdgeFamily::loss(double a, double theta) const {
  if (kind_ == Kind::GaussianIdentity) {
    const double r = a - theta;
    return 0.5 * r * r;
  }
  return log1p_exp(theta) - a * theta;
}

double EdgeFamily::score(double a, double theta) const {
  // Squared error and Bernoulli deviance are both twice the per-entry loss.
  return 2.0 * loss(a, theta);
}

bool EdgeFamily::admits(double a) const {
  if (kind_ == Kind::GaussianIdentity) return std::isfinite(a);
  return a == 0.0 || a == 1.0;
}

Matrix EdgeFamily::mean(const Matrix& theta) const {
  if (kind_ == Kind::GaussianIdentity) return theta;
  return theta.unaryExpr([](double t) { return logistic(t); });
}

ObservationMask ObservationMask::full(Index n, Index m, bool self_loops) {
  ObservationMask mask;
  mask.weights_.assign(static_cast<std::size_t>(m), Matrix::Ones(n, n));
  if (!self_loops) {
    for (auto& w : mask.weights_) w.diagonal().setZero();
  }
  return mask;
}

void ObservationMask::set(Index k, Index i, Index j, bool observed) {
  const double v = observed ? 1.0 : 0.0;
  weights_[k](i, j) = v;
  weights_[k](j, i) = v;
}

Index ObservationMask::observed_pairs(Index k) const {
  const Matrix& w = weights_[k];
  Index count = 0;
  for (Index j = 0; j < w.cols(); ++j)
    for (Index i = 0; i <= j; ++i) count += w(i, j) != 0.0;
  return count;
}

Index ObservationMask::observed_offdiagonal_pairs(Index k) const {
  const Matrix& w = weights_[k];
  Index count = 0;
  for (Index j = 0; j < w.cols(); ++j)
    for (Index i = 0; i < j; ++i) count += w(i, j) != 0.0;
  return count;
}

MultiplexNetwork::MultiplexNetwork(std::vector<Matrix> layers, bool self_loops,
                                   std::optional<ObservationMask> mask)
    : layers_(std::move(layers)), self_loops_(self_loops) {
  if (layers_.empty()) throw InvalidInput("multiplex network needs at least one layer");
  n_ = layers_.front().rows();
  const Index m = static_cast<Index>(layers_.size());
  if (mask) {
    if (mask->layers() != m || mask->nodes() != n_) throw InvalidInput("observation mask dimensions do not match layers");
    mask_ = *std::move(mask);
  } else {
    mask_ = ObservationMask::full(n_, m, self_loops_);
  }
  for (Index k = 0; k < m; ++k) {
    Matrix& a = layers_[k];
    Matrix& w = mask_.weights_[k];
    if (a.rows() != n_ || a.cols() != n_) throw InvalidInput("layer " + std::to_string(k + 1) + " is not n x n");
    if (!w.isApprox(w.transpose(), 0.0)) throw InvalidInput("observation mask is not symmetric");
    if (!self_loops_) w.diagonal().setZero();
    a = (w.array() != 0.0).select(a, 0.0);
    require_finite(a, ("layer " + std::to_string(k + 1)).c_str());
    a = (a + a.transpose()) * 0.5;
  }
}

bool MultiplexNetwork::fully_observed() const {
  for (Index k = 0; k < m(); ++k) {
    const Index expected = self_loops_ ? n_ * (n_ + 1) / 2 : n_ * (n_ - 1) / 2;
    if (mask_.observed_pairs(k) != expected) return false;
  }
  return true;
}

MultiplexNetwork MultiplexNetwork::with_mask(ObservationMask mask) const {
  if (!self_loops_) {
    for (Index k = 0; k < mask.layers(); ++k)
      for (Index i = 0; i < mask.nodes(); ++i)
        if (mask.observed(k, i, i)) throw InvalidInput("mask observes the diagonal of a network without self-loops");
  }
  return MultiplexNetwork(layers_, self_loops_, std::move(mask));
}

Signature LowRankSym::signature() const {
  Signature sig;
  for (Index j = 0; j < eig.size(); ++j) (eig.values(j) > 0.0 ? sig.p : sig.q) += 1;
  return sig;
}

LatentDecomposition LatentDecomposition::zero(Index n, Index m) {
  LatentDecomposition dec;
  dec.common = LowRankSym::zero(n);
  dec.individual.assign(static_cast<std::size_t>(m), LowRankSym::zero(n));
  return dec;
}

Matrix similarity_matrix(const Matrix& x, Signature sig) {
  if (sig.p < 0 || sig.q < 0 || sig.dim() != x.cols())
    throw InvalidInput("similarity_matrix: signature p + q must equal the latent dimension");
  Vector signs(x.cols());
  signs.head(sig.p).setOnes();
  signs.tail(sig.q).setConstant(-1.0);
  Matrix s = (x * signs.asDiagonal()) * x.transpose();
  return (s + s.transpose()) * 0.5;
}

namespace {

void check_dims(const MultiplexNetwork& net, const Matrix& common, const std::vector<Matrix>& individual) {
  if (common.rows() != net.n() || common.cols() != net.n() || static_cast<Index>(individual.size()) != net.m())
    throw InvalidInput("decomposition dimensions do not match the network");
  for (const auto& g : individual)
    if (g.rows() != net.n() || g.cols() != net.n()) throw InvalidInput("decomposition dimensions do not match the network");
}

std::vector<Matrix> dense_individual(const LatentDecomposition& dec) {
  std::vector<Matrix> out;
  out.reserve(dec.individual.size());
  for (const auto& g : dec.individual) out.push_back(g.dense());
  return out;
}

// Sum of w_ij * loss over all (i, j); `upper_only` restricts to i <= j.
double weighted_loss(const EdgeFamily& family, const Matrix& a, const Matrix& theta, const Matrix& w,
                     bool upper_only) {
  double sum = 0.0;
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j) {
    const Index end = upper_only ? j + 1 : n;
    for (Index i = 0; i < end; ++i) {
      if (w(i, j) != 0.0) sum += family.loss(a(i, j), theta(i, j));
    }
  }
  return sum;
}

}  // namespace

void validate_support(const EdgeFamily& family, const MultiplexNetwork& net) {
  if (family.kind() == EdgeFamily::Kind::GaussianIdentity) return;
  for (Index k = 0; k < net.m(); ++k) {
    const Matrix& a = net.layer(k);
    const Matrix& w = net.mask().weights(k);
    for (Index j = 0; j < net.n(); ++j)
      for (Index i = 0; i <= j; ++i)
        if (w(i, j) != 0.0 && !family.admits(a(i, j)))
          throw InvalidInput("layer " + std::to_string(k + 1) + " has an entry outside {0,1} at (" +
                             std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
  }
}

double masked_loss(const EdgeFamily& family, const MultiplexNetwork& net, const Matrix& common,
                   const std::vector<Matrix>& individual) {
  check_dims(net, common, individual);
  validate_support(family, net);
  double sum = 0.0;
  for (Index k = 0; k < net.m(); ++k)
    sum += weighted_loss(family, net.layer(k), common + individual[k], net.mask().weights(k), true);
  return sum;
}

double masked_loss(const EdgeFamily& family, const MultiplexNetwork& net, const LatentDecomposition& dec) {
  return masked_loss(family, net, dec.common.dense(), dense_individual(dec));
}

double entrywise_loss(const EdgeFamily& family, const MultiplexNetwork& net, const Matrix& common,
                      const std::vector<Matrix>& individual) {
  check_dims(net, common, individual);
  double sum = 0.0;
  for (Index k = 0; k < net.m(); ++k) {
    const Matrix theta = common + individual[k];
    const Matrix& w = net.mask().weights(k);
    if (family.kind() == EdgeFamily::Kind::GaussianIdentity) {
      sum += 0.5 * (w.array() * (net.layer(k) - theta).array().square()).sum();
    } else {
      sum += weighted_loss(family, net.layer(k), theta, w, false);
    }
  }
  return sum;
}

Matrix layer_residual(const EdgeFamily& family, const MultiplexNetwork& net, Index k, const Matrix& common,
                      const Matrix& individual) {
  const Matrix mu = family.mean(common + individual);
  return net.mask().weights(k).cwiseProduct(mu - net.layer(k));
}

Matrix block_gradient(const EdgeFamily& family, const MultiplexNetwork& net, const LatentDecomposition& dec,
                      Block block) {
  const Matrix common = dec.common.dense();
  const auto individual = dense_individual(dec);
  check_dims(net, common, individual);
  validate_support(family, net);
  if (!block.is_common()) {
    if (block.layer >= net.m()) throw InvalidInput("block_gradient: layer index out of range");
    return layer_residual(family, net, block.layer, common, individual[block.layer]);
  }
  Matrix sum = Matrix::Zero(net.n(), net.n());
  for (Index k = 0; k < net.m(); ++k) sum += layer_residual(family, net, k, common, individual[k]);
  return sum;
}

Matrix expected_adjacency(const EdgeFamily& family, const Matrix& common, const Matrix& individual) {
  if (common.rows() != individual.rows() || common.cols() != individual.cols())
    throw InvalidInput("expected_adjacency: dimension mismatch");
  return family.mean(common + individual);
}

}  // namespace multiness
