#include "driftls/loss.hpp"

#include <cmath>

#include "driftls/errors.hpp"

namespace driftls {

namespace {

void require_nonempty(std::span<const Observation> history) {
  if (history.empty()) throw EmptyHistory("loss: history is empty");
}

}  // namespace

double weighted_mse(const WeightVector& theta, std::span<const Observation> history, double gamma) {
  require_nonempty(history);
  // history is oldest first; the newest observation carries weight gamma^0.
  double sum = 0.0;
  double weight = 1.0;
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    const double residual = theta.dot(it->x.full) - it->y;
    sum += weight * residual * residual;
    weight *= gamma;
  }
  return 0.5 * sum;
}

double invariant_reg_loss(const WeightVector& theta, std::span<const Observation> history,
                          double gamma, double lambda) {
  const double base = weighted_mse(theta, history, gamma);
  const SymmetricMatrix hhat = hat_hessian(history, gamma);
  return base + 0.5 * lambda * theta.dot(hhat * theta);
}

double l2_reg_loss(const WeightVector& theta, std::span<const Observation> history, double gamma,
                   double lambda) {
  return weighted_mse(theta, history, gamma) + 0.5 * lambda * theta.squaredNorm();
}

SymmetricMatrix hessian_step(const SymmetricMatrix& h_prev, const Vector& x, double gamma) {
  if (h_prev.rows() != x.size() || h_prev.cols() != x.size())
    throw DimensionMismatch("hessian_step: order mismatch");
  SymmetricMatrix h = gamma * h_prev + x * x.transpose();
  symmetrize(h);
  return h;
}

SymmetricMatrix hessian_step(const SymmetricMatrix& h_prev, const FeatureVector& x, double gamma) {
  return hessian_step(h_prev, x.full, gamma);
}

SymmetricMatrix regularized_hessian_step(const SymmetricMatrix& ht_prev, const FeatureVector& x,
                                         double gamma, double lambda) {
  if (lambda < 0.0) throw BadHyperparameter("regularized_hessian_step: lambda must be >= 0");
  const Vector hatted = x.hatted();
  SymmetricMatrix h = gamma * ht_prev + x.full * x.full.transpose() +
                      lambda * (hatted * hatted.transpose());
  symmetrize(h);
  return h;
}

SymmetricMatrix data_hessian(std::span<const Observation> history, double gamma) {
  require_nonempty(history);
  const Eigen::Index n = history.front().x.size();
  SymmetricMatrix h = SymmetricMatrix::Zero(n, n);
  for (const Observation& obs : history) h = hessian_step(h, obs.x.full, gamma);
  return h;
}

SymmetricMatrix hat_hessian(std::span<const Observation> history, double gamma) {
  require_nonempty(history);
  const Eigen::Index n = history.front().x.size();
  SymmetricMatrix h = SymmetricMatrix::Zero(n, n);
  for (const Observation& obs : history) h = hessian_step(h, obs.x.hatted(), gamma);
  return h;
}

SymmetricMatrix regularized_hessian(std::span<const Observation> history, double gamma,
                                    double lambda) {
  require_nonempty(history);
  const Eigen::Index n = history.front().x.size();
  SymmetricMatrix h = SymmetricMatrix::Zero(n, n);
  for (const Observation& obs : history) h = regularized_hessian_step(h, obs.x, gamma, lambda);
  return h;
}

Vector target_correlation(std::span<const Observation> history, double gamma) {
  require_nonempty(history);
  Vector g = Vector::Zero(history.front().x.size());
  for (const Observation& obs : history) g = gamma * g + obs.y * obs.x.full;
  return g;
}

}  // namespace driftls
