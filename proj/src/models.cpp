#include "driftls/models.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <utility>

#include "driftls/errors.hpp"

namespace driftls {

LinearTransform::LinearTransform(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    throw DimensionMismatch("LinearTransform: M must be square and nonempty");
  Eigen::FullPivLU<Matrix> lu(m_);
  if (!lu.isInvertible()) throw SingularSystem("LinearTransform: M is not invertible");
  m_inv_ = lu.inverse();
  const double residual = (m_ * m_inv_ - Matrix::Identity(m_.rows(), m_.cols())).norm();
  if (residual > 1e-10)
    throw SingularSystem("LinearTransform: M too ill-conditioned to invert reliably");
}

LinearTransform::LinearTransform(Matrix m, Matrix m_inv)
    : m_(std::move(m)), m_inv_(std::move(m_inv)) {}

LinearTransform LinearTransform::scaling(const Vector& diagonal) {
  if ((diagonal.array() == 0.0).any())
    throw SingularSystem("LinearTransform::scaling: zero diagonal entry");
  return LinearTransform(Matrix(diagonal.asDiagonal()),
                         Matrix(diagonal.cwiseInverse().asDiagonal()));
}

std::vector<Observation> ar_featurize(std::span<const double> series, const ArSpec& spec) {
  if (spec.order < 1) throw BadHyperparameter("ar_featurize: order must be >= 1");
  const std::size_t p = static_cast<std::size_t>(spec.order);
  if (series.size() <= p)
    throw SeriesTooShort("ar_featurize: need more than " + std::to_string(p) + " values");

  std::vector<Observation> out;
  out.reserve(series.size() - p);
  for (std::size_t t = p; t < series.size(); ++t) {
    Vector lags(p);
    for (std::size_t j = 0; j < p; ++j) lags[static_cast<Eigen::Index>(j)] = series[t - 1 - j];
    out.push_back({FeatureVector::with_intercept(lags), series[t]});
  }
  return out;
}

Observation apply_transform(const Observation& obs, const LinearTransform& t) {
  if (obs.x.size() - 1 != t.dim())
    throw DimensionMismatch("apply_transform: transform order does not match features");
  Vector full = obs.x.full;
  full.tail(t.dim()) = t.m() * obs.x.checked();
  return {FeatureVector(std::move(full)), obs.y};
}

std::vector<Observation> apply_transform(std::span<const Observation> history,
                                         const LinearTransform& t) {
  std::vector<Observation> out;
  out.reserve(history.size());
  for (const Observation& obs : history) out.push_back(apply_transform(obs, t));
  return out;
}

WeightVector contravary_weights(const WeightVector& theta, const LinearTransform& t) {
  if (theta.size() - 1 != t.dim())
    throw DimensionMismatch("contravary_weights: transform order does not match weights");
  WeightVector out = theta;
  out.tail(t.dim()) = t.m_inv().transpose() * theta.tail(t.dim());
  return out;
}

LinearTransform random_transform(Eigen::Index dim, Rng& rng, double max_condition) {
  for (;;) {
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = rng.normal();
    Eigen::JacobiSVD<Matrix> svd(m);
    const double smin = svd.singularValues().minCoeff();
    if (smin <= 0.0) continue;
    if (svd.singularValues().maxCoeff() / smin <= max_condition) return LinearTransform(m);
  }
}

}  // namespace driftls
