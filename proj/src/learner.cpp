#include "driftls/learner.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>

#include "driftls/errors.hpp"
#include "driftls/loss.hpp"

namespace driftls {

namespace {

void check_dim(Eigen::Index expected, const FeatureVector& x, const char* where) {
  if (x.size() != expected) throw DimensionMismatch(std::string(where) + ": feature dimension mismatch");
}

}  // namespace

OnlineLearner::OnlineLearner(Eigen::Index n, double gamma_, double lambda_) {
  if (n < 1) throw BadHyperparameter("OnlineLearner: dimension must be >= 1");
  if (!(gamma_ > 0.0 && gamma_ <= 1.0)) throw BadHyperparameter("OnlineLearner: gamma must be in (0, 1]");
  if (!(lambda_ >= 0.0)) throw BadHyperparameter("OnlineLearner: lambda must be >= 0");
  ht = SymmetricMatrix::Zero(n, n);
  ht_inv_or_pinv = SymmetricMatrix::Zero(n, n);
  g = Vector::Zero(n);
  theta = WeightVector::Zero(n);
  gamma = gamma_;
  lambda = lambda_;
}

double OnlineLearner::predict(const FeatureVector& x) const {
  check_dim(dim(), x, "predict");
  return theta.dot(x.full);
}

void OnlineLearner::update(const FeatureVector& x, double y) {
  const Eigen::Index n = dim();
  check_dim(n, x, "update");

  g = gamma * g + y * x.full;

  // Maintains the pseudo-inverse of gamma*Ht + x x^T + lambda*xhat xhat^T in
  // two rank-one updates, using (gamma H)+ = H+ / gamma.
  const auto pinv_update = [&] {
    PinvState st{gamma * ht, ht_inv_or_pinv / gamma, rank_hint};
    st = pinv_rank1_update_proposed(st, x.full);
    if (lambda > 0.0) st = pinv_rank1_update_proposed(st, std::sqrt(lambda) * x.hatted());
    ht = std::move(st.h);
    ht_inv_or_pinv = std::move(st.h_pinv);
    rank_hint = std::min<int>(st.rank_hint, static_cast<int>(n));
    if (!full_rank && rank_hint >= n) full_rank = true;
  };

  if (full_rank && !pseudo_only) {
    try {
      SymmetricMatrix inv = sherman_morrison_scaled_update(ht_inv_or_pinv, x.full, gamma);
      if (lambda > 0.0)
        inv = sherman_morrison_scaled_update(inv, std::sqrt(lambda) * x.hatted(), 1.0);
      ht_inv_or_pinv = std::move(inv);
      ht = regularized_hessian_step(ht, x, gamma, lambda);
    } catch (const DenominatorTooSmall&) {
      // The inverse is no longer trustworthy; rebuild the pseudo-inverse from
      // the exactly-maintained Ht once, then stay on the rank-one pinv path.
      pseudo_only = true;
      ht_inv_or_pinv = pinv_oracle(ht);
      pinv_update();
    }
  } else {
    pinv_update();
  }

  theta = ht_inv_or_pinv * g;
  ++step;
}

RidgeLearner::RidgeLearner(Eigen::Index n, double gamma_, double lambda_) {
  if (n < 1) throw BadHyperparameter("RidgeLearner: dimension must be >= 1");
  if (!(gamma_ > 0.0 && gamma_ <= 1.0)) throw BadHyperparameter("RidgeLearner: gamma must be in (0, 1]");
  if (!(lambda_ >= 0.0)) throw BadHyperparameter("RidgeLearner: lambda must be >= 0");
  h = SymmetricMatrix::Zero(n, n);
  g = Vector::Zero(n);
  gamma = gamma_;
  lambda = lambda_;
}

double RidgeLearner::predict(const FeatureVector& x) const {
  check_dim(h.rows(), x, "predict");
  return solve().dot(x.full);
}

void RidgeLearner::update(const FeatureVector& x, double y) {
  check_dim(h.rows(), x, "update");
  h = hessian_step(h, x.full, gamma);
  g = gamma * g + y * x.full;
  ++step;
}

WeightVector RidgeLearner::solve() const {
  const Eigen::Index n = h.rows();
  const SymmetricMatrix a = h + lambda * SymmetricMatrix::Identity(n, n);
  if (lambda == 0.0) {
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) throw SingularSystem("ridge_solve: lambda = 0 and H is rank-deficient");
    return lu.solve(g);
  }
  return a.ldlt().solve(g);
}

FirstOrderLearner::FirstOrderLearner(FirstOrderVariant variant_, Eigen::Index n,
                                     FirstOrderConfig config_)
    : variant(variant_), config(config_) {
  if (n < 1) throw BadHyperparameter("FirstOrderLearner: dimension must be >= 1");
  theta = WeightVector::Zero(n);
  m = Vector::Zero(n);
  v = Vector::Zero(n);
}

double FirstOrderLearner::predict(const FeatureVector& x) const {
  check_dim(theta.size(), x, "predict");
  return theta.dot(x.full);
}

void FirstOrderLearner::update(const FeatureVector& x, double y) {
  check_dim(theta.size(), x, "update");
  const double residual = theta.dot(x.full) - y;
  const Vector grad = residual * x.full;
  ++step;

  switch (variant) {
    case FirstOrderVariant::adam: {
      m = config.beta1 * m + (1.0 - config.beta1) * grad;
      v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseAbs2();
      const double m_corr = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      const double v_corr = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      const Vector denom = (v / v_corr).cwiseSqrt().array() + config.epsilon;
      theta -= config.step_size * (m / m_corr).cwiseQuotient(denom);
      break;
    }
    case FirstOrderVariant::adagrad: {
      v += grad.cwiseAbs2();
      const Vector denom = v.cwiseSqrt().array() + config.epsilon;
      theta -= config.step_size * grad.cwiseQuotient(denom);
      break;
    }
    case FirstOrderVariant::rmsprop: {
      v = config.rms_decay * v + (1.0 - config.rms_decay) * grad.cwiseAbs2();
      const Vector denom = v.cwiseSqrt().array() + config.epsilon;
      theta -= config.step_size * grad.cwiseQuotient(denom);
      break;
    }
  }
}

}  // namespace driftls
