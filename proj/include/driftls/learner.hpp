#pragma once

#include <cstdint>

#include "driftls/linalg.hpp"
#include "driftls/types.hpp"

namespace driftls {

/// Second-order online learner: exponentially forgetting least squares with
/// the Hessian-metric regularizer, O(n^2) per update.
///
/// Maintains Ht = gamma*Ht + x x^T + lambda * xhat xhat^T together with its
/// inverse (two Sherman-Morrison applications once full rank) or
/// pseudo-inverse (two rank-one pseudo-inverse updates while rank-deficient),
/// the correlation vector g = gamma*g + y*x, and theta = Ht^-1 g — the
/// minimum-norm minimizer while rank-deficient.
///
/// Value type: copy freely, never mutate one instance concurrently.
struct OnlineLearner {
  SymmetricMatrix ht;
  SymmetricMatrix ht_inv_or_pinv;
  Vector g;
  WeightVector theta;
  long step = 0;
  double gamma = 1.0;
  double lambda = 0.0;
  bool full_rank = false;
  int rank_hint = 0;
  // Set when a Sherman-Morrison update reports a singular denominator; the
  // learner then stays on the pseudo-inverse path for good.
  bool pseudo_only = false;

  /// Zero state of dimension n. Throws BadHyperparameter unless n >= 1,
  /// 0 < gamma <= 1 and lambda >= 0.
  OnlineLearner(Eigen::Index n, double gamma, double lambda);

  Eigen::Index dim() const { return theta.size(); }

  /// theta . x; pure. Throws DimensionMismatch.
  double predict(const FeatureVector& x) const;

  /// One online step on (x, y).
  void update(const FeatureVector& x, double y);
};

/// Standard-L2 ridge baseline: accumulates (H_t, g_t) and solves
/// (H_t + lambda*I) theta = g_t directly, O(n^3) per solve.
struct RidgeLearner {
  SymmetricMatrix h;
  Vector g;
  double gamma = 1.0;
  double lambda = 0.0;
  long step = 0;

  RidgeLearner(Eigen::Index n, double gamma, double lambda);

  double predict(const FeatureVector& x) const;
  void update(const FeatureVector& x, double y);

  /// (H + lambda*I)^-1 g. Throws SingularSystem when lambda = 0 and H is
  /// rank-deficient.
  WeightVector solve() const;
};

enum class FirstOrderVariant { adam, adagrad, rmsprop };

struct FirstOrderConfig {
  double step_size = 1e-3;
  double beta1 = 0.9;    // Adam first-moment decay
  double beta2 = 0.999;  // Adam second-moment decay
  double rms_decay = 0.9;
  double epsilon = 1e-8;
};

/// First-order baselines on the instantaneous squared error
/// (1/2)(theta.x - y)^2.
struct FirstOrderLearner {
  FirstOrderVariant variant;
  FirstOrderConfig config;
  WeightVector theta;
  Vector m;  // first moment (Adam)
  Vector v;  // second moment / squared-gradient accumulator
  long step = 0;

  FirstOrderLearner(FirstOrderVariant variant, Eigen::Index n, FirstOrderConfig config = {});

  double predict(const FeatureVector& x) const;
  void update(const FeatureVector& x, double y);
};

}  // namespace driftls
