#pragma once

#include <span>

#include "driftls/linalg.hpp"
#include "driftls/types.hpp"

namespace driftls {

// Loss evaluation walks the whole history (O(t*n) per call) and exists for
// tests and sweeps; the online learner never calls it.

/// (1/2) sum_{d=0}^{t-1} gamma^d (theta.x_{t-d} - y_{t-d})^2.
/// history is ordered oldest first. Throws EmptyHistory.
double weighted_mse(const WeightVector& theta, std::span<const Observation> history, double gamma);

/// weighted_mse + (lambda/2) * theta^T Hhat_t theta; the intercept is never
/// penalized (theta^T Hhat theta = theta-check^T Hcheck theta-check).
double invariant_reg_loss(const WeightVector& theta, std::span<const Observation> history,
                          double gamma, double lambda);

/// weighted_mse + (lambda/2) * ||theta||^2 over all coordinates, intercept
/// included.
double l2_reg_loss(const WeightVector& theta, std::span<const Observation> history, double gamma,
                   double lambda);

/// gamma * h_prev + x x^T. Feeding the hatted companion vector accumulates
/// the intercept-free Hessian Hhat instead.
SymmetricMatrix hessian_step(const SymmetricMatrix& h_prev, const Vector& x, double gamma);
SymmetricMatrix hessian_step(const SymmetricMatrix& h_prev, const FeatureVector& x, double gamma);

/// gamma * ht_prev + x x^T + lambda * xhat xhat^T.
SymmetricMatrix regularized_hessian_step(const SymmetricMatrix& ht_prev, const FeatureVector& x,
                                         double gamma, double lambda);

// Explicit-sum accumulators over a history (the non-recursive forms); used
// by tests, oracles, and the batch experiments.
SymmetricMatrix data_hessian(std::span<const Observation> history, double gamma);
SymmetricMatrix hat_hessian(std::span<const Observation> history, double gamma);
SymmetricMatrix regularized_hessian(std::span<const Observation> history, double gamma,
                                    double lambda);
/// g_t = sum_{d=0}^{t-1} gamma^d y_{t-d} x_{t-d}.
Vector target_correlation(std::span<const Observation> history, double gamma);

}  // namespace driftls
