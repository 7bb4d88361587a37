#pragma once

#include <span>
#include <vector>

#include "driftls/rng.hpp"
#include "driftls/types.hpp"

namespace driftls {

struct ArSpec {
  int order = 1;
  bool include_intercept = true;  // always true in the experiments
};

/// Invertible transform M of the non-intercept coordinates, with its inverse
/// cached at construction. Never touches coordinate 0.
class LinearTransform {
 public:
  explicit LinearTransform(Matrix m);

  const Matrix& m() const { return m_; }
  const Matrix& m_inv() const { return m_inv_; }
  Eigen::Index dim() const { return m_.rows(); }

  LinearTransform inverse() const { return LinearTransform(m_inv_, m_); }

  /// Diagonal special case (coordinate scaling).
  static LinearTransform scaling(const Vector& diagonal);

 private:
  LinearTransform(Matrix m, Matrix m_inv);
  Matrix m_;
  Matrix m_inv_;
};

/// Sliding-window AR featurization: for each t >= p emits
/// x = (1, s_{t-1}, ..., s_{t-p}), y = s_t. Output length = len - p.
/// Throws SeriesTooShort unless len > p.
std::vector<Observation> ar_featurize(std::span<const double> series, const ArSpec& spec);

/// x-check' = M x-check; intercept slot and target unchanged.
Observation apply_transform(const Observation& obs, const LinearTransform& t);
std::vector<Observation> apply_transform(std::span<const Observation> history,
                                         const LinearTransform& t);

/// theta-check' = M^-T theta-check (the weights transform contravariantly);
/// intercept unchanged.
WeightVector contravary_weights(const WeightVector& theta, const LinearTransform& t);

/// Random Gaussian transform resampled until cond(M) <= max_condition, so
/// invariance tolerances stay meaningful.
LinearTransform random_transform(Eigen::Index dim, Rng& rng, double max_condition = 100.0);

}  // namespace driftls
