#pragma once

#include <Eigen/Core>
#include <utility>

#include "driftls/errors.hpp"

namespace driftls {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Weight vector theta. Coordinate 0 is the intercept theta(0), the tail is
// the slope block theta-check.
using WeightVector = Vector;

/// Regression input x_t. Coordinate 0 is the designated intercept slot;
/// AR featurization fixes it to 1, and the hatted companion x-hat zeroes it
/// so the intercept never enters the regularizer.
struct FeatureVector {
  Vector full;

  FeatureVector() = default;
  explicit FeatureVector(Vector values) : full(std::move(values)) {
    if (full.size() < 1) throw DimensionMismatch("FeatureVector needs at least one coordinate");
  }

  // (1, checked) layout used by all paper experiments.
  static FeatureVector with_intercept(const Vector& checked) {
    Vector v(checked.size() + 1);
    v[0] = 1.0;
    v.tail(checked.size()) = checked;
    return FeatureVector(std::move(v));
  }

  Eigen::Index size() const { return full.size(); }

  // x-check: the non-intercept coordinates.
  auto checked() const { return full.tail(full.size() - 1); }

  // x-hat = (0, x-check).
  Vector hatted() const {
    Vector v = full;
    v[0] = 0.0;
    return v;
  }
};

struct Observation {
  FeatureVector x;
  double y = 0.0;
};

}  // namespace driftls
