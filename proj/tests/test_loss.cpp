#include <doctest.h>

#include <vector>

#include "driftls/errors.hpp"
#include "driftls/loss.hpp"
#include "test_helpers.hpp"

using namespace driftls;
using driftls::testing::random_history;
using driftls::testing::rel_frobenius;

namespace {

Observation obs(std::initializer_list<double> full, double y) {
  Vector x(static_cast<Eigen::Index>(full.size()));
  Eigen::Index i = 0;
  for (const double v : full) x[i++] = v;
  return {FeatureVector(std::move(x)), y};
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Central finite differences of a scalar function of theta.
template <typename F>
Vector fd_gradient(const F& f, const Vector& theta, double h) {
  Vector grad(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Vector up = theta, down = theta;
    up[i] += h;
    down[i] -= h;
    grad[i] = (f(up) - f(down)) / (2.0 * h);
  }
  return grad;
}

template <typename F>
Matrix fd_hessian(const F& f, const Vector& theta, double h) {
  const Eigen::Index n = theta.size();
  Matrix hess(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Vector pp = theta, pm = theta, mp = theta, mm = theta;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      hess(i, j) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
    }
  }
  return hess;
}

}  // namespace

TEST_CASE("weighted_mse: zero fits and the hand-summed two-step case") {
  const std::vector<Observation> zeros = {obs({1, 0}, 0), obs({1, 1}, 0)};
  CHECK(weighted_mse(Vector::Zero(2), zeros, 0.9) == 0.0);

  Vector theta(2);
  theta << 1, 1;
  const std::vector<Observation> fit = {obs({1, 2}, 3)};
  CHECK(weighted_mse(theta, fit, 0.5) == 0.0);

  // Oldest first: (x=(1,0), y=1), then (x=(1,1), y=0); theta = 0, gamma = 0.5:
  // (1/2)[(0-0)^2 + 0.5*(0-1)^2] = 0.25.
  const std::vector<Observation> two = {obs({1, 0}, 1), obs({1, 1}, 0)};
  CHECK(weighted_mse(Vector::Zero(2), two, 0.5) == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(weighted_mse(Vector::Zero(2), std::span<const Observation>{}, 0.9),
                  EmptyHistory);
}

TEST_CASE("hessian_step: first step, identity accumulation, three-step sum") {
  Vector x12(2);
  x12 << 1, 2;
  CHECK(rel_frobenius(hessian_step(Matrix::Zero(2, 2), x12, 0.99), mat2(1, 2, 2, 4)) < 1e-15);

  CHECK(rel_frobenius(hessian_step(Matrix::Identity(2, 2), Vector(Vector::Unit(2, 0)), 1.0),
                      mat2(2, 0, 0, 1)) < 1e-15);

  // Three steps of gamma = 0.5 with x = (1,0), (1,1), (1,-1); expanding
  // sum gamma^d x x^T by hand gives [[1.75, -0.5], [-0.5, 1.5]].
  Matrix h = Matrix::Zero(2, 2);
  const double xs[3][2] = {{1, 0}, {1, 1}, {1, -1}};
  for (const auto& row : xs) {
    Vector x(2);
    x << row[0], row[1];
    h = hessian_step(h, x, 0.5);
  }
  CHECK(rel_frobenius(h, mat2(1.75, -0.5, -0.5, 1.5)) < 1e-15);
}

TEST_CASE("regularized_hessian_step: lambda off, hat contribution, split identity") {
  Rng rng(31);
  const auto history = random_history(10, 3, rng);

  SUBCASE("lambda = 0 equals the plain recursion") {
    Matrix a = Matrix::Zero(3, 3), b = Matrix::Zero(3, 3);
    for (const Observation& o : history) {
      a = hessian_step(a, o.x, 0.95);
      b = regularized_hessian_step(b, o.x, 0.95, 0.0);
    }
    CHECK(rel_frobenius(b, a) < 1e-15);
  }

  SUBCASE("first step with lambda = 1") {
    const Observation o = obs({1, 2}, 0);
    CHECK(rel_frobenius(regularized_hessian_step(Matrix::Zero(2, 2), o.x, 0.7, 1.0),
                        mat2(1, 2, 2, 8)) < 1e-15);
  }

  SUBCASE("equals H + lambda * Hhat accumulated from the same stream") {
    const double gamma = 0.9, lambda = 0.4;
    const Matrix split = data_hessian(history, gamma) + lambda * hat_hessian(history, gamma);
    CHECK((regularized_hessian(history, gamma, lambda) - split).norm() < 1e-12);
  }
}

TEST_CASE("invariant_reg_loss: lambda off, unpenalized intercept, hand value") {
  Rng rng(32);
  const auto history = random_history(8, 2, rng);
  Vector theta(2);
  theta << 0.3, -0.7;
  CHECK(invariant_reg_loss(theta, history, 0.9, 0.0) ==
        doctest::Approx(weighted_mse(theta, history, 0.9)).epsilon(1e-14));

  Vector intercept_only(2);
  intercept_only << 5, 0;
  CHECK(invariant_reg_loss(intercept_only, history, 0.9, 2.0) ==
        doctest::Approx(weighted_mse(intercept_only, history, 0.9)).epsilon(1e-14));

  // Single obs x = (1,1), y = 0, theta = (0,1), gamma = 1, lambda = 2:
  // (1/2)*1 + (2/2)*1 = 1.5.
  const std::vector<Observation> single = {obs({1, 1}, 0)};
  Vector t01(2);
  t01 << 0, 1;
  CHECK(invariant_reg_loss(t01, single, 1.0, 2.0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("l2_reg_loss: penalizes every coordinate including the intercept") {
  Rng rng(33);
  const auto history = random_history(5, 2, rng);
  const double mse = weighted_mse(Vector::Ones(2), history, 0.9);
  CHECK(l2_reg_loss(Vector::Ones(2), history, 0.9, 0.0) == doctest::Approx(mse));
  // ||(1,1)||^2 = 2, so the regularizer term is exactly lambda.
  const double lambda = 0.8;
  CHECK(l2_reg_loss(Vector::Ones(2), history, 0.9, lambda) - mse ==
        doctest::Approx(lambda).epsilon(1e-12));

  Vector t34(2);
  t34 << 3, 4;
  const double base = weighted_mse(t34, history, 0.9);
  CHECK(l2_reg_loss(t34, history, 0.9, 2.0) - base == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("losses are nonnegative") {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const auto history = random_history(6, 3, rng);
    const Vector theta = rng.normal_vector(3);
    CHECK(weighted_mse(theta, history, 0.95) >= 0.0);
    CHECK(invariant_reg_loss(theta, history, 0.95, 0.7) >= 0.0);
    CHECK(l2_reg_loss(theta, history, 0.95, 0.7) >= 0.0);
  }
}

TEST_CASE("gradient check: grad of weighted_mse is H theta - g") {
  Rng rng(35);
  const double gammas[] = {0.9, 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_u64() % 5);  // 2..6
    const std::size_t steps = 2 + static_cast<std::size_t>(rng.next_u64() % 19);  // 2..20
    const double gamma = gammas[trial % 2];
    const auto history = random_history(steps, n, rng);
    const Vector theta = rng.normal_vector(n);

    const Vector analytic = data_hessian(history, gamma) * theta - target_correlation(history, gamma);
    const Vector numeric = fd_gradient(
        [&](const Vector& t) { return weighted_mse(t, history, gamma); }, theta, 1e-5);
    CHECK((analytic - numeric).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("hessian check: invariant_reg_loss curvature is the regularized hessian") {
  Rng rng(36);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index n = 3;
    const auto history = random_history(10, n, rng);
    const Vector theta = rng.normal_vector(n);
    const double gamma = 0.95, lambda = 0.4;

    const Matrix analytic = regularized_hessian(history, gamma, lambda);
    const Matrix numeric = fd_hessian(
        [&](const Vector& t) { return invariant_reg_loss(t, history, gamma, lambda); }, theta,
        1e-4);
    CHECK((analytic - numeric).cwiseAbs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("hessian recursion equals the explicit weighted sum") {
  Rng rng(37);
  const Eigen::Index n = 3;
  const double gamma = 0.97;
  const auto history = random_history(100, n, rng);

  Matrix recursive = Matrix::Zero(n, n);
  for (const Observation& o : history) recursive = hessian_step(recursive, o.x, gamma);

  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double w = std::pow(gamma, static_cast<double>(history.size() - 1 - i));
    sum += w * history[i].x.full * history[i].x.full.transpose();
  }
  CHECK(rel_frobenius(recursive, sum) < 1e-10);
}
