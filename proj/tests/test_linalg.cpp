#include <doctest.h>

#include <Eigen/LU>

#include "driftls/errors.hpp"
#include "driftls/linalg.hpp"
#include "test_helpers.hpp"

using namespace driftls;
using driftls::testing::random_psd_rank;
using driftls::testing::random_spd;
using driftls::testing::rel_frobenius;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("sherman-morrison: diagonal and rescaling cases") {
  const Vector e1 = Vector::Unit(2, 0);
  const Matrix r = sherman_morrison_scaled_update(Matrix::Identity(2, 2), e1, 1.0);
  CHECK(rel_frobenius(r, mat2(0.5, 0, 0, 1)) < 1e-15);

  const Matrix half = sherman_morrison_scaled_update(Matrix::Identity(3, 3), Vector::Zero(3), 2.0);
  CHECK(rel_frobenius(half, 0.5 * Matrix::Identity(3, 3)) < 1e-15);
}

TEST_CASE("sherman-morrison: matches the direct-solve oracle") {
  Rng rng(811);
  const Matrix a = random_spd(8, rng);
  const Vector u = rng.normal_vector(8);
  const double gamma = 0.99;

  const Matrix updated = sherman_morrison_scaled_update(a.inverse(), u, gamma);
  const Matrix direct = (gamma * a + u * u.transpose()).inverse();
  CHECK(rel_frobenius(updated, direct) < 1e-10);
}

TEST_CASE("sherman-morrison: inverse property over sizes and gammas") {
  const Eigen::Index sizes[] = {2, 8, 32};
  const double gammas[] = {0.9, 0.99, 1.0};
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index n = sizes[i % 3];
    const double gamma = gammas[(i / 3) % 3];
    const Matrix a = random_spd(n, rng);
    const Vector u = rng.normal_vector(n);
    const Matrix result = sherman_morrison_scaled_update(a.inverse(), u, gamma);
    const Matrix should_be_identity = result * (gamma * a + u * u.transpose());
    CHECK((should_be_identity - Matrix::Identity(n, n)).norm() < 1e-8);
  }
}

TEST_CASE("sherman-morrison: singular denominator is reported") {
  // -I is a valid symmetric "inverse" input that drives gamma + u^T A^-1 u to 0.
  const Matrix poisoned = -Matrix::Identity(2, 2);
  CHECK_THROWS_AS(sherman_morrison_scaled_update(poisoned, Vector::Unit(2, 0), 1.0),
                  DenominatorTooSmall);
  CHECK_THROWS_AS(sherman_morrison_scaled_update(Matrix::Identity(2, 2), Vector::Zero(2), 0.0),
                  BadHyperparameter);
}

TEST_CASE("pinv update (proposed): first update from zero") {
  RankOneWorkspace ws;
  const PinvState next = pinv_rank1_update_proposed(PinvState::zero(2), Vector::Unit(2, 0), &ws);
  CHECK(ws.positive_branch);
  CHECK(next.rank_hint == 1);
  CHECK(rel_frobenius(next.h_pinv, mat2(1, 0, 0, 0)) < 1e-15);
  CHECK(rel_frobenius(next.h, mat2(1, 0, 0, 0)) < 1e-15);
}

TEST_CASE("pinv update (proposed): zero branch on full-rank state") {
  const PinvState state{Matrix::Identity(2, 2), Matrix::Identity(2, 2), 2};
  RankOneWorkspace ws;
  const PinvState next = pinv_rank1_update_proposed(state, Vector::Unit(2, 0), &ws);
  CHECK_FALSE(ws.positive_branch);
  CHECK(next.rank_hint == 2);
  CHECK(rel_frobenius(next.h_pinv, mat2(0.5, 0, 0, 1)) < 1e-15);
}

TEST_CASE("pinv update (proposed): matches eigendecomposition oracle") {
  Rng rng(5150);
  const Matrix h = random_psd_rank(6, 3, rng);
  const Vector c = rng.normal_vector(6);
  const PinvState state{h, pinv_oracle(h), 3};
  const PinvState next = pinv_rank1_update_proposed(state, c);
  const Matrix truth = pinv_oracle(h + c * c.transpose());
  CHECK(rel_frobenius(next.h_pinv, truth) < 1e-9);
}

TEST_CASE("pinv update (baseline): trivial cases match proposed") {
  const PinvState from_zero = pinv_rank1_update_baseline(PinvState::zero(2), Vector::Unit(2, 0));
  CHECK(rel_frobenius(from_zero.h_pinv, mat2(1, 0, 0, 0)) < 1e-15);

  const PinvState state{Matrix::Identity(2, 2), Matrix::Identity(2, 2), 2};
  const PinvState next = pinv_rank1_update_baseline(state, Vector::Unit(2, 1));
  CHECK(rel_frobenius(next.h_pinv, mat2(1, 0, 0, 0.5)) < 1e-15);
}

TEST_CASE("pinv update: proposed accumulates less error than baseline") {
  const Eigen::Index n = 32;
  Rng rng(32320);
  PinvState proposed = PinvState::zero(n);
  PinvState baseline = PinvState::zero(n);
  Matrix h_exact = Matrix::Zero(n, n);
  double err_proposed = 0.0, err_baseline = 0.0;
  for (int t = 0; t < n; ++t) {
    const Vector c = rng.normal_vector(n);
    h_exact += c * c.transpose();
    proposed = pinv_rank1_update_proposed(proposed, c);
    baseline = pinv_rank1_update_baseline(baseline, c);
    const Matrix truth = pinv_oracle(h_exact);
    err_proposed = relative_error(proposed.h_pinv, truth);
    err_baseline = relative_error(baseline.h_pinv, truth);
  }
  CHECK(err_baseline > err_proposed);
}

TEST_CASE("pinv update: oracle agreement across ranks") {
  Rng rng(99);
  int cases = 0;
  while (cases < 60) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_u64() % 15);  // 2..16
    const Eigen::Index rank = static_cast<Eigen::Index>(rng.next_u64() % (n + 1));
    const Matrix h = rank == 0 ? Matrix::Zero(n, n).eval() : random_psd_rank(n, rank, rng);
    const PinvState state{h, pinv_oracle(h), static_cast<int>(rank)};
    const Vector c = rng.normal_vector(n);
    const PinvState next = pinv_rank1_update_proposed(state, c);
    const Matrix truth = pinv_oracle(h + c * c.transpose());
    CHECK(rel_frobenius(next.h_pinv, truth) < 1e-8);
    ++cases;
  }
}

TEST_CASE("pinv update: penrose conditions hold along an update stream") {
  const Eigen::Index n = 6;
  Rng rng(606);
  PinvState state = PinvState::zero(n);
  for (int t = 0; t < n; ++t) {
    state = pinv_rank1_update_proposed(state, rng.normal_vector(n));
    CHECK(penrose_residuals(state.h, state.h_pinv).max() < 1e-6);
  }
}

TEST_CASE("pinv update: branch sequence and projector nonnegativity") {
  const Eigen::Index n = 5;
  Rng rng(515);
  PinvState state = PinvState::zero(n);
  RankOneWorkspace ws;
  for (int t = 0; t < 9; ++t) {
    const Vector c = rng.normal_vector(n);
    state = pinv_rank1_update_proposed(state, c, &ws);
    // Gaussian directions are linearly independent until the space fills.
    CHECK(ws.positive_branch == (t < n));
    CHECK(ws.u_dot_c >= -1e-8 * c.squaredNorm());
  }
  CHECK(state.rank_hint == n);
}

TEST_CASE("pinv update: corrupted state raises NegativeProjection") {
  // h_pinv is deliberately NOT the pseudo-inverse of h; the projector test
  // goes negative.
  const PinvState corrupt{mat2(1, 0, 0, 0), mat2(5, 0, 0, 0), 1};
  CHECK_THROWS_AS(pinv_rank1_update_proposed(corrupt, Vector::Unit(2, 0)), NegativeProjection);
}

TEST_CASE("pinv_oracle: fixed points and penrose suite") {
  CHECK(rel_frobenius(pinv_oracle(mat2(2, 0, 0, 0)), mat2(0.5, 0, 0, 0)) < 1e-15);
  CHECK(pinv_oracle(Matrix::Zero(4, 4)).norm() == 0.0);

  Rng rng(2718);
  const Matrix h = random_psd_rank(5, 2, rng);
  CHECK(penrose_residuals(h, pinv_oracle(h)).max() < 1e-10);
}

TEST_CASE("relative_error: definition cases") {
  const Matrix i2 = Matrix::Identity(2, 2);
  CHECK(relative_error(i2, i2) == 0.0);
  CHECK(relative_error(2.0 * i2, i2) == doctest::Approx(1.0));
  CHECK(relative_error(Matrix::Zero(3, 3), Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(relative_error(i2, Matrix::Zero(2, 2)), ZeroTruth);
}
