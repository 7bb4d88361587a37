#include "driftls/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "driftls/errors.hpp"

namespace driftls {

namespace {

void check_same_order(const SymmetricMatrix& a, Eigen::Index n, const char* where) {
  if (a.rows() != n || a.cols() != n) throw DimensionMismatch(std::string(where) + ": order mismatch");
}

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

// Shared tail of both rank-one update variants. u_plus already carries the
// variant's normalization.
SymmetricMatrix apply_branch(const SymmetricMatrix& p, const Vector& c, const Vector& k,
                             const Vector& u_plus, bool positive) {
  SymmetricMatrix next;
  if (positive) {
    next = p - k * u_plus.transpose() - u_plus * k.transpose() +
           (1.0 + c.dot(k)) * (u_plus * u_plus.transpose());
  } else {
    next = p - (k * k.transpose()) / (1.0 + c.dot(k));
  }
  symmetrize(next);
  return next;
}

}  // namespace

double PenroseResiduals::max() const { return std::max({hph, php, hp_sym, ph_sym}); }

void symmetrize(SymmetricMatrix& a) { a = ((a + a.transpose()) * 0.5).eval(); }

SymmetricMatrix sherman_morrison_scaled_update(const SymmetricMatrix& a_inv, const Vector& u,
                                               double gamma) {
  check_same_order(a_inv, u.size(), "sherman_morrison_scaled_update");
  if (gamma <= 0.0) throw BadHyperparameter("sherman_morrison_scaled_update: gamma must be > 0");

  const Vector ainv_u = a_inv * u;
  const double denom = gamma + u.dot(ainv_u);
  if (std::abs(denom) < kShermanMorrisonTol)
    throw DenominatorTooSmall("sherman_morrison_scaled_update: gamma*A + u*u^T is singular");

  SymmetricMatrix result = (a_inv - (ainv_u * ainv_u.transpose()) / denom) / gamma;
  symmetrize(result);
  return result;
}

namespace {

PinvState pinv_rank1_update(const PinvState& state, const Vector& c, bool proposed,
                            RankOneWorkspace* ws) {
  const Eigen::Index n = c.size();
  check_same_order(state.h, n, "pinv_rank1_update");
  check_same_order(state.h_pinv, n, "pinv_rank1_update");

  const Vector k = state.h_pinv * c;
  Vector u;
  double gate;  // compared against kBranchTol * c.c to pick the branch
  if (proposed) {
    u = c - state.h_pinv * (state.h * c);
    gate = u.dot(c);
    if (gate < -kBranchTol * c.squaredNorm())
      throw NegativeProjection("pinv_rank1_update: u.c < 0 beyond tolerance");
  } else {
    u = c - state.h * k;
    gate = u.squaredNorm();
  }

  const bool positive = gate > kBranchTol * c.squaredNorm();
  Vector u_plus = positive ? Vector((u / gate).eval()) : Vector(Vector::Zero(n));

  PinvState next;
  next.h = state.h + c * c.transpose();
  symmetrize(next.h);
  next.h_pinv = apply_branch(state.h_pinv, c, k, u_plus, positive);
  next.rank_hint = state.rank_hint + (positive ? 1 : 0);

  if (ws) {
    ws->u = std::move(u);
    ws->u_plus = std::move(u_plus);
    ws->k = k;
    ws->u_dot_c = gate;
    ws->positive_branch = positive;
  }
  return next;
}

}  // namespace

PinvState pinv_rank1_update_proposed(const PinvState& state, const Vector& c,
                                     RankOneWorkspace* ws) {
  return pinv_rank1_update(state, c, /*proposed=*/true, ws);
}

PinvState pinv_rank1_update_baseline(const PinvState& state, const Vector& c,
                                     RankOneWorkspace* ws) {
  return pinv_rank1_update(state, c, /*proposed=*/false, ws);
}

SymmetricMatrix pinv_oracle(const SymmetricMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionMismatch("pinv_oracle: matrix must be square");

  SymmetricMatrix sym = h;
  symmetrize(sym);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector& values = eig.eigenvalues();
  const Matrix& vectors = eig.eigenvectors();

  const double max_abs = values.cwiseAbs().maxCoeff();
  Vector inverted = Vector::Zero(values.size());
  if (max_abs > 0.0) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (std::abs(values[i]) > kEigCutoff * max_abs) inverted[i] = 1.0 / values[i];
    }
  }
  SymmetricMatrix result = vectors * inverted.asDiagonal() * vectors.transpose();
  symmetrize(result);
  return result;
}

double relative_error(const SymmetricMatrix& estimate, const SymmetricMatrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw DimensionMismatch("relative_error: order mismatch");
  const double denom = truth.squaredNorm();
  if (denom == 0.0) throw ZeroTruth("relative_error: truth matrix is zero");
  return (estimate - truth).squaredNorm() / denom;
}

PenroseResiduals penrose_residuals(const SymmetricMatrix& h, const SymmetricMatrix& p) {
  const Matrix hp = h * p;
  const Matrix ph = p * h;
  PenroseResiduals r{};
  r.hph = safe_ratio((hp * h - h).norm(), h.norm());
  r.php = safe_ratio((ph * p - p).norm(), p.norm());
  r.hp_sym = safe_ratio((hp.transpose() - hp).norm(), hp.norm());
  r.ph_sym = safe_ratio((ph.transpose() - ph).norm(), ph.norm());
  return r;
}

}  // namespace driftls
