#pragma once

#include <Eigen/Core>

#include "driftls/types.hpp"

namespace driftls {

// Dense symmetric n x n matrix. Symmetry is re-imposed ((A + A^T)/2) after
// every rank-one update; accumulation experiments are sensitive to the drift.
using SymmetricMatrix = Matrix;

// |gamma + u^T A^-1 u| below this is treated as a singular update.
inline constexpr double kShermanMorrisonTol = 1e-12;
// Branch test of the rank-one pseudo-inverse update, relative to c^T c.
inline constexpr double kBranchTol = 1e-9;
// Eigenvalues below kEigCutoff * max|lambda| are treated as zero.
inline constexpr double kEigCutoff = 1e-12;

/// Paired (H, H+) maintained across rank-one updates, plus the count of
/// positive-branch (rank-increasing) updates applied so far.
struct PinvState {
  SymmetricMatrix h;
  SymmetricMatrix h_pinv;
  int rank_hint = 0;

  static PinvState zero(Eigen::Index n) {
    return {SymmetricMatrix::Zero(n, n), SymmetricMatrix::Zero(n, n), 0};
  }
};

/// Intermediates of one rank-one pseudo-inverse update, exposed so callers
/// can check the projector property u.c >= 0.
struct RankOneWorkspace {
  Vector u;
  Vector u_plus;
  Vector k;
  double u_dot_c = 0.0;
  bool positive_branch = false;
};

/// Residuals of the four Penrose conditions for a candidate pair (H, P),
/// each normalized by the Frobenius norm of its left-hand side (0/0 -> 0).
struct PenroseResiduals {
  double hph;     // ||H P H - H|| / ||H||
  double php;     // ||P H P - P|| / ||P||
  double hp_sym;  // ||(H P)^T - H P|| / ||H P||
  double ph_sym;  // ||(P H)^T - P H|| / ||P H||
  double max() const;
};

void symmetrize(SymmetricMatrix& a);

/// (gamma*A + u u^T)^-1 from A^-1 in O(n^2):
/// (1/gamma) * (A^-1 - A^-1 u u^T A^-1 / (gamma + u^T A^-1 u)).
/// Throws DenominatorTooSmall when the denominator is within
/// kShermanMorrisonTol of zero; callers fall back to the pseudo-inverse path.
SymmetricMatrix sherman_morrison_scaled_update(const SymmetricMatrix& a_inv, const Vector& u,
                                               double gamma);

/// Rank-one pseudo-inverse update: returns the state advanced to
/// (H + c c^T, (H + c c^T)+) with u = (I - H+ H) c and u+ = u / (u.c).
/// Positive branch when u.c > kBranchTol * c.c, zero branch when |u.c| is
/// within tolerance, NegativeProjection below -kBranchTol * c.c.
PinvState pinv_rank1_update_proposed(const PinvState& state, const Vector& c,
                                     RankOneWorkspace* ws = nullptr);

/// Same update with u = (I - H H+) c and u+ = u / ||u||^2; branch test on
/// ||u||^2, which equals u.c in exact arithmetic. Kept for the accuracy
/// comparison benchmark.
PinvState pinv_rank1_update_baseline(const PinvState& state, const Vector& c,
                                     RankOneWorkspace* ws = nullptr);

/// Moore-Penrose pseudo-inverse via full symmetric eigendecomposition; the
/// non-recursive ground truth the rank-one updates are measured against.
SymmetricMatrix pinv_oracle(const SymmetricMatrix& h);

/// sum_ij (A_ij - B_ij)^2 / sum_ij B_ij^2. Throws ZeroTruth for B = O.
double relative_error(const SymmetricMatrix& estimate, const SymmetricMatrix& truth);

PenroseResiduals penrose_residuals(const SymmetricMatrix& h, const SymmetricMatrix& h_pinv);

}  // namespace driftls
