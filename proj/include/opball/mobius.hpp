#pragma once

// Points of the operator ball B = { A : ||A|| < 1 } (n_H x n_K matrices),
// Mobius transformations M_A and automorphisms given by eta-preserving block
// matrices acting by w_T(A) = (T11 A + T12)(T21 A + T22)^{-1}.

#include "opball/opcore.hpp"

namespace opball {

class BallPoint {
 public:
  /// Throws BoundaryProximity unless ||m|| < 1 - boundary_tol.
  explicit BallPoint(Matrix m, double boundary_tol = kDefaultTolerances.boundary_tol);

  static BallPoint zero(Index rows, Index cols);

  const Matrix& matrix() const noexcept { return matrix_; }
  double norm() const noexcept { return 1.0 - margin_; }
  double margin() const noexcept { return margin_; }
  Index rows() const noexcept { return matrix_.rows(); }
  Index cols() const noexcept { return matrix_.cols(); }

  BallPoint operator-() const;

 private:
  Matrix matrix_;
  double margin_;
};

/// Block matrix T on H (+) K, normalized so that T*JT is as close to J as a
/// positive rescale allows.
class BallAutomorphism {
 public:
  /// Rescales `block` by 1/sqrt(s) with s the Rayleigh estimate of T*JT
  /// against J, then checks ||T*JT - J|| <= aut_tol * max(1, ||T||^2).
  /// Throws NotEtaPreserving on failure, ShapeMismatch on bad dimensions.
  static BallAutomorphism from_block(const Matrix& block, Index n_h, Index n_k,
                                     const Tolerances& tol = kDefaultTolerances);

  static BallAutomorphism identity(Index n_h, Index n_k);

  const Matrix& block() const noexcept { return block_; }
  Index n_h() const noexcept { return n_h_; }
  Index n_k() const noexcept { return n_k_; }

  auto t11() const { return block_.topLeftCorner(n_h_, n_h_); }
  auto t12() const { return block_.topRightCorner(n_h_, n_k_); }
  auto t21() const { return block_.bottomLeftCorner(n_k_, n_h_); }
  auto t22() const { return block_.bottomRightCorner(n_k_, n_k_); }

  /// ||T*JT - J||.
  double eta_defect() const;

  BallAutomorphism inverse(const Tolerances& tol = kDefaultTolerances) const;

 private:
  BallAutomorphism(Matrix block, Index n_h, Index n_k)
      : block_(std::move(block)), n_h_(n_h), n_k_(n_k) {}

  Matrix block_;
  Index n_h_;
  Index n_k_;
};

/// diag(I_{n_h}, -I_{n_k}).
Matrix signature_matrix(Index n_h, Index n_k);

/// (1 - A A*)^{p} and (1 - A* A)^{p} for a strict contraction A.
Matrix left_defect_power(const Matrix& a, double p, const Tolerances& tol = kDefaultTolerances);
Matrix right_defect_power(const Matrix& a, double p, const Tolerances& tol = kDefaultTolerances);

/// M_A(X) = (1-AA*)^{-1/2} (A+X) (1+A*X)^{-1} (1-A*A)^{1/2}.
BallPoint mobius_apply(const BallPoint& a, const BallPoint& x,
                       const Tolerances& tol = kDefaultTolerances);

/// Unchecked value of M_A(X); the result may lie on or outside the boundary
/// if the inputs are extreme. Used by the distance, which must not reject
/// far-apart but valid pairs.
Matrix mobius_matrix(const BallPoint& a, const BallPoint& x,
                     const Tolerances& tol = kDefaultTolerances);

/// Differential of M_B at A applied to V:
/// (1-BB*)^{1/2} (1+AB*)^{-1} V (1+B*A)^{-1} (1-B*B)^{1/2}.
Matrix mobius_differential(const BallPoint& b, const BallPoint& a, const Matrix& v,
                           const Tolerances& tol = kDefaultTolerances);

/// Block matrix whose fractional-linear action equals M_A.
BallAutomorphism mobius_as_block(const BallPoint& a, const Tolerances& tol = kDefaultTolerances);

/// w_T(A). Throws SingularDenominator if T21 A + T22 is numerically singular.
BallPoint automorphism_apply(const BallAutomorphism& t, const BallPoint& a,
                             const Tolerances& tol = kDefaultTolerances);

/// Block product T1 T2 (renormalized); acts as w_{T1} o w_{T2}.
BallAutomorphism automorphism_compose(const BallAutomorphism& t1, const BallAutomorphism& t2,
                                      const Tolerances& tol = kDefaultTolerances);

}  // namespace opball
