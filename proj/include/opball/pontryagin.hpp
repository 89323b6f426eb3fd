#pragma once

// Indefinite forms eta(x) = ||Px||^2 - ||Qx||^2 on H (+) K with dim K finite,
// J-unitary operators, the correspondence A <-> L(A) between ball points and
// maximal negative subspaces, and unitarization of bounded representations.

#include <vector>

#include "opball/fixedpoint.hpp"

namespace opball {

class PontryaginSignature {
 public:
  /// Throws InvalidArgument unless both counts are at least 1.
  PontryaginSignature(Index n_plus, Index n_minus);

  Index n_plus() const noexcept { return n_plus_; }
  Index n_minus() const noexcept { return n_minus_; }
  Index dim() const noexcept { return n_plus_ + n_minus_; }
  /// diag(I_{n_plus}, -I_{n_minus}).
  Matrix J() const { return signature_matrix(n_plus_, n_minus_); }

  bool operator==(const PontryaginSignature&) const = default;

 private:
  Index n_plus_;
  Index n_minus_;
};

/// <Jx, x>.
double eta_value(const PontryaginSignature& sig, const Vector& x);

struct JUnitaryCheck {
  bool ok = false;
  double defect = 0.0;  // ||T*JT - J||
};

JUnitaryCheck is_J_unitary(const PontryaginSignature& sig, const Matrix& t, double tol);

/// Basis [A; I] of L(A) = { Ax (+) x }.
Matrix graph_subspace(const PontryaginSignature& sig, const BallPoint& a);

/// Inverse of graph_subspace: A = top * bottom^{-1}. Throws NotNegative if
/// the eta-Gram matrix of the basis is not negative definite and
/// DegenerateGraph if the bottom block is singular.
BallPoint subspace_to_ball(const PontryaginSignature& sig, const Matrix& basis,
                           const Tolerances& tol = kDefaultTolerances);

/// (1 - ||A||^2) / (1 + ||A||^2).
double negativeness_degree(const PontryaginSignature& sig, const BallPoint& a);

/// T as a ball automorphism; L(w_T(A)) = T L(A). Throws NotEtaPreserving
/// unless ||T*JT - J|| <= rep_tol * max(1, ||T||^2).
BallAutomorphism induced_automorphism(const PontryaginSignature& sig, const Matrix& t,
                                      const Tolerances& tol = kDefaultTolerances);

/// U with U11 = (1-DD*)^{-1/2}, U12 = -D(1-D*D)^{-1/2}, U21 = -D*(1-DD*)^{-1/2},
/// U22 = (1-D*D)^{-1/2}. Eta-preserving and maps L(D) onto K.
Matrix unitarizer_matrix(const PontryaginSignature& sig, const BallPoint& d,
                         const Tolerances& tol = kDefaultTolerances);

class Representation {
 public:
  /// Validates the table, locates the identity element and checks the
  /// homomorphism property relative to the image norms (InvalidRepresentation).
  /// With eta_preserving set, every image must also pass the rep_tol
  /// J-unitarity check (NotEtaPreserving).
  static Representation create(const PontryaginSignature& sig, GroupTable table,
                               std::vector<Matrix> images, bool eta_preserving = true,
                               const Tolerances& tol = kDefaultTolerances);

  const PontryaginSignature& signature() const noexcept { return sig_; }
  std::size_t group_order() const noexcept { return images_.size(); }
  const GroupTable& table() const noexcept { return table_; }
  const std::vector<Matrix>& images() const noexcept { return images_; }
  double bound() const noexcept { return bound_; }
  std::size_t identity_index() const noexcept { return identity_; }
  bool eta_preserving() const noexcept { return eta_preserving_; }

  /// max over g, h of ||pi(g)pi(h) - pi(gh)||.
  double homomorphism_defect() const;

  /// The group { w_{pi(g)} } with the representation's table.
  AutomorphismGroup induced_group(const Tolerances& tol = kDefaultTolerances) const;

 private:
  Representation(PontryaginSignature sig, GroupTable table, std::vector<Matrix> images,
                 bool eta_preserving);

  PontryaginSignature sig_;
  GroupTable table_;
  std::vector<Matrix> images_;
  double bound_ = 0.0;
  std::size_t identity_ = 0;
  bool eta_preserving_ = true;
};

struct UnitarizeResult {
  Matrix similarity;           // U; unitary_rep[g] = U rep[g] U^{-1}
  Matrix similarity_inverse;   // J U* J
  Representation unitary_rep;
  BallPoint fixed_point;       // D, common fixed point of the induced group
  FixedPointResult solver;
};

/// Throws NotEtaPreserving for a non-J-unitary image and FixedPointFailed if
/// the solver does not converge or the images fail the unit_tol check.
UnitarizeResult unitarize(const Representation& rep, const FixedPointParams& params = {},
                          const Tolerances& tol = kDefaultTolerances);

struct DualPair {
  Matrix positive_basis;  // columns span H2
  Matrix negative_basis;  // columns span K2
};

/// H2 = T H1, K2 = T K1 where T = U^{-1} and H1, K1 are the positive and
/// negative spectral subspaces of R = T*JT. Throws DegenerateSplit if R has
/// an eigenvalue below split_tol in modulus or the wrong negative index.
DualPair dual_pair(const Representation& rep, const FixedPointParams& params = {},
                   const Tolerances& tol = kDefaultTolerances);

/// Gram matrix G of (h1 + k1, h2 + k2) = [h1, h2] - [k1, k2]: with S = [Y Z],
/// G = S^{-*} diag(Y*JY, -Z*JZ) S^{-1}, so (x, y) = y* G x.
Matrix dual_pair_scalar_product(const PontryaginSignature& sig, const DualPair& pair);

}  // namespace opball
