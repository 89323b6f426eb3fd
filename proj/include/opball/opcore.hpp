#pragma once

// Dense complex matrix arithmetic and the Hermitian functional calculus that
// every ball formula is built on. All matrix functions go through an
// eigendecomposition of a Hermitian (usually Gram) matrix.

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "opball/error.hpp"

namespace opball {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical thresholds shared by all modules. Every field is overridable
/// through the CLI run configuration.
struct Tolerances {
  double herm_tol = 1e-10;      // Hermiticity defect accepted before symmetrizing
  double psd_tol = 1e-10;       // negative eigenvalues clamped to zero up to this
  double rank_tol = 1e-12;      // relative singular-value cutoff for partial isometries
  double eig_tol = 1e-9;        // reconstruction accuracy expected from hermitian_eig
  double boundary_tol = 1e-8;   // minimum margin 1 - ||A|| of a ball point
  double aut_tol = 1e-9;        // ||T*JT - J|| / max(1, ||T||^2) for automorphisms
  double cond_tol = 1e-12;      // reciprocal condition below which a resolvent is singular
  double dir_tol = 1e-9;        // | ||D|| - 1 | for geodesic directions
  double line_tol = 1e-13;      // distance below which two points coincide
  double group_tol = 1e-7;      // probe distance under which two group elements are equal
  double rep_tol = 1e-9;        // homomorphism / J-unitarity defect (relative)
  double unit_tol = 1e-7;       // unitarity defect of unitarized images
  double split_tol = 1e-10;     // |eigenvalue| of R = T*JT treated as zero
  double pair_tol = 1e-7;       // principal-angle tolerance for invariant subspaces
  double diam_tol = 1e-9;       // slack in the diametral-point test
};

inline constexpr Tolerances kDefaultTolerances{};

/// Throws InvalidMatrix if `a` is empty or has a non-finite entry.
void require_valid(const Matrix& a, const char* what = "matrix");

/// Largest singular value.
double spectral_norm(const Matrix& a);

RealVector singular_values(const Matrix& a);

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// (S + S*)/2 after the Hermiticity check.
HermitianEig hermitian_eig(const Matrix& s, const Tolerances& tol = kDefaultTolerances);

/// f(S) for a positive semidefinite S. Eigenvalues in [-psd_tol, 0) are
/// clamped to zero; `f` must return a finite value on every eigenvalue.
Matrix psd_apply(const Matrix& s, const std::function<double(double)>& f,
                 const Tolerances& tol = kDefaultTolerances);

/// Same as psd_apply but for an arbitrary Hermitian matrix (no PSD check).
Matrix hermitian_apply(const Matrix& s, const std::function<double(double)>& f,
                       const Tolerances& tol = kDefaultTolerances);

/// D = isometry * modulus with modulus = (D*D)^{1/2} and isometry the partial
/// isometry built from the singular pairs above rank_tol * sigma_max.
struct PolarDecomposition {
  Matrix isometry;
  Matrix modulus;
  Index rank = 0;
};

PolarDecomposition polar_decompose(const Matrix& d, double rank_tol = kDefaultTolerances.rank_tol);

/// Largest principal angle (radians) between the column spans of `a` and `b`.
/// Both must have full column rank and the same number of columns.
double max_principal_angle(const Matrix& a, const Matrix& b);

/// Orthonormal basis for the column span of `a` (full column rank assumed).
Matrix orthonormal_basis(const Matrix& a);

Matrix identity(Index n);

/// num * den^{-1}; throws `kind` if den is numerically singular.
Matrix solve_right(const Matrix& num, const Matrix& den, double cond_tol, ErrorKind kind);

}  // namespace opball
