#include "opball/opcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opball {

void require_valid(const Matrix& a, const char* what) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw Error(ErrorKind::InvalidMatrix, std::string(what) + " is empty");
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::InvalidMatrix, std::string(what) + " has a non-finite entry");
  }
}

RealVector singular_values(const Matrix& a) {
  if (a.size() == 0) return RealVector();
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.size() == 1) return std::abs(a(0, 0));
  return singular_values(a)(0);
}

namespace {

Matrix checked_symmetrize(const Matrix& s, const Tolerances& tol) {
  require_valid(s, "Hermitian input");
  if (s.rows() != s.cols()) {
    std::ostringstream msg;
    msg << "expected a square matrix, got " << s.rows() << "x" << s.cols();
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  const Matrix adj = s.adjoint();
  const double defect = (s - adj).norm();
  if (defect > tol.herm_tol * (1.0 + s.norm())) {
    std::ostringstream msg;
    msg << "||S - S*|| = " << defect;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  return 0.5 * (s + adj);
}

Matrix apply_spectrum(const HermitianEig& eig, const RealVector& fvals) {
  return eig.vectors * fvals.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace

HermitianEig hermitian_eig(const Matrix& s, const Tolerances& tol) {
  const Matrix sym = checked_symmetrize(s, tol);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NotHermitian, "eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix hermitian_apply(const Matrix& s, const std::function<double(double)>& f,
                       const Tolerances& tol) {
  const HermitianEig eig = hermitian_eig(s, tol);
  RealVector fvals(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    fvals(i) = f(eig.values(i));
    if (!std::isfinite(fvals(i))) {
      std::ostringstream msg;
      msg << "function undefined at eigenvalue " << eig.values(i);
      throw Error(ErrorKind::DomainError, msg.str());
    }
  }
  return apply_spectrum(eig, fvals);
}

Matrix psd_apply(const Matrix& s, const std::function<double(double)>& f, const Tolerances& tol) {
  const HermitianEig eig = hermitian_eig(s, tol);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  RealVector fvals(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    double lambda = eig.values(i);
    if (lambda < 0.0) {
      if (lambda < -tol.psd_tol * scale) {
        std::ostringstream msg;
        msg << "eigenvalue " << lambda << " below -psd_tol";
        throw Error(ErrorKind::NotPSD, msg.str());
      }
      lambda = 0.0;
    }
    fvals(i) = f(lambda);
    if (!std::isfinite(fvals(i))) {
      std::ostringstream msg;
      msg << "function undefined at eigenvalue " << lambda;
      throw Error(ErrorKind::DomainError, msg.str());
    }
  }
  return apply_spectrum(eig, fvals);
}

PolarDecomposition polar_decompose(const Matrix& d, double rank_tol) {
  require_valid(d, "polar input");
  const Index n = d.cols();
  Eigen::JacobiSVD<Matrix> svd(d, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();
  PolarDecomposition out;
  out.isometry = Matrix::Zero(d.rows(), n);
  out.modulus = Matrix::Zero(n, n);
  if (sigma.size() == 0 || sigma(0) == 0.0) return out;

  const double cutoff = rank_tol * sigma(0);
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  const Matrix u = svd.matrixU().leftCols(rank);
  const Matrix v = svd.matrixV().leftCols(rank);
  out.rank = rank;
  out.isometry = u * v.adjoint();
  out.modulus = v * sigma.head(rank).cast<Complex>().asDiagonal() * v.adjoint();
  return out;
}

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Matrix orthonormal_basis(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
}

double max_principal_angle(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "principal angles need equally shaped bases");
  }
  const Matrix qa = orthonormal_basis(a);
  const Matrix qb = orthonormal_basis(b);
  // sin of the largest angle; accurate for small angles, unlike acos of cosines.
  const Matrix residual = qb - qa * (qa.adjoint() * qb);
  const double s = std::min(1.0, spectral_norm(residual));
  return std::asin(s);
}

Matrix solve_right(const Matrix& num, const Matrix& den, double cond_tol, ErrorKind kind) {
  if (den.rows() != den.cols() || num.cols() != den.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "solve_right: incompatible shapes");
  }
  Eigen::FullPivLU<Matrix> lu(den.adjoint());
  if (!(lu.rcond() > cond_tol)) {
    std::ostringstream msg;
    msg << "reciprocal condition " << lu.rcond() << " below " << cond_tol;
    throw Error(kind, msg.str());
  }
  return lu.solve(num.adjoint()).adjoint();
}

}  // namespace opball
