#include "opball/mobius.hpp"

#include <cmath>
#include <sstream>

namespace opball {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    throw Error(ErrorKind::ShapeMismatch, msg.str());
  }
}

}  // namespace

BallPoint::BallPoint(Matrix m, double boundary_tol) : matrix_(std::move(m)) {
  require_valid(matrix_, "ball point");
  const double norm = spectral_norm(matrix_);
  margin_ = 1.0 - norm;
  if (!(margin_ > boundary_tol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "||A|| = " << norm << " is within " << boundary_tol << " of the unit sphere";
    throw Error(ErrorKind::BoundaryProximity, msg.str());
  }
}

BallPoint BallPoint::zero(Index rows, Index cols) { return BallPoint(Matrix::Zero(rows, cols)); }

BallPoint BallPoint::operator-() const {
  BallPoint out = *this;
  out.matrix_ = -matrix_;
  return out;
}

Matrix signature_matrix(Index n_h, Index n_k) {
  Matrix j = Matrix::Identity(n_h + n_k, n_h + n_k);
  j.bottomRightCorner(n_k, n_k) *= -1.0;
  return j;
}

Matrix left_defect_power(const Matrix& a, double p, const Tolerances& tol) {
  const Matrix gram = a * a.adjoint();
  return psd_apply(gram, [p](double t) { return std::pow(1.0 - t, p); }, tol);
}

Matrix right_defect_power(const Matrix& a, double p, const Tolerances& tol) {
  const Matrix gram = a.adjoint() * a;
  return psd_apply(gram, [p](double t) { return std::pow(1.0 - t, p); }, tol);
}

BallAutomorphism BallAutomorphism::from_block(const Matrix& block, Index n_h, Index n_k,
                                              const Tolerances& tol) {
  if (n_h < 1 || n_k < 1 || block.rows() != n_h + n_k || block.cols() != n_h + n_k) {
    std::ostringstream msg;
    msg << "block is " << block.rows() << "x" << block.cols() << ", signature (" << n_h << ","
        << n_k << ")";
    throw Error(ErrorKind::ShapeMismatch, msg.str());
  }
  require_valid(block, "automorphism block");
  const Matrix j = signature_matrix(n_h, n_k);
  const Matrix form = block.adjoint() * j * block;
  // <T*JT, J>_F / <J, J>_F
  const double s = (j * form).trace().real() / static_cast<double>(n_h + n_k);
  if (!(s > 0.0)) {
    std::ostringstream msg;
    msg << "T*JT is not a positive multiple of J (Rayleigh estimate " << s << ")";
    throw Error(ErrorKind::NotEtaPreserving, msg.str());
  }
  BallAutomorphism out(block / std::sqrt(s), n_h, n_k);
  const double defect = out.eta_defect();
  const double scale = std::max(1.0, std::pow(spectral_norm(out.block_), 2));
  if (!(defect <= tol.aut_tol * scale)) {
    std::ostringstream msg;
    msg << "||T*JT - J|| = " << defect << " exceeds aut_tol * " << scale;
    throw Error(ErrorKind::NotEtaPreserving, msg.str());
  }
  return out;
}

BallAutomorphism BallAutomorphism::identity(Index n_h, Index n_k) {
  return BallAutomorphism(Matrix::Identity(n_h + n_k, n_h + n_k), n_h, n_k);
}

double BallAutomorphism::eta_defect() const {
  const Matrix j = signature_matrix(n_h_, n_k_);
  return spectral_norm(block_.adjoint() * j * block_ - j);
}

BallAutomorphism BallAutomorphism::inverse(const Tolerances& tol) const {
  Eigen::FullPivLU<Matrix> lu(block_);
  if (!lu.isInvertible()) throw Error(ErrorKind::NotEtaPreserving, "block is singular");
  return from_block(lu.inverse(), n_h_, n_k_, tol);
}

Matrix mobius_matrix(const BallPoint& a, const BallPoint& x, const Tolerances& tol) {
  require_same_shape(a.matrix(), x.matrix(), "mobius_apply");
  const Matrix& am = a.matrix();
  const Index n_k = am.cols();
  const Matrix resolvent = Matrix::Identity(n_k, n_k) + am.adjoint() * x.matrix();
  const Matrix core = solve_right(am + x.matrix(), resolvent, tol.cond_tol,
                                  ErrorKind::SingularResolvent);
  return left_defect_power(am, -0.5, tol) * core * right_defect_power(am, 0.5, tol);
}

BallPoint mobius_apply(const BallPoint& a, const BallPoint& x, const Tolerances& tol) {
  return BallPoint(mobius_matrix(a, x, tol), tol.boundary_tol);
}

Matrix mobius_differential(const BallPoint& b, const BallPoint& a, const Matrix& v,
                           const Tolerances& tol) {
  require_same_shape(b.matrix(), a.matrix(), "mobius_differential");
  require_same_shape(b.matrix(), v, "mobius_differential direction");
  const Matrix& bm = b.matrix();
  const Matrix& am = a.matrix();
  const Matrix left_res = Matrix::Identity(am.rows(), am.rows()) + am * bm.adjoint();
  const Matrix right_res = Matrix::Identity(am.cols(), am.cols()) + bm.adjoint() * am;
  Eigen::FullPivLU<Matrix> left_lu(left_res);
  if (!(left_lu.rcond() > tol.cond_tol)) {
    throw Error(ErrorKind::SingularResolvent, "1 + AB* is numerically singular");
  }
  const Matrix middle =
      solve_right(left_lu.solve(v), right_res, tol.cond_tol, ErrorKind::SingularResolvent);
  return left_defect_power(bm, 0.5, tol) * middle * right_defect_power(bm, 0.5, tol);
}

BallAutomorphism mobius_as_block(const BallPoint& a, const Tolerances& tol) {
  const Matrix& am = a.matrix();
  const Index n_h = am.rows();
  const Index n_k = am.cols();
  const Matrix left = left_defect_power(am, -0.5, tol);
  const Matrix right = right_defect_power(am, -0.5, tol);
  Matrix t(n_h + n_k, n_h + n_k);
  t.topLeftCorner(n_h, n_h) = left;
  t.topRightCorner(n_h, n_k) = left * am;
  t.bottomLeftCorner(n_k, n_h) = right * am.adjoint();
  t.bottomRightCorner(n_k, n_k) = right;
  return BallAutomorphism::from_block(t, n_h, n_k, tol);
}

BallPoint automorphism_apply(const BallAutomorphism& t, const BallPoint& a, const Tolerances& tol) {
  if (a.rows() != t.n_h() || a.cols() != t.n_k()) {
    throw Error(ErrorKind::ShapeMismatch, "automorphism and point shapes differ");
  }
  const Matrix num = t.t11() * a.matrix() + t.t12();
  const Matrix den = t.t21() * a.matrix() + t.t22();
  return BallPoint(solve_right(num, den, tol.cond_tol, ErrorKind::SingularDenominator),
                   tol.boundary_tol);
}

BallAutomorphism automorphism_compose(const BallAutomorphism& t1, const BallAutomorphism& t2,
                                      const Tolerances& tol) {
  if (t1.n_h() != t2.n_h() || t1.n_k() != t2.n_k()) {
    throw Error(ErrorKind::ShapeMismatch, "automorphisms act on different balls");
  }
  return BallAutomorphism::from_block(t1.block() * t2.block(), t1.n_h(), t1.n_k(), tol);
}

}  // namespace opball
