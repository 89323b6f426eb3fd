#include "opball/pontryagin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opball {

PontryaginSignature::PontryaginSignature(Index n_plus, Index n_minus)
    : n_plus_(n_plus), n_minus_(n_minus) {
  if (n_plus < 1 || n_minus < 1) {
    std::ostringstream msg;
    msg << "signature (" << n_plus << "," << n_minus << ") needs both parts >= 1";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
}

namespace {

void require_square(const PontryaginSignature& sig, const Matrix& t, const char* what) {
  if (t.rows() != sig.dim() || t.cols() != sig.dim()) {
    std::ostringstream msg;
    msg << what << " is " << t.rows() << "x" << t.cols() << ", expected " << sig.dim() << "x"
        << sig.dim();
    throw Error(ErrorKind::ShapeMismatch, msg.str());
  }
}

void require_ball_shape(const PontryaginSignature& sig, const BallPoint& a) {
  if (a.rows() != sig.n_plus() || a.cols() != sig.n_minus()) {
    throw Error(ErrorKind::ShapeMismatch, "ball point does not match the signature");
  }
}

double relative_scale(const Matrix& t) { return std::max(1.0, std::pow(spectral_norm(t), 2)); }

}  // namespace

double eta_value(const PontryaginSignature& sig, const Vector& x) {
  if (x.size() != sig.dim()) {
    std::ostringstream msg;
    msg << "vector of length " << x.size() << ", expected " << sig.dim();
    throw Error(ErrorKind::ShapeMismatch, msg.str());
  }
  return x.head(sig.n_plus()).squaredNorm() - x.tail(sig.n_minus()).squaredNorm();
}

JUnitaryCheck is_J_unitary(const PontryaginSignature& sig, const Matrix& t, double tol) {
  require_square(sig, t, "operator");
  const Matrix j = sig.J();
  JUnitaryCheck out;
  out.defect = spectral_norm(t.adjoint() * j * t - j);
  out.ok = out.defect <= tol;
  return out;
}

Matrix graph_subspace(const PontryaginSignature& sig, const BallPoint& a) {
  require_ball_shape(sig, a);
  Matrix basis(sig.dim(), sig.n_minus());
  basis.topRows(sig.n_plus()) = a.matrix();
  basis.bottomRows(sig.n_minus()) = Matrix::Identity(sig.n_minus(), sig.n_minus());
  return basis;
}

BallPoint subspace_to_ball(const PontryaginSignature& sig, const Matrix& basis, const Tolerances& tol) {
  if (basis.rows() != sig.dim() || basis.cols() != sig.n_minus()) {
    std::ostringstream msg;
    msg << "basis is " << basis.rows() << "x" << basis.cols() << ", expected " << sig.dim() << "x"
        << sig.n_minus();
    throw Error(ErrorKind::ShapeMismatch, msg.str());
  }
  require_valid(basis, "subspace basis");
  const Matrix gram = basis.adjoint() * sig.J() * basis;
  const HermitianEig eig = hermitian_eig(gram, tol);
  const double top = eig.values.maxCoeff();
  if (!(top < -tol.herm_tol * std::max(1.0, eig.values.cwiseAbs().maxCoeff()))) {
    std::ostringstream msg;
    msg << "eta is not negative definite on the span (largest Gram eigenvalue " << top << ")";
    throw Error(ErrorKind::NotNegative, msg.str());
  }
  const Matrix a = solve_right(basis.topRows(sig.n_plus()), basis.bottomRows(sig.n_minus()),
                               tol.cond_tol, ErrorKind::DegenerateGraph);
  return BallPoint(a, tol.boundary_tol);
}

double negativeness_degree(const PontryaginSignature& sig, const BallPoint& a) {
  require_ball_shape(sig, a);
  const double b2 = a.norm() * a.norm();
  return (1.0 - b2) / (1.0 + b2);
}

BallAutomorphism induced_automorphism(const PontryaginSignature& sig, const Matrix& t,
                                      const Tolerances& tol) {
  require_square(sig, t, "operator");
  require_valid(t, "operator");
  const JUnitaryCheck check = is_J_unitary(sig, t, tol.rep_tol * relative_scale(t));
  if (!check.ok) {
    std::ostringstream msg;
    msg << "||T*JT - J|| = " << check.defect << " exceeds rep_tol";
    throw Error(ErrorKind::NotEtaPreserving, msg.str());
  }
  Tolerances relaxed = tol;
  relaxed.aut_tol = std::max(tol.aut_tol, tol.rep_tol);
  return BallAutomorphism::from_block(t, sig.n_plus(), sig.n_minus(), relaxed);
}

Matrix unitarizer_matrix(const PontryaginSignature& sig, const BallPoint& d, const Tolerances& tol) {
  require_ball_shape(sig, d);
  const Matrix& dm = d.matrix();
  const Matrix left = left_defect_power(dm, -0.5, tol);
  const Matrix right = right_defect_power(dm, -0.5, tol);
  Matrix u(sig.dim(), sig.dim());
  u.topLeftCorner(sig.n_plus(), sig.n_plus()) = left;
  u.topRightCorner(sig.n_plus(), sig.n_minus()) = -dm * right;
  u.bottomLeftCorner(sig.n_minus(), sig.n_plus()) = -dm.adjoint() * left;
  u.bottomRightCorner(sig.n_minus(), sig.n_minus()) = right;
  return u;
}

// ---------------------------------------------------------------------------

Representation::Representation(PontryaginSignature sig, GroupTable table, std::vector<Matrix> images,
                               bool eta_preserving)
    : sig_(std::move(sig)), table_(std::move(table)), images_(std::move(images)),
      eta_preserving_(eta_preserving) {}

Representation Representation::create(const PontryaginSignature& sig, GroupTable table,
                                      std::vector<Matrix> images, bool eta_preserving,
                                      const Tolerances& tol) {
  const std::size_t n = images.size();
  if (n == 0) throw Error(ErrorKind::InvalidRepresentation, "representation has no images");
  bool table_ok = table.size() == n;
  for (const auto& row : table) {
    table_ok = table_ok && row.size() == n &&
               std::all_of(row.begin(), row.end(), [n](std::size_t k) { return k < n; });
  }
  if (!table_ok) {
    throw Error(ErrorKind::InvalidRepresentation, "multiplication table does not match the image count");
  }
  for (const auto& m : images) {
    require_square(sig, m, "representation image");
    require_valid(m, "representation image");
  }

  Representation rep(sig, std::move(table), std::move(images), eta_preserving);
  for (const auto& m : rep.images_) rep.bound_ = std::max(rep.bound_, spectral_norm(m));

  // identity: the row of the table that acts trivially
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    bool is_identity = true;
    for (std::size_t g = 0; g < n && is_identity; ++g) {
      is_identity = rep.table_[e][g] == g && rep.table_[g][e] == g;
    }
    if (is_identity) {
      rep.identity_ = e;
      found = true;
    }
  }
  if (!found) throw Error(ErrorKind::InvalidRepresentation, "table has no identity element");
  const Matrix id = Matrix::Identity(sig.dim(), sig.dim());
  const double id_defect = spectral_norm(rep.images_[rep.identity_] - id);
  if (!(id_defect <= tol.rep_tol * std::max(1.0, rep.bound_))) {
    std::ostringstream msg;
    msg << "identity element maps to a matrix at distance " << id_defect << " from I";
    throw Error(ErrorKind::InvalidRepresentation, msg.str());
  }

  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      const Matrix& a = rep.images_[g];
      const Matrix& b = rep.images_[h];
      const double defect = spectral_norm(a * b - rep.images_[rep.table_[g][h]]);
      const double scale = std::max(1.0, spectral_norm(a) * spectral_norm(b));
      if (!(defect <= tol.rep_tol * scale)) {
        std::ostringstream msg;
        msg << "pi(" << g << ")pi(" << h << ") differs from pi(" << rep.table_[g][h] << ") by "
            << defect;
        throw Error(ErrorKind::InvalidRepresentation, msg.str());
      }
    }
  }

  if (eta_preserving) {
    for (std::size_t g = 0; g < n; ++g) {
      const Matrix& t = rep.images_[g];
      const JUnitaryCheck check = is_J_unitary(sig, t, tol.rep_tol * relative_scale(t));
      if (!check.ok) {
        std::ostringstream msg;
        msg << "image " << g << " has ||T*JT - J|| = " << check.defect;
        throw Error(ErrorKind::NotEtaPreserving, msg.str());
      }
    }
  }
  return rep;
}

double Representation::homomorphism_defect() const {
  double worst = 0.0;
  for (std::size_t g = 0; g < images_.size(); ++g)
    for (std::size_t h = 0; h < images_.size(); ++h)
      worst = std::max(worst, spectral_norm(images_[g] * images_[h] - images_[table_[g][h]]));
  return worst;
}

AutomorphismGroup Representation::induced_group(const Tolerances& tol) const {
  std::vector<BallAutomorphism> elements;
  elements.reserve(images_.size());
  for (const auto& m : images_) elements.push_back(induced_automorphism(sig_, m, tol));
  return AutomorphismGroup(std::move(elements), table_);
}

// ---------------------------------------------------------------------------

UnitarizeResult unitarize(const Representation& rep, const FixedPointParams& params, const Tolerances& tol) {
  const PontryaginSignature& sig = rep.signature();
  const AutomorphismGroup group = rep.induced_group(tol);

  FixedPointResult solved{BallPoint::zero(sig.n_plus(), sig.n_minus()), 0.0, 0, false, {}};
  try {
    solved = find_fixed_point(group, BallPoint::zero(sig.n_plus(), sig.n_minus()), params, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotElliptic && e.kind() != ErrorKind::MaxIterations) throw;
    throw Error(ErrorKind::FixedPointFailed, std::string(e.what()));
  }
  if (!solved.converged) {
    std::ostringstream msg;
    msg << "displacement " << solved.displacement << " after " << solved.iterations
        << " iterations exceeds fp_tol " << params.fp_tol;
    throw Error(ErrorKind::FixedPointFailed, msg.str());
  }

  const Matrix j = sig.J();
  const Matrix u = unitarizer_matrix(sig, solved.point, tol);
  const Matrix u_inv = j * u.adjoint() * j;
  const Matrix id = Matrix::Identity(sig.dim(), sig.dim());
  std::vector<Matrix> taus;
  taus.reserve(rep.group_order());
  for (std::size_t g = 0; g < rep.group_order(); ++g) {
    taus.push_back(u * rep.images()[g] * u_inv);
    const double defect = spectral_norm(taus.back().adjoint() * taus.back() - id);
    if (!(defect <= tol.unit_tol)) {
      std::ostringstream msg;
      msg << "unitarized image " << g << " has ||tau*tau - I|| = " << defect;
      throw Error(ErrorKind::FixedPointFailed, msg.str());
    }
  }
  Representation unitary = Representation::create(sig, rep.table(), std::move(taus), true, tol);
  return UnitarizeResult{u, u_inv, std::move(unitary), solved.point, std::move(solved)};
}

DualPair dual_pair(const Representation& rep, const FixedPointParams& params, const Tolerances& tol) {
  const PontryaginSignature& sig = rep.signature();
  const UnitarizeResult unit = unitarize(rep, params, tol);
  const Matrix& t = unit.similarity_inverse;
  const Matrix r = t.adjoint() * sig.J() * t;
  const HermitianEig eig = hermitian_eig(r, tol);

  std::vector<Index> positive;
  std::vector<Index> negative;
  for (Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values(i);
    if (std::abs(lambda) < tol.split_tol) {
      std::ostringstream msg;
      msg << "R = T*JT has eigenvalue " << lambda << " within split_tol of 0";
      throw Error(ErrorKind::DegenerateSplit, msg.str());
    }
    (lambda > 0.0 ? positive : negative).push_back(i);
  }
  if (static_cast<Index>(negative.size()) != sig.n_minus()) {
    std::ostringstream msg;
    msg << "R has " << negative.size() << " negative eigenvalues, expected " << sig.n_minus();
    throw Error(ErrorKind::DegenerateSplit, msg.str());
  }
  DualPair pair;
  pair.positive_basis = t * eig.vectors(Eigen::all, positive);
  pair.negative_basis = t * eig.vectors(Eigen::all, negative);
  return pair;
}

Matrix dual_pair_scalar_product(const PontryaginSignature& sig, const DualPair& pair) {
  const Index p = pair.positive_basis.cols();
  const Index q = pair.negative_basis.cols();
  if (pair.positive_basis.rows() != sig.dim() || pair.negative_basis.rows() != sig.dim() ||
      p + q != sig.dim()) {
    throw Error(ErrorKind::ShapeMismatch, "dual pair bases do not fill the space");
  }
  const Matrix j = sig.J();
  Matrix s(sig.dim(), sig.dim());
  s << pair.positive_basis, pair.negative_basis;
  Matrix middle = Matrix::Zero(sig.dim(), sig.dim());
  middle.topLeftCorner(p, p) = pair.positive_basis.adjoint() * j * pair.positive_basis;
  middle.bottomRightCorner(q, q) = -pair.negative_basis.adjoint() * j * pair.negative_basis;
  Eigen::FullPivLU<Matrix> lu(s);
  if (!lu.isInvertible()) throw Error(ErrorKind::DegenerateSplit, "dual pair bases are dependent");
  const Matrix s_inv = lu.inverse();
  return s_inv.adjoint() * middle * s_inv;
}

}  // namespace opball
