#include "opball/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opball {

namespace {

// atanh with a series branch near zero for relative accuracy.
double atanh_small(double u) {
  if (u < 1e-8) return u + u * u * u / 3.0;
  return std::atanh(u);
}

}  // namespace

double distance(const BallPoint& a, const BallPoint& b, const Tolerances& tol) {
  // 1x1: closed-form disc distance
  if (a.rows() == 1 && a.cols() == 1 && b.rows() == 1 && b.cols() == 1) {
    return poincare_scalar(a.matrix()(0, 0), b.matrix()(0, 0));
  }
  const double u = spectral_norm(mobius_matrix(-a, b, tol));
  if (!(u < 1.0)) {
    throw Error(ErrorKind::BoundaryProximity, "||M_{-A}(B)|| reached 1");
  }
  return atanh_small(u);
}

double poincare_scalar(Complex z1, Complex z2) {
  if (!(std::abs(z1) < 1.0) || !(std::abs(z2) < 1.0)) {
    throw Error(ErrorKind::BoundaryProximity, "Poincare distance needs points of the open disc");
  }
  const double u = std::abs(z1 - z2) / std::abs(1.0 - std::conj(z1) * z2);
  return atanh_small(u);
}

Matrix th_map(const Matrix& d, const Tolerances& tol) {
  require_valid(d, "Th argument");
  const PolarDecomposition polar = polar_decompose(d, tol.rank_tol);
  if (polar.rank == 0) return Matrix::Zero(d.rows(), d.cols());
  return polar.isometry * psd_apply(polar.modulus, [](double s) { return std::tanh(s); }, tol);
}

ThInverse th_inverse(const BallPoint& b, const Tolerances& tol) {
  const PolarDecomposition polar = polar_decompose(b.matrix(), tol.rank_tol);
  if (polar.rank == 0) throw Error(ErrorKind::ZeroInput, "Th^{-1}(0) has no direction");
  const Matrix c = psd_apply(polar.modulus, [](double s) { return std::atanh(s); }, tol);
  ThInverse out;
  out.t = spectral_norm(c);
  if (!(out.t > 0.0)) throw Error(ErrorKind::ZeroInput, "Th^{-1}(B) vanished");
  out.direction = polar.isometry * c / out.t;
  return out;
}

GeodesicLine::GeodesicLine(BallPoint base, Matrix direction, const Tolerances& tol)
    : base_(std::move(base)), direction_(std::move(direction)) {
  require_valid(direction_, "geodesic direction");
  if (direction_.rows() != base_.rows() || direction_.cols() != base_.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "geodesic direction and base differ in shape");
  }
  const double n = spectral_norm(direction_);
  if (!(std::abs(n - 1.0) <= tol.dir_tol)) {
    std::ostringstream msg;
    msg << "||D|| = " << n << ", expected 1";
    throw Error(ErrorKind::InvalidDirection, msg.str());
  }
}

BallPoint geodesic_point(const GeodesicLine& line, double t, const Tolerances& tol) {
  const double reach = std::abs(t) * spectral_norm(line.direction());
  if (!(reach <= kMaxGeodesicParameter)) {
    std::ostringstream msg;
    msg << "|t| * ||D|| = " << reach << " exceeds " << kMaxGeodesicParameter;
    throw Error(ErrorKind::ParameterOverflow, msg.str());
  }
  const BallPoint at_origin(th_map(t * line.direction(), tol), tol.boundary_tol);
  return mobius_apply(line.base(), at_origin, tol);
}

Matrix geodesic_velocity(const GeodesicLine& line, double t, const Tolerances& tol) {
  const Matrix& d = line.direction();
  const BallPoint g(th_map(t * d, tol), tol.boundary_tol);
  const Matrix v0 = d - g.matrix() * d.adjoint() * g.matrix();
  return mobius_differential(line.base(), g, v0, tol);
}

GeodesicLine line_through(const BallPoint& a, const BallPoint& b, const Tolerances& tol) {
  const BallPoint q(mobius_matrix(-a, b, tol), tol.boundary_tol);
  if (q.norm() <= tol.line_tol) {
    throw Error(ErrorKind::CoincidentPoints, "no unique line through coincident points");
  }
  return GeodesicLine(a, th_inverse(q, tol).direction, tol);
}

BallPoint convex_combination(const BallPoint& x, const BallPoint& y, double t, const Tolerances& tol) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "convex_combination needs t in [0, 1]");
  }
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "convex_combination of differently shaped points");
  }
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  const BallPoint q(mobius_matrix(-x, y, tol), tol.boundary_tol);
  if (q.norm() <= tol.line_tol) return x;
  const ThInverse inv = th_inverse(q, tol);
  const BallPoint step(th_map((t * inv.t) * inv.direction, tol), tol.boundary_tol);
  return mobius_apply(x, step, tol);
}

double alpha_metric(const BallPoint& a, const Matrix& v, const Tolerances& tol) {
  if (v.rows() != a.rows() || v.cols() != a.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "tangent vector and point differ in shape");
  }
  return spectral_norm(left_defect_power(a.matrix(), -0.5, tol) * v *
                       right_defect_power(a.matrix(), -0.5, tol));
}

namespace {

// Composite Simpson for irregularly spaced nodes; an odd interval count gets
// the three-point correction on the last interval.
double simpson_irregular(std::span<const double> x, const std::vector<double>& f) {
  const std::size_t intervals = x.size() - 1;
  double total = 0.0;
  std::size_t i = 0;
  for (; i + 2 <= intervals; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    const double hs = h0 + h1;
    total += hs / 6.0 *
             ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]);
  }
  if (i < intervals) {
    const std::size_t n = intervals;
    const double h0 = x[n - 1] - x[n - 2];
    const double h1 = x[n] - x[n - 1];
    total += f[n] * (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1)) +
             f[n - 1] * (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0) -
             f[n - 2] * h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
  }
  return total;
}

}  // namespace

double curve_length(std::span<const double> grid, const Curve& curve,
                    const std::optional<CurveDerivative>& derivative, const Tolerances& tol) {
  if (grid.size() < 3) {
    throw Error(ErrorKind::GridTooCoarse, "curve_length needs at least three nodes");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "curve_length grid must be strictly increasing");
    }
  }
  const double span = grid.back() - grid.front();
  const double h = 1e-5 * span;
  const double t_lo = grid.front();
  const double t_hi = grid.back();

  auto velocity = [&](double t) -> Matrix {
    if (derivative) return (*derivative)(t);
    // central where the stencil stays inside [t_lo, t_hi], one-sided otherwise
    if (t - h >= t_lo && t + h <= t_hi) {
      return (curve(t + h).matrix() - curve(t - h).matrix()) / (2.0 * h);
    }
    const double s = (t - h < t_lo) ? 1.0 : -1.0;
    const Matrix f0 = curve(t).matrix();
    const Matrix f1 = curve(t + s * h).matrix();
    const Matrix f2 = curve(t + 2.0 * s * h).matrix();
    return s * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
  };

  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    integrand[i] = alpha_metric(curve(grid[i]), velocity(grid[i]), tol);
  }
  return simpson_irregular(grid, integrand);
}

MetricSample::MetricSample(std::vector<BallPoint> points, const Tolerances& tol)
    : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorKind::InvalidArgument, "metric sample is empty");
  const Index n = static_cast<Index>(points_.size());
  pairwise_ = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = distance(points_[i], points_[j], tol);
      pairwise_(i, j) = d;
      pairwise_(j, i) = d;
    }
  }
}

double MetricSample::triangle_violation() const {
  const Index n = pairwise_.rows();
  double worst = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        worst = std::max(worst, pairwise_(i, k) - pairwise_(i, j) - pairwise_(j, k));
  return worst;
}

Diameter diameter(const MetricSample& sample) {
  Diameter out;
  const Index n = sample.pairwise().rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (sample.pairwise()(i, j) > out.value) {
        out.value = sample.pairwise()(i, j);
        out.first = static_cast<std::size_t>(i);
        out.second = static_cast<std::size_t>(j);
      }
    }
  }
  return out;
}

DiametralCheck diametral_check(const MetricSample& sample, std::size_t index, const Tolerances& tol) {
  if (index >= sample.size()) {
    throw Error(ErrorKind::InvalidArgument, "diametral_check index out of range");
  }
  DiametralCheck out;
  out.radius = sample.pairwise().row(static_cast<Index>(index)).maxCoeff();
  out.is_diametral = out.radius >= diameter(sample).value - tol.diam_tol;
  return out;
}

BallPoint barycenter_sequence(std::span<const BallPoint> points, const Tolerances& tol) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "barycenter of an empty list");
  BallPoint b = points.front();
  for (std::size_t n = 1; n < points.size(); ++n) {
    b = convex_combination(b, points[n], 1.0 / static_cast<double>(n + 1), tol);
  }
  return b;
}

}  // namespace opball
