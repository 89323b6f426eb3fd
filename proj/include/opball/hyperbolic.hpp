#pragma once

// The invariant (Caratheodory) metric on the operator ball, its infinitesimal
// form, Th-geodesics, segments and convex combinations, curve length, and
// finite-set diameter diagnostics.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "opball/mobius.hpp"

namespace opball {

/// rho(A, B) = atanh ||M_{-A}(B)||.
double distance(const BallPoint& a, const BallPoint& b, const Tolerances& tol = kDefaultTolerances);

/// Poincare distance on the unit disc, the 1x1 reference for `distance`.
double poincare_scalar(Complex z1, Complex z2);

/// Th D = J tanh|D| for the polar decomposition D = J|D|.
Matrix th_map(const Matrix& d, const Tolerances& tol = kDefaultTolerances);

struct ThInverse {
  Matrix direction;  // unit spectral norm
  double t = 0.0;    // th_map(t * direction) == B
};

/// Inverse of th_map: B = Th(t D) with ||D|| = 1, t = ||atanh|B| ||.
/// Throws ZeroInput for B = 0.
ThInverse th_inverse(const BallPoint& b, const Tolerances& tol = kDefaultTolerances);

/// t -> M_A(Th(t D)), an isometric copy of the real line.
class GeodesicLine {
 public:
  /// Throws InvalidDirection unless | ||direction|| - 1 | <= dir_tol.
  GeodesicLine(BallPoint base, Matrix direction, const Tolerances& tol = kDefaultTolerances);

  const BallPoint& base() const noexcept { return base_; }
  const Matrix& direction() const noexcept { return direction_; }

 private:
  BallPoint base_;
  Matrix direction_;
};

/// Largest |t| * ||D|| accepted by geodesic_point before tanh saturates.
inline constexpr double kMaxGeodesicParameter = 18.0;

BallPoint geodesic_point(const GeodesicLine& line, double t, const Tolerances& tol = kDefaultTolerances);

/// d/dt gamma(t), from the closed form D - g D* g at the base-0 point g = Th(tD)
/// pushed through the differential of M_A.
Matrix geodesic_velocity(const GeodesicLine& line, double t, const Tolerances& tol = kDefaultTolerances);

/// The unique line with gamma(0) = A and gamma(rho(A,B)) = B.
GeodesicLine line_through(const BallPoint& a, const BallPoint& b,
                          const Tolerances& tol = kDefaultTolerances);

/// z = (1-t) x (+) t y: the point of [x, y] with rho(z,x) = t rho(x,y).
BallPoint convex_combination(const BallPoint& x, const BallPoint& y, double t,
                             const Tolerances& tol = kDefaultTolerances);

/// Infinitesimal metric ||(1-AA*)^{-1/2} V (1-A*A)^{-1/2}||.
double alpha_metric(const BallPoint& a, const Matrix& v, const Tolerances& tol = kDefaultTolerances);

using Curve = std::function<BallPoint(double)>;
using CurveDerivative = std::function<Matrix(double)>;

/// Composite Simpson estimate of the integral of alpha(C(t), C'(t)) over a
/// strictly increasing grid (irregular spacing allowed). Without a derivative
/// the velocity is taken by finite differences of `curve` at the grid nodes.
/// Throws GridTooCoarse below three nodes.
double curve_length(std::span<const double> grid, const Curve& curve,
                    const std::optional<CurveDerivative>& derivative = std::nullopt,
                    const Tolerances& tol = kDefaultTolerances);

/// Points with their cached pairwise rho table.
class MetricSample {
 public:
  explicit MetricSample(std::vector<BallPoint> points, const Tolerances& tol = kDefaultTolerances);

  const std::vector<BallPoint>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double at(std::size_t i, std::size_t j) const { return pairwise_(static_cast<Index>(i), static_cast<Index>(j)); }
  const Eigen::MatrixXd& pairwise() const noexcept { return pairwise_; }

  /// Largest violation of rho(i,k) <= rho(i,j) + rho(j,k) over all triples.
  double triangle_violation() const;

 private:
  std::vector<BallPoint> points_;
  Eigen::MatrixXd pairwise_;
};

struct Diameter {
  double value = 0.0;
  std::size_t first = 0;
  std::size_t second = 0;
};

Diameter diameter(const MetricSample& sample);

struct DiametralCheck {
  bool is_diametral = false;
  double radius = 0.0;  // max_j rho(a_index, a_j)
};

DiametralCheck diametral_check(const MetricSample& sample, std::size_t index,
                               const Tolerances& tol = kDefaultTolerances);

/// b_1 = c_1, b_{n+1} = (n/(n+1)) b_n (+) (1/(n+1)) c_{n+1}; returns b_N.
BallPoint barycenter_sequence(std::span<const BallPoint> points,
                              const Tolerances& tol = kDefaultTolerances);

}  // namespace opball
