#include <doctest.h>

#include <cmath>
#include <numeric>

#include "opball/hyperbolic.hpp"
#include "opball/sampling.hpp"
#include "oracles.hpp"

using namespace opball;

namespace {

BallPoint scalar_point(Complex z) { return BallPoint(Matrix::Constant(1, 1, z)); }
Complex value(const BallPoint& p) { return p.matrix()(0, 0); }

template <class F>
void require_error(ErrorKind kind, F&& f) {
  try {
    f();
    FAIL("expected " << error_name(kind));
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
  }
}

}  // namespace

TEST_CASE("distance examples") {
  Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    const BallPoint b = random_ball_point(rng, 4, 2);
    CHECK(distance(BallPoint::zero(4, 2), b) == doctest::Approx(std::atanh(b.norm())).epsilon(1e-13));
    CHECK(distance(b, b) == 0.0);
  }
  CHECK(std::abs(distance(scalar_point(0.5), scalar_point(-0.5)) - std::log(3.0)) < 1e-15);
}

TEST_CASE("distance is symmetric and satisfies the triangle inequality") {
  Rng rng(32);
  std::vector<BallPoint> pts;
  for (int k = 0; k < 12; ++k) pts.push_back(random_ball_point(rng, 3, 3, 0.9));
  const MetricSample sample(pts);
  CHECK(sample.triangle_violation() <= 1e-9);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(sample.at(i, i) == 0.0);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      CHECK(distance(pts[i], pts[j]) == doctest::Approx(distance(pts[j], pts[i])).epsilon(1e-10));
    }
  }
}

TEST_CASE("distance of nearly equal points keeps relative accuracy") {
  const BallPoint a = scalar_point(0.3);
  const BallPoint b = scalar_point(0.3 + 1e-12);
  const double expected = 1e-12 / (1.0 - 0.09);
  CHECK(distance(a, b) == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("poincare_scalar examples") {
  CHECK(poincare_scalar(Complex(0.3, 0.2), Complex(0.3, 0.2)) == 0.0);
  CHECK(poincare_scalar(0.0, Complex(0.6, 0.0)) == doctest::Approx(std::atanh(0.6)));
  CHECK(std::abs(poincare_scalar(0.5, -0.5) - std::log(3.0)) < 1e-15);
  require_error(ErrorKind::BoundaryProximity, [] { poincare_scalar(1.0, 0.0); });
}

TEST_CASE("th_map examples") {
  CHECK(th_map(Matrix::Zero(2, 3)).norm() == 0.0);
  CHECK(std::abs(th_map(Matrix::Constant(1, 1, 1.0))(0, 0) - 0.7615941559557649) < 1e-15);
  Rng rng(33);
  const Matrix a = random_matrix(rng, 3, 3);
  const Matrix h = (a + a.adjoint()) / 2.0;
  const Matrix tanh_h = hermitian_apply(h, [](double t) { return std::tanh(t); });
  CHECK((th_map(h) - tanh_h).norm() < 1e-12);
  for (int k = 0; k < 20; ++k) {
    const Matrix d = random_matrix(rng, 4, 2);
    CHECK(spectral_norm(th_map(d)) == doctest::Approx(std::tanh(spectral_norm(d))).epsilon(1e-12));
  }
}

TEST_CASE("th_map agrees with the odd power series") {
  Rng rng(34);
  for (int k = 0; k < 30; ++k) {
    const Matrix u = random_unit_direction(rng, 4, 3);
    const double r = 0.05 + 0.95 * k / 29.0;  // up to ||D|| = 1: 25 terms suffice there
    CHECK(spectral_norm(th_map(r * u) - oracle::th_series(r * u, 25)) < 1e-9);
  }
  for (int k = 0; k < 10; ++k) {
    // near the radius of convergence pi/2 the series needs far more terms
    const Matrix d = 1.5 * random_unit_direction(rng, 3, 2);
    CHECK(spectral_norm(th_map(d) - oracle::th_series(d, 600)) < 1e-9);
  }
}

TEST_CASE("th_inverse examples and round trip") {
  const ThInverse half = th_inverse(scalar_point(0.5));
  CHECK(half.t == doctest::Approx(std::atanh(0.5)).epsilon(1e-14));
  CHECK(std::abs(half.direction(0, 0) - 1.0) < 1e-14);

  Matrix iso = Matrix::Zero(3, 2);
  iso(1, 0) = 1.0;
  const ThInverse r1 = th_inverse(BallPoint(std::tanh(1.0) * iso));
  CHECK(r1.t == doctest::Approx(1.0).epsilon(1e-13));
  CHECK((r1.direction - iso).norm() < 1e-12);

  Rng rng(35);
  for (int k = 0; k < 30; ++k) {
    const Matrix d = random_unit_direction(rng, 4, 3);
    const double s = 0.1 + 3.0 * k / 29.0;
    const ThInverse inv = th_inverse(BallPoint(th_map(s * d)));
    CHECK(inv.t == doctest::Approx(s).epsilon(1e-9));
    CHECK(spectral_norm(inv.direction - d) < 1e-8);
    CHECK(spectral_norm(inv.direction) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spectral_norm(th_map(inv.t * inv.direction) - th_map(s * d)) < 1e-9);
  }
  require_error(ErrorKind::ZeroInput, [] { th_inverse(BallPoint::zero(2, 2)); });
}

TEST_CASE("geodesic lines") {
  const GeodesicLine scalar(BallPoint::zero(1, 1), Matrix::Constant(1, 1, 1.0));
  CHECK(std::abs(value(geodesic_point(scalar, std::log(3.0) / 2.0)) - 0.5) < 1e-15);

  Rng rng(36);
  for (int k = 0; k < 20; ++k) {
    const BallPoint a = random_ball_point(rng, 4, 3, 0.8);
    const GeodesicLine line(a, random_unit_direction(rng, 4, 3));
    CHECK(spectral_norm(geodesic_point(line, 0.0).matrix() - a.matrix()) < 1e-15);
    CHECK(distance(geodesic_point(line, 1.0), geodesic_point(line, -2.0)) == doctest::Approx(3.0).epsilon(1e-9));
  }
  require_error(ErrorKind::InvalidDirection, [] { GeodesicLine(BallPoint::zero(1, 1), Matrix::Constant(1, 1, 0.5)); });
  require_error(ErrorKind::ShapeMismatch, [] { GeodesicLine(BallPoint::zero(2, 1), Matrix::Identity(1, 1)); });
  require_error(ErrorKind::ParameterOverflow, [&] { geodesic_point(scalar, 18.5); });
  CHECK_NOTHROW(geodesic_point(scalar, 9.0));
  // tanh(12) is inside boundary_tol of the sphere
  require_error(ErrorKind::BoundaryProximity, [&] { geodesic_point(scalar, 12.0); });
}

TEST_CASE("geodesic velocity is unit speed and matches differences") {
  Rng rng(37);
  for (int k = 0; k < 20; ++k) {
    const GeodesicLine line(random_ball_point(rng, 3, 2, 0.8), random_unit_direction(rng, 3, 2));
    for (double t : {-2.0, -0.3, 0.0, 0.7, 2.5}) {
      const Matrix v = geodesic_velocity(line, t);
      CHECK(std::abs(alpha_metric(geodesic_point(line, t), v) - 1.0) < 1e-7);
      const Matrix fd = oracle::richardson_derivative([&](double s) { return geodesic_point(line, s).matrix(); }, t, 1e-3);
      CHECK(spectral_norm(fd - v) < 1e-6);
    }
  }
}

TEST_CASE("line_through") {
  const GeodesicLine scalar = line_through(BallPoint::zero(1, 1), scalar_point(0.5));
  CHECK(std::abs(scalar.direction()(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(value(geodesic_point(scalar, std::atanh(0.5))) - 0.5) < 1e-14);

  Rng rng(38);
  for (int k = 0; k < 30; ++k) {
    const BallPoint a = random_ball_point(rng, 6, 3, 0.85);
    const BallPoint b = random_ball_point(rng, 6, 3, 0.85);
    const GeodesicLine line = line_through(a, b);
    CHECK(spectral_norm(geodesic_point(line, 0.0).matrix() - a.matrix()) < 1e-12);
    CHECK(distance(geodesic_point(line, distance(a, b)), b) < 1e-8);

    // the line through two of its points is the same point set
    const double s = -0.7;
    const double t = 1.3;
    const GeodesicLine again = line_through(geodesic_point(line, s), geodesic_point(line, t));
    for (double u : {-2.0, -0.5, 0.0, 0.8, 2.0}) {
      CHECK(distance(geodesic_point(again, u), geodesic_point(line, s + u)) < 1e-8);
    }
  }
  require_error(ErrorKind::CoincidentPoints, [] { line_through(scalar_point(0.2), scalar_point(0.2)); });
}

TEST_CASE("convex_combination") {
  Rng rng(39);
  const BallPoint x = random_ball_point(rng, 3, 2);
  const BallPoint y = random_ball_point(rng, 3, 2);
  CHECK(convex_combination(x, y, 0.0).matrix() == x.matrix());
  CHECK(convex_combination(x, y, 1.0).matrix() == y.matrix());
  CHECK(std::abs(value(convex_combination(BallPoint::zero(1, 1), scalar_point(0.8), 0.5)) - 0.5) < 1e-15);
  CHECK(convex_combination(x, x, 0.3).matrix() == x.matrix());

  for (int k = 0; k < 30; ++k) {
    const BallPoint p = random_ball_point(rng, 4, 3, 0.9);
    const BallPoint q = random_ball_point(rng, 4, 3, 0.9);
    const double t = (k + 0.5) / 30.0;
    const BallPoint z = convex_combination(p, q, t);
    const double d = distance(p, q);
    CHECK(std::abs(distance(z, p) - t * d) < 1e-8);
    CHECK(std::abs(distance(z, q) - (1.0 - t) * d) < 1e-8);
    CHECK(spectral_norm(convex_combination(p, q, 0.5).matrix() - convex_combination(q, p, 0.5).matrix()) < 1e-9);
  }
  require_error(ErrorKind::InvalidArgument, [&] { convex_combination(x, y, 1.5); });
}

TEST_CASE("alpha_metric examples") {
  Rng rng(40);
  const Matrix v = random_matrix(rng, 3, 2);
  const BallPoint a = random_ball_point(rng, 3, 2);
  CHECK(alpha_metric(BallPoint::zero(3, 2), v) == doctest::Approx(spectral_norm(v)).epsilon(1e-14));
  CHECK(alpha_metric(a, Matrix::Zero(3, 2)) == 0.0);
  CHECK(alpha_metric(a, -2.5 * v) == doctest::Approx(2.5 * alpha_metric(a, v)).epsilon(1e-13));
  CHECK(alpha_metric(scalar_point(0.5), Matrix::Constant(1, 1, 1.0)) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("alpha is the first variation of the distance") {
  Rng rng(41);
  for (int k = 0; k < 20; ++k) {
    const BallPoint a = random_ball_point(rng, 3, 2, 0.8);
    const Matrix v = random_unit_direction(rng, 3, 2);
    const double alpha = alpha_metric(a, v);
    for (double h : {1e-3, 1e-4}) {
      const double q = distance(a, BallPoint(a.matrix() + h * v)) / h;
      CHECK(std::abs(q - alpha) <= 20.0 * h);
    }
  }
}

TEST_CASE("curve_length") {
  Rng rng(42);
  const GeodesicLine line(random_ball_point(rng, 3, 2, 0.7), random_unit_direction(rng, 3, 2));
  std::vector<double> grid(101);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) / 100.0;
  const Curve curve = [&](double t) { return geodesic_point(line, t); };
  CHECK(std::abs(curve_length(grid, curve) - 1.0) < 1e-6);
  const CurveDerivative deriv = [&](double t) { return geodesic_velocity(line, t); };
  CHECK(std::abs(curve_length(grid, curve, deriv) - 1.0) < 1e-6);

  // irregular grid with an odd number of intervals
  std::vector<double> irregular{0.0, 0.05, 0.2, 0.3, 0.55, 0.6, 0.8, 1.0};
  for (double& t : irregular) t = t * t;
  CHECK(std::abs(curve_length(irregular, curve, deriv) - 1.0) < 1e-2);

  const BallPoint c = random_ball_point(rng, 3, 2);
  CHECK(curve_length(grid, [&](double) { return c; }) < 1e-12);

  const BallPoint x = random_ball_point(rng, 3, 2, 0.8);
  const BallPoint y = random_ball_point(rng, 3, 2, 0.8);
  const Curve segment = [&](double t) { return BallPoint(x.matrix() + t * (y.matrix() - x.matrix())); };
  CHECK(curve_length(grid, segment) >= distance(x, y) - 1e-6);

  std::vector<double> coarse{0.0, 1.0};
  require_error(ErrorKind::GridTooCoarse, [&] { curve_length(coarse, curve); });
  std::vector<double> unsorted{0.0, 0.5, 0.4};
  require_error(ErrorKind::InvalidArgument, [&] { curve_length(unsorted, curve); });
}

TEST_CASE("diameter and diametral points") {
  Rng rng(43);
  CHECK(diameter(MetricSample({random_ball_point(rng, 2, 2)})).value == 0.0);
  CHECK(diameter(MetricSample({BallPoint::zero(1, 1), scalar_point(0.5)})).value ==
        doctest::Approx(std::atanh(0.5)).epsilon(1e-14));

  const GeodesicLine line(random_ball_point(rng, 3, 2, 0.6), random_unit_direction(rng, 3, 2));
  const MetricSample collinear({geodesic_point(line, 0.0), geodesic_point(line, 1.0), geodesic_point(line, 3.0)});
  const Diameter d = diameter(collinear);
  CHECK(d.value == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(d.first == 0);
  CHECK(d.second == 2);

  const BallPoint x = random_ball_point(rng, 3, 2);
  const BallPoint y = random_ball_point(rng, 3, 2);
  const MetricSample pair({x, y});
  CHECK(diametral_check(pair, 0).is_diametral);
  CHECK(diametral_check(pair, 1).is_diametral);
  const MetricSample with_mid({x, y, convex_combination(x, y, 0.5)});
  const DiametralCheck mid = diametral_check(with_mid, 2);
  CHECK_FALSE(mid.is_diametral);
  CHECK(mid.radius == doctest::Approx(distance(x, y) / 2.0).epsilon(1e-9));

  // equilateral triangle in the disc: rotations by 2pi/3 about 0 are isometries
  std::vector<BallPoint> tri;
  for (int k = 0; k < 3; ++k) tri.push_back(scalar_point(std::polar(0.6, 2.0 * M_PI * k / 3.0)));
  const MetricSample triangle(tri);
  for (std::size_t k = 0; k < 3; ++k) CHECK(diametral_check(triangle, k).is_diametral);
  require_error(ErrorKind::InvalidArgument, [&] { diametral_check(triangle, 3); });
}

TEST_CASE("barycenter_sequence") {
  Rng rng(44);
  const BallPoint p = random_ball_point(rng, 3, 2);
  const BallPoint q = random_ball_point(rng, 3, 2);
  const std::vector<BallPoint> one{p};
  CHECK(barycenter_sequence(one).matrix() == p.matrix());
  const std::vector<BallPoint> two{p, q};
  CHECK(spectral_norm(barycenter_sequence(two).matrix() - convex_combination(p, q, 0.5).matrix()) < 1e-12);

  for (int k = 0; k < 20; ++k) {
    std::vector<BallPoint> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(random_ball_point(rng, 3, 2, 0.9));
    const BallPoint b = barycenter_sequence(pts);
    for (int probe = 0; probe < 10; ++probe) {
      const BallPoint x = random_ball_point(rng, 3, 2, 0.9);
      double mean = 0.0;
      for (const auto& c : pts) mean += distance(x, c) / 6.0;
      CHECK(distance(x, b) <= mean + 1e-8);
    }
  }
  require_error(ErrorKind::InvalidArgument, [] { barycenter_sequence(std::vector<BallPoint>{}); });
}
