// Acceptance harness: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "opball/fixedpoint.hpp"
#include "opball/groups.hpp"
#include "opball/hyperbolic.hpp"
#include "opball/pontryagin.hpp"
#include "opball/sampling.hpp"
#include "oracles.hpp"

using namespace opball;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

// Tracks the worst value of a quantity against its bound.
class Worst {
 public:
  explicit Worst(std::string label) : label_(std::move(label)) {}
  void bound(double value, double limit) {
    if (!(value <= limit)) ok_ = false;
    if (std::isnan(value)) value = INFINITY;
    worst_ = std::max(worst_, value);
    limit_ = limit;
  }
  void require(bool cond) { ok_ = ok_ && cond; }
  bool ok() const { return ok_; }
  std::string str() const {
    std::ostringstream s;
    s.precision(3);
    s << label_ << " " << worst_ << " (limit " << limit_ << ")";
    return s.str();
  }

 private:
  std::string label_;
  double worst_ = 0.0;
  double limit_ = 0.0;
  bool ok_ = true;
};

Verdict combine(std::initializer_list<const Worst*> parts) {
  Verdict v;
  for (const Worst* w : parts) {
    v.ok = v.ok && w->ok();
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += w->str();
  }
  return v;
}

Index uniform_index(Rng& rng, Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng); }
double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

struct Shape {
  Index n_h, n_k;
};
Shape random_shape(Rng& rng, Index max_h = 6, Index max_k = 3) { return {uniform_index(rng, 1, max_h), uniform_index(rng, 1, max_k)}; }

// ---- 1 ----------------------------------------------------------------------

Verdict scalar_oracle() {
  Rng rng(1001);
  Worst dist("distance"), mob("mobius"), geo("geodesic");
  auto disc = [&](double r) {
    const double rad = r * std::sqrt(uniform(rng, 0.0, 1.0));
    return std::polar(rad, uniform(rng, -M_PI, M_PI));
  };
  for (int k = 0; k < 1000; ++k) {
    const Complex a = disc(0.9), b = disc(0.9);
    const BallPoint pa(Matrix::Constant(1, 1, a)), pb(Matrix::Constant(1, 1, b));
    dist.bound(std::abs(distance(pa, pb) - oracle::poincare(a, b)), 1e-12);
    mob.bound(std::abs(mobius_apply(pa, pb).matrix()(0, 0) - oracle::mobius_scalar(a, b)), 1e-12);
    const Complex d = std::polar(1.0, uniform(rng, -M_PI, M_PI));
    const double t = uniform(rng, -3.0, 3.0);
    const GeodesicLine line(pa, Matrix::Constant(1, 1, d));
    geo.bound(std::abs(geodesic_point(line, t).matrix()(0, 0) - oracle::scalar_geodesic(a, d, t)), 1e-12);
  }
  return combine({&dist, &mob, &geo});
}

// ---- 2 ----------------------------------------------------------------------

Verdict metric_line() {
  Rng rng(1002);
  Worst w("| rho - |s-t| |");
  const std::vector<double> params{-3.0, -1.0, 0.0, 0.5, 2.0};
  for (int k = 0; k < 200; ++k) {
    const Shape s = random_shape(rng);
    const GeodesicLine line(random_ball_point(rng, s.n_h, s.n_k, 0.9), random_unit_direction(rng, s.n_h, s.n_k));
    for (double p : params)
      for (double q : params) w.bound(std::abs(distance(geodesic_point(line, p), geodesic_point(line, q)) - std::abs(p - q)), 1e-8);
  }
  return combine({&w});
}

// ---- 3 ----------------------------------------------------------------------

Verdict unit_speed() {
  Rng rng(1003);
  Worst speed("|alpha - 1|"), fd("||gamma' - central difference||");
  for (int k = 0; k < 100; ++k) {
    const Shape s = random_shape(rng);
    const Matrix d = random_unit_direction(rng, s.n_h, s.n_k);
    // half the lines through 0, where gamma' = D - gamma D* gamma directly
    const bool at_zero = k % 2 == 0;
    const GeodesicLine line(at_zero ? BallPoint::zero(s.n_h, s.n_k) : random_ball_point(rng, s.n_h, s.n_k, 0.8), d);
    for (int j = 0; j < 10; ++j) {
      const double t = uniform(rng, -2.5, 2.5);
      const BallPoint g = geodesic_point(line, t);
      const Matrix v = at_zero ? Matrix(d - g.matrix() * d.adjoint() * g.matrix()) : geodesic_velocity(line, t);
      speed.bound(std::abs(alpha_metric(g, v) - 1.0), 1e-7);
      const Matrix numeric = oracle::richardson_derivative([&](double x) { return geodesic_point(line, x).matrix(); }, t, 1e-3);
      fd.bound(spectral_norm(numeric - geodesic_velocity(line, t)), 1e-6);
    }
  }
  return combine({&speed, &fd});
}

// ---- 4 ----------------------------------------------------------------------

Verdict lemma_inequality() {
  Rng rng(1004);
  Worst w("||A|| - rhs");
  for (int k = 0; k < 500; ++k) {
    const Shape s = random_shape(rng);
    Matrix a = random_matrix(rng, s.n_h, s.n_k);
    a *= uniform(rng, 0.01, 3.0) / spectral_norm(a);
    const BallPoint b = random_ball_point(rng, s.n_h, s.n_k, 0.97);
    const Matrix& bm = b.matrix();
    const double rhs = spectral_norm(left_defect_power(bm, -0.5) * (a - bm * a.adjoint() * bm) * right_defect_power(bm, -0.5));
    w.bound(spectral_norm(a) - rhs, 1e-9);
  }
  return combine({&w});
}

// ---- 5 ----------------------------------------------------------------------

Verdict doubling_convexity() {
  Rng rng(1005);
  Worst w("2 rho(s) - rho(2s)");
  for (int k = 0; k < 300; ++k) {
    const Shape s = random_shape(rng);
    const BallPoint base = random_ball_point(rng, s.n_h, s.n_k, 0.8);
    const GeodesicLine g(base, random_unit_direction(rng, s.n_h, s.n_k));
    const GeodesicLine e(base, random_unit_direction(rng, s.n_h, s.n_k));
    for (double t : {0.25, 0.5, 1.0}) {
      w.bound(2.0 * distance(geodesic_point(g, t), geodesic_point(e, t)) -
                  distance(geodesic_point(g, 2 * t), geodesic_point(e, 2 * t)),
              1e-8);
    }
  }
  return combine({&w});
}

// ---- 6 ----------------------------------------------------------------------

Verdict segment_convexity() {
  Rng rng(1006);
  Worst w("lhs - rhs");
  for (int k = 0; k < 300; ++k) {
    const Shape s = random_shape(rng);
    const BallPoint x = random_ball_point(rng, s.n_h, s.n_k, 0.85), y = random_ball_point(rng, s.n_h, s.n_k, 0.85);
    const BallPoint z = random_ball_point(rng, s.n_h, s.n_k, 0.85), u = random_ball_point(rng, s.n_h, s.n_k, 0.85);
    const double t = uniform(rng, 0.0, 1.0);
    const double lhs = distance(convex_combination(x, y, t), convex_combination(u, z, t));
    w.bound(lhs - ((1 - t) * distance(x, u) + t * distance(y, z)), 1e-8);
  }
  return combine({&w});
}

// ---- 7 ----------------------------------------------------------------------

Verdict mobius_algebra() {
  Rng rng(1007);
  Worst inv("||M_-A M_A X - X||"), block("||w_T X - M_A X||"), lip("Lipschitz ratio");
  for (int k = 0; k < 500; ++k) {
    const Shape s = random_shape(rng, 6, 4);
    const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.95);
    const BallPoint x = random_ball_point(rng, s.n_h, s.n_k, 0.95);
    const BallPoint y = random_ball_point(rng, s.n_h, s.n_k, 0.95);
    inv.bound(spectral_norm(mobius_apply(-a, mobius_apply(a, x)).matrix() - x.matrix()), 1e-9);
    block.bound(spectral_norm(automorphism_apply(mobius_as_block(a), x).matrix() - mobius_apply(a, x).matrix()), 1e-9);
    const double gap = spectral_norm(x.matrix() - y.matrix());
    const double image = spectral_norm(mobius_apply(a, x).matrix() - mobius_apply(a, y).matrix());
    lip.bound(image / (3.0 * std::pow(1.0 - a.norm(), -2.5) * gap), 1.0);
  }
  return combine({&inv, &block, &lip});
}

// ---- 8 ----------------------------------------------------------------------

Verdict isometry_invariance() {
  Rng rng(1008);
  Worst w("|rho(TA,TB) - rho(A,B)|");
  for (int k = 0; k < 200; ++k) {
    const Shape s = random_shape(rng);
    const BallAutomorphism t = BallAutomorphism::from_block(random_eta_preserving(rng, s.n_h, s.n_k, 1.5), s.n_h, s.n_k);
    const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.8), b = random_ball_point(rng, s.n_h, s.n_k, 0.8);
    w.bound(std::abs(distance(automorphism_apply(t, a), automorphism_apply(t, b)) - distance(a, b)), 1e-8);
  }
  return combine({&w});
}

// ---- 9-11: generated representations ---------------------------------------

struct Case {
  std::string group;
  PontryaginSignature sig;
  double cond;
  std::uint64_t seed;
};

std::vector<Case> representation_cases() {
  std::vector<Case> cases;
  std::uint64_t seed = 9000;
  for (const char* g : {"C4", "S3", "Q8"})
    for (auto [p, q] : {std::pair<Index, Index>{3, 1}, {4, 2}, {5, 2}})
      for (double c : {2.0, 10.0, 50.0}) cases.push_back({g, PontryaginSignature(p, q), c, ++seed});
  return cases;
}

Verdict fixed_points() {
  Worst disp("displacement"), iters("iterations"), err("rho to w_V(0)");
  for (const Case& c : representation_cases()) {
    const TestRepresentation tr = make_test_representation(c.group, c.sig, c.cond, c.seed);
    const AutomorphismGroup group = tr.rep.induced_group();
    for (SolverMode mode : {SolverMode::MidpointDescent, SolverMode::ChebyshevIterate}) {
      FixedPointParams params;
      params.mode = mode;
      const FixedPointResult r = find_fixed_point(group, BallPoint::zero(c.sig.n_plus(), c.sig.n_minus()), params);
      disp.require(r.converged);
      disp.bound(r.displacement, 1e-9);
      iters.bound(r.iterations, 5000);
      if (c.group == "C4") err.bound(distance(r.point, tr.expected_fixed_point), 1e-7);
    }
  }
  return combine({&disp, &iters, &err});
}

Verdict unitarization() {
  Worst unit("||tau*tau - I||"), hom("homomorphism defect"), sim("||tau - U pi U^-1||");
  for (const Case& c : representation_cases()) {
    const TestRepresentation tr = make_test_representation(c.group, c.sig, c.cond, c.seed);
    const UnitarizeResult r = unitarize(tr.rep);
    const Matrix u_inv = r.similarity.inverse();
    const Matrix id = Matrix::Identity(c.sig.dim(), c.sig.dim());
    const auto& tau = r.unitary_rep.images();
    const GroupTable& table = tr.rep.table();
    for (std::size_t g = 0; g < tau.size(); ++g) {
      unit.bound(spectral_norm(tau[g].adjoint() * tau[g] - id), 1e-7);
      sim.bound(spectral_norm(tau[g] - r.similarity * tr.rep.images()[g] * u_inv), 1e-8);
      for (std::size_t h = 0; h < tau.size(); ++h) hom.bound(spectral_norm(tau[g] * tau[h] - tau[table[g][h]]), 1e-8);
    }
  }
  return combine({&unit, &hom, &sim});
}

Verdict dual_pairs() {
  Worst angle("invariance angle"), dims("negative dim mismatch"), form("scalar product defect");
  for (const Case& c : representation_cases()) {
    const TestRepresentation tr = make_test_representation(c.group, c.sig, c.cond, c.seed);
    const DualPair pair = dual_pair(tr.rep);
    dims.bound(std::abs(static_cast<double>(pair.negative_basis.cols() - c.sig.n_minus())), 0.0);
    dims.require(pair.positive_basis.cols() + pair.negative_basis.cols() == c.sig.dim());
    const Matrix g = dual_pair_scalar_product(c.sig, pair);
    dims.require(Eigen::LLT<Matrix>(g).info() == Eigen::Success);
    for (const auto& pi : tr.rep.images()) {
      angle.bound(max_principal_angle(pair.positive_basis, pi * pair.positive_basis), 1e-7);
      angle.bound(max_principal_angle(pair.negative_basis, pi * pair.negative_basis), 1e-7);
      form.bound(spectral_norm(pi.adjoint() * g * pi - g) / spectral_norm(g), 1e-8);
    }
  }
  return combine({&angle, &dims, &form});
}

// ---- 12 ---------------------------------------------------------------------

Verdict degree_transport() {
  Rng rng(1012);
  Worst transport("degree deficit"), ellip("ellipticity deficit");
  for (int k = 0; k < 300; ++k) {
    const Shape s = random_shape(rng, 5, 3);
    const PontryaginSignature sig(s.n_h, s.n_k);
    const Matrix t = random_eta_preserving(rng, s.n_h, s.n_k, 1.5);
    const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.9);
    const BallPoint b = automorphism_apply(induced_automorphism(sig, t), a);
    transport.bound(negativeness_degree(sig, a) / std::pow(spectral_norm(t), 2) - negativeness_degree(sig, b), 1e-9);
  }
  const std::vector<Case> cases = representation_cases();
  for (int k = 0; k < 300; ++k) {
    const Case& c = cases[static_cast<std::size_t>(k) % cases.size()];
    const TestRepresentation tr = make_test_representation(c.group, c.sig, c.cond, c.seed);
    const double bound = tr.rep.bound();
    const BallPoint a = random_ball_point(rng, c.sig.n_plus(), c.sig.n_minus(), 0.9);
    const double a2 = std::pow(a.norm(), 2);
    const double floor = (1.0 - a2) / (1.0 + a2) / (bound * bound);
    for (const auto& pi : tr.rep.images()) {
      const BallPoint image = automorphism_apply(induced_automorphism(c.sig, pi), a);
      ellip.bound(floor - (1.0 - std::pow(image.norm(), 2)), 1e-9);
    }
  }
  return combine({&transport, &ellip});
}

// ---- 13 ---------------------------------------------------------------------

Verdict negative_controls() {
  Worst closure("hyperbolic closure not rejected"), elliptic("1 - truncated orbit sup norm"), witness("equicontinuity witnesses missing");
  Matrix h(2, 2);
  h << std::cosh(1.0), std::sinh(1.0), std::sinh(1.0), std::cosh(1.0);
  const BallAutomorphism hyp = BallAutomorphism::from_block(h, 1, 1);
  bool rejected = false;
  try {
    group_closure({hyp});
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::ClosureExceeded;
  }
  closure.bound(rejected ? 0.0 : 1.0, 0.0);

  std::vector<BallAutomorphism> powers{BallAutomorphism::identity(1, 1)};
  for (int n = 1; n <= 8; ++n) powers.push_back(automorphism_compose(powers.back(), hyp));
  const EllipticityReport report = is_elliptic(AutomorphismGroup(powers), BallPoint::zero(1, 1), 1e-3);
  elliptic.require(!report.elliptic);
  elliptic.bound(1.0 - report.sup_norm, 1e-3);

  Rng rng(1013);
  int missing = 0;
  for (int k = 0; k < 20; ++k) {
    const Shape s = random_shape(rng, 4, 3);
    const double delta = uniform(rng, 0.01, 0.3);
    const Matrix dir = random_unit_direction(rng, s.n_h, s.n_k);
    const BallPoint a(uniform(rng, 1.0 - delta * 0.9, 1.0 - delta * 0.1) * dir);
    const BallAutomorphism hh = BallAutomorphism::from_block(random_block_unitary(rng, s.n_h, s.n_k), s.n_h, s.n_k);
    const BallAutomorphism g = automorphism_compose(mobius_as_block(a), hh);
    const auto w = equicontinuity_witness(g, delta);
    if (!w) {
      ++missing;
      continue;
    }
    const double in = spectral_norm(w->x2.matrix() - w->x1.matrix());
    const double out = spectral_norm(automorphism_apply(g, w->x2).matrix() - automorphism_apply(g, w->x1).matrix());
    if (!(in > 0.25 && out < delta)) ++missing;
  }
  witness.bound(missing, 0.0);
  return combine({&closure, &elliptic, &witness});
}

// ---- 14 ---------------------------------------------------------------------

Verdict barycenter_mean() {
  Rng rng(1014);
  Worst w("rho(x, b_n) - mean");
  for (int k = 0; k < 100; ++k) {
    const Shape s = random_shape(rng, 4, 3);
    std::vector<BallPoint> pts;
    const int n = static_cast<int>(uniform_index(rng, 2, 8));
    for (int i = 0; i < n; ++i) pts.push_back(random_ball_point(rng, s.n_h, s.n_k, 0.85));
    std::vector<BallPoint> prefix_bary;
    for (int m = 1; m <= n; ++m) prefix_bary.push_back(barycenter_sequence(std::span<const BallPoint>(pts.data(), static_cast<std::size_t>(m))));
    for (int p = 0; p < 10; ++p) {
      const BallPoint x = random_ball_point(rng, s.n_h, s.n_k, 0.85);
      double sum = 0.0;
      for (int m = 1; m <= n; ++m) {
        sum += distance(x, pts[static_cast<std::size_t>(m - 1)]);
        w.bound(distance(x, prefix_bary[static_cast<std::size_t>(m - 1)]) - sum / m, 1e-8);
      }
    }
  }
  return combine({&w});
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"scalar-oracle-equivalence", scalar_oracle},
      {"metric-line", metric_line},
      {"unit-speed", unit_speed},
      {"inequality-lemma", lemma_inequality},
      {"doubling-convexity", doubling_convexity},
      {"segment-convexity", segment_convexity},
      {"mobius-algebra", mobius_algebra},
      {"isometry-invariance", isometry_invariance},
      {"fixed-point", fixed_points},
      {"unitarization", unitarization},
      {"dual-pair", dual_pairs},
      {"degree-transport", degree_transport},
      {"negative-controls", negative_controls},
      {"barycenter-mean", barycenter_mean},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("raised ") + e.what()};
    }
    if (!v.ok) ++failed;
    std::printf("[%s] %zu %s  %s\n", v.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
