#include "opball/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "opball/groups.hpp"
#include "opball/hyperbolic.hpp"
#include "opball/pontryagin.hpp"
#include "opball/sampling.hpp"

namespace opball {

namespace {

constexpr std::size_t kMaxMessages = 5;

class Recorder {
 public:
  explicit Recorder(SuiteResult& out) : out_(out) {}

  void set_trial(int trial) { trial_ = trial; }

  // `excess` > 0 is a violation: the measured quantity minus its allowed bound.
  void expect(double excess, const char* what) {
    if (!(excess <= 0.0)) fail(what, excess);
  }

  void error(const Error& e) {
    ++failed_in_trial_;
    note(std::string("raised ") + e.what());
  }

  void close_trial() {
    if (failed_in_trial_ > 0) ++out_.failures;
    failed_in_trial_ = 0;
  }

 private:
  void fail(const char* what, double excess) {
    ++failed_in_trial_;
    if (std::isnan(excess)) excess = std::numeric_limits<double>::infinity();
    out_.worst_excess = std::max(out_.worst_excess, excess);
    std::ostringstream msg;
    msg.precision(3);
    msg << what << " exceeded by " << excess;
    note(msg.str());
  }

  void note(const std::string& text) {
    if (out_.messages.size() < kMaxMessages) {
      out_.messages.push_back("trial " + std::to_string(trial_) + ": " + text);
    }
  }

  SuiteResult& out_;
  int trial_ = 0;
  int failed_in_trial_ = 0;
};

struct Shape {
  Index n_h;
  Index n_k;
};

Shape random_shape(Rng& rng, Index max_h = 6, Index max_k = 3) {
  std::uniform_int_distribution<Index> h(1, max_h);
  std::uniform_int_distribution<Index> k(1, max_k);
  return {h(rng), k(rng)};
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

using Trial = std::function<void(Rng&, Recorder&, const Tolerances&)>;

// ---- Appendix ---------------------------------------------------------------

void lemma_inequality(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  Matrix a = random_matrix(rng, s.n_h, s.n_k);
  a *= uniform(rng, 0.01, 2.0) / spectral_norm(a);
  const BallPoint b = random_ball_point(rng, s.n_h, s.n_k, 0.95);
  const Matrix& bm = b.matrix();
  const double rhs = spectral_norm(left_defect_power(bm, -0.5, tol) * (a - bm * a.adjoint() * bm) *
                                   right_defect_power(bm, -0.5, tol));
  rec.expect(spectral_norm(a) - rhs - 1e-9, "||A|| <= ||(1-BB*)^-1/2 (A-BA*B) (1-B*B)^-1/2||");
}

void doubling_convexity(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const BallPoint base = random_ball_point(rng, s.n_h, s.n_k, 0.8);
  const GeodesicLine g(base, random_unit_direction(rng, s.n_h, s.n_k), tol);
  const GeodesicLine e(base, random_unit_direction(rng, s.n_h, s.n_k), tol);
  for (double t : {0.25, 0.5, 1.0}) {
    const double near = distance(geodesic_point(g, t, tol), geodesic_point(e, t, tol), tol);
    const double far = distance(geodesic_point(g, 2 * t, tol), geodesic_point(e, 2 * t, tol), tol);
    rec.expect(2 * near - far - 1e-8, "2 rho(g(s), e(s)) <= rho(g(2s), e(2s))");
  }
}

void metric_line(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const GeodesicLine line(random_ball_point(rng, s.n_h, s.n_k, 0.8), random_unit_direction(rng, s.n_h, s.n_k), tol);
  constexpr std::array<double, 5> params{-3.0, -1.0, 0.0, 0.5, 2.0};
  std::vector<BallPoint> pts;
  for (double t : params) pts.push_back(geodesic_point(line, t, tol));
  for (std::size_t i = 0; i < params.size(); ++i)
    for (std::size_t j = i + 1; j < params.size(); ++j)
      rec.expect(std::abs(distance(pts[i], pts[j], tol) - std::abs(params[i] - params[j])) - 1e-8,
                 "|rho(g(s), g(t)) - |s - t||");
}

void unit_speed(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const GeodesicLine line(random_ball_point(rng, s.n_h, s.n_k, 0.8), random_unit_direction(rng, s.n_h, s.n_k), tol);
  constexpr double h = 1e-5;
  for (int k = 0; k < 10; ++k) {
    const double t = uniform(rng, -2.0, 2.0);
    const Matrix v = geodesic_velocity(line, t, tol);
    rec.expect(std::abs(alpha_metric(geodesic_point(line, t, tol), v, tol) - 1.0) - 1e-7, "|alpha(g, g') - 1|");
    const Matrix fd = (geodesic_point(line, t + h, tol).matrix() - geodesic_point(line, t - h, tol).matrix()) / (2 * h);
    rec.expect(spectral_norm(fd - v) - 1e-6, "||g' - central difference||");
  }
}

void met_identity(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const Matrix d = random_unit_direction(rng, s.n_h, s.n_k);
  const Matrix g = th_map(uniform(rng, -3.0, 3.0) * d, tol);
  const Matrix lhs = left_defect_power(g, -0.5, tol) * (d - g * d.adjoint() * g) * right_defect_power(g, -0.5, tol);
  rec.expect(spectral_norm(lhs - d) - 1e-9, "||(1-gg*)^-1/2 (D - gD*g) (1-g*g)^-1/2 - D||");
}

void line_invariance(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.8);
  const BallPoint b = random_ball_point(rng, s.n_h, s.n_k, 0.8);
  const BallPoint m = random_ball_point(rng, s.n_h, s.n_k, 0.8);
  const double r = distance(a, b, tol);
  const GeodesicLine line = line_through(a, b, tol);
  rec.expect(distance(geodesic_point(line, r, tol), b, tol) - 1e-8, "rho(line(rho(a,b)), b)");
  const GeodesicLine image = line_through(mobius_apply(m, a, tol), mobius_apply(m, b, tol), tol);
  for (double t : {-1.0, 0.5 * r, 2.0}) {
    const BallPoint moved = mobius_apply(m, geodesic_point(line, t, tol), tol);
    rec.expect(distance(moved, geodesic_point(image, t, tol), tol) - 1e-8, "rho(M(g(t)), line(Ma, Mb)(t))");
  }
}

void alpha_first_variation(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.8);
  const Matrix v = random_unit_direction(rng, s.n_h, s.n_k) * uniform(rng, 0.1, 1.0);
  auto quotient = [&](double h) { return distance(a, BallPoint(a.matrix() + h * v, tol.boundary_tol), tol) / h; };
  constexpr double h = 1e-4;
  const double extrapolated = 2.0 * quotient(h / 2) - quotient(h);
  const double alpha = alpha_metric(a, v, tol);
  rec.expect(std::abs(extrapolated - alpha) - 1e-6 * std::max(1.0, alpha), "|rho(A, A+hV)/h - alpha(A, V)|");
}

void differential(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const BallPoint b = random_ball_point(rng, s.n_h, s.n_k, 0.8);
  const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.8);
  const Matrix v = random_unit_direction(rng, s.n_h, s.n_k);
  constexpr double h = 1e-5;
  const Matrix fd = (mobius_matrix(b, BallPoint(a.matrix() + h * v), tol) -
                     mobius_matrix(b, BallPoint(a.matrix() - h * v), tol)) / (2 * h);
  const Matrix exact = mobius_differential(b, a, v, tol);
  rec.expect(spectral_norm(fd - exact) - 1e-6 * std::max(1.0, spectral_norm(exact)), "||DM_B(A)V - central difference||");
}

// ---- Remaining module properties ----------------------------------------------

void mobius_inverse(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.9);
  const BallPoint x = random_ball_point(rng, s.n_h, s.n_k, 0.9);
  const BallPoint back = mobius_apply(-a, mobius_apply(a, x, tol), tol);
  rec.expect(spectral_norm(back.matrix() - x.matrix()) - 1e-9, "||M_-A(M_A(X)) - X||");
}

void block_agreement(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.9);
  const BallPoint x = random_ball_point(rng, s.n_h, s.n_k, 0.9);
  const Matrix diff = automorphism_apply(mobius_as_block(a, tol), x, tol).matrix() - mobius_apply(a, x, tol).matrix();
  rec.expect(spectral_norm(diff) - 1e-9, "||w_{T_A}(X) - M_A(X)||");
}

void lipschitz(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.9);
  const BallPoint x = random_ball_point(rng, s.n_h, s.n_k, 0.9);
  const bool nearby = uniform(rng, 0.0, 1.0) < 0.5;
  const BallPoint y = nearby ? BallPoint(x.matrix() * (1.0 - 1e-3) + 1e-4 * random_unit_direction(rng, s.n_h, s.n_k))
                             : random_ball_point(rng, s.n_h, s.n_k, 0.9);
  const double lhs = spectral_norm(mobius_apply(a, x, tol).matrix() - mobius_apply(a, y, tol).matrix());
  const double bound = 3.0 * std::pow(1.0 - a.norm(), -2.5) * spectral_norm(x.matrix() - y.matrix());
  rec.expect(lhs - bound, "||M_A X - M_A Y|| <= 3 (1-||A||)^-5/2 ||X - Y||");
}

void isometry_invariance(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const BallAutomorphism t = BallAutomorphism::from_block(
      random_eta_preserving(rng, s.n_h, s.n_k, uniform(rng, 0.0, 1.5)), s.n_h, s.n_k, tol);
  const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.7);
  const BallPoint b = random_ball_point(rng, s.n_h, s.n_k, 0.7);
  const double moved = distance(automorphism_apply(t, a, tol), automorphism_apply(t, b, tol), tol);
  rec.expect(std::abs(moved - distance(a, b, tol)) - 1e-8, "|rho(wA, wB) - rho(A, B)|");
}

void segment_convexity(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  std::array<BallPoint, 4> p{random_ball_point(rng, s.n_h, s.n_k, 0.85), random_ball_point(rng, s.n_h, s.n_k, 0.85),
                             random_ball_point(rng, s.n_h, s.n_k, 0.85), random_ball_point(rng, s.n_h, s.n_k, 0.85)};
  const double t = uniform(rng, 0.0, 1.0);
  const double lhs = distance(convex_combination(p[0], p[1], t, tol), convex_combination(p[2], p[3], t, tol), tol);
  const double rhs = (1 - t) * distance(p[0], p[2], tol) + t * distance(p[1], p[3], tol);
  rec.expect(lhs - rhs - 1e-8, "rho((1-t)x+ty, (1-t)w+tz) <= (1-t)rho(x,w) + t rho(y,z)");
}

void barycenter_mean(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const int n = std::uniform_int_distribution<int>(2, 8)(rng);
  std::vector<BallPoint> pts;
  for (int k = 0; k < n; ++k) pts.push_back(random_ball_point(rng, s.n_h, s.n_k, 0.85));
  const BallPoint b = barycenter_sequence(pts, tol);
  for (int probe = 0; probe < 10; ++probe) {
    const BallPoint x = random_ball_point(rng, s.n_h, s.n_k, 0.85);
    double mean = 0.0;
    for (const auto& c : pts) mean += distance(x, c, tol) / n;
    rec.expect(distance(x, b, tol) - mean - 1e-8, "rho(x, b_n) <= mean rho(x, c_k)");
  }
}

void degree_transport(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const PontryaginSignature sig(s.n_h, s.n_k);
  const Matrix t = random_eta_preserving(rng, s.n_h, s.n_k, uniform(rng, 0.0, 1.5));
  const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.8);
  const BallPoint moved = automorphism_apply(induced_automorphism(sig, t, tol), a, tol);
  const double bound = negativeness_degree(sig, a) / std::pow(spectral_norm(t), 2);
  rec.expect(bound - negativeness_degree(sig, moved) - 1e-9, "eps(L(w_T A)) >= eps(L(A)) ||T||^-2");
}

void ellipticity_bound(Rng& rng, Recorder& rec, const Tolerances& tol) {
  static const std::array<const char*, 3> groups{"C4", "S3", "Q8"};
  const Shape s = random_shape(rng, 5, 2);
  const PontryaginSignature sig(s.n_h, s.n_k);
  const char* name = groups[std::uniform_int_distribution<std::size_t>(0, groups.size() - 1)(rng)];
  const TestRepresentation tr = make_test_representation(name, sig, uniform(rng, 1.0, 20.0), rng(), tol);
  const double c = tr.rep.bound();
  const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.8);
  const double a2 = a.norm() * a.norm();
  const double bound = (1.0 - a2) / (1.0 + a2) / (c * c);
  for (const auto& image : tr.rep.images()) {
    const double w = automorphism_apply(induced_automorphism(sig, image, tol), a, tol).norm();
    rec.expect(bound - (1.0 - w * w) - 1e-9, "1 - ||w_pi(g)(A)||^2 >= C^-2 (1-||A||^2)/(1+||A||^2)");
  }
}

void graph_roundtrip(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const PontryaginSignature sig(s.n_h, s.n_k);
  const BallPoint a = random_ball_point(rng, s.n_h, s.n_k, 0.9);
  Matrix scale = random_unitary(rng, s.n_k);
  for (Index j = 0; j < s.n_k; ++j) scale.col(j) *= uniform(rng, 0.5, 2.0);
  const Matrix basis = graph_subspace(sig, a) * scale;
  const BallPoint back = subspace_to_ball(sig, basis, tol);
  rec.expect(spectral_norm(back.matrix() - a.matrix()) - 1e-10, "||subspace_to_ball(L(A) M) - A||");
}

void unitarizer(Rng& rng, Recorder& rec, const Tolerances& tol) {
  const Shape s = random_shape(rng);
  const PontryaginSignature sig(s.n_h, s.n_k);
  const BallPoint d = random_ball_point(rng, s.n_h, s.n_k, 0.9);
  const Matrix u = unitarizer_matrix(sig, d, tol);
  rec.expect(is_J_unitary(sig, u, 0.0).defect - 1e-10, "||U*JU - J||");
  const Matrix top = (u * graph_subspace(sig, d)).topRows(s.n_h);
  rec.expect(spectral_norm(top) - 1e-10, "top block of U [D; I]");
}

struct Suite {
  const char* name;
  Trial trial;
  bool appendix;
};

const std::vector<Suite>& registry() {
  static const std::vector<Suite> suites{
      {"lemma-inequality", lemma_inequality, true},
      {"doubling-convexity", doubling_convexity, true},
      {"metric-line", metric_line, true},
      {"unit-speed", unit_speed, true},
      {"met-identity", met_identity, true},
      {"line-invariance", line_invariance, true},
      {"alpha-first-variation", alpha_first_variation, true},
      {"differential", differential, true},
      {"mobius-inverse", mobius_inverse, false},
      {"block-agreement", block_agreement, false},
      {"lipschitz", lipschitz, false},
      {"isometry-invariance", isometry_invariance, false},
      {"segment-convexity", segment_convexity, false},
      {"barycenter-mean", barycenter_mean, false},
      {"degree-transport", degree_transport, false},
      {"ellipticity-bound", ellipticity_bound, false},
      {"graph-roundtrip", graph_roundtrip, false},
      {"unitarizer", unitarizer, false},
  };
  return suites;
}

}  // namespace

std::vector<std::string> suite_names(const std::string& suite) {
  if (suite != "appendix" && suite != "all") {
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "' (expected appendix or all)");
  }
  std::vector<std::string> out;
  for (const auto& s : registry()) {
    if (suite == "all" || s.appendix) out.emplace_back(s.name);
  }
  return out;
}

CheckReport run_checks(const std::string& suite, int trials, std::uint64_t seed, const Tolerances& tol) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be positive");
  const std::vector<std::string> wanted = suite_names(suite);
  CheckReport report;
  const auto& all = registry();
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (std::find(wanted.begin(), wanted.end(), all[k].name) == wanted.end()) continue;
    SuiteResult result;
    result.name = all[k].name;
    result.trials = trials;
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (k + 1)));
    Recorder rec(result);
    for (int t = 0; t < trials; ++t) {
      rec.set_trial(t);
      try {
        all[k].trial(rng, rec, tol);
      } catch (const Error& e) {
        rec.error(e);
      }
      rec.close_trial();
    }
    report.passed = report.passed && result.passed();
    report.suites.push_back(std::move(result));
  }
  return report;
}

}  // namespace opball
