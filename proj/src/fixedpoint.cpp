#include "opball/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "opball/sampling.hpp"

namespace opball {

std::vector<BallPoint> probe_points(Index n_h, Index n_k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BallPoint> probes;
  for (int i = 0; i < 3; ++i) probes.emplace_back(0.5 * random_unit_direction(rng, n_h, n_k));
  return probes;
}

namespace {

using Action = std::vector<BallPoint>;

Action act(const BallAutomorphism& t, const std::vector<BallPoint>& probes, const Tolerances& tol) {
  Action out;
  out.reserve(probes.size());
  for (const auto& p : probes) out.push_back(automorphism_apply(t, p, tol));
  return out;
}

// max over probes of rho; large Frobenius gaps short-circuit to +inf.
double action_distance(const Action& a, const Action& b, const Tolerances& tol) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i].matrix() - b[i].matrix()).norm() > 1e-3) return std::numeric_limits<double>::infinity();
  }
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, distance(a[i], b[i], tol));
  return worst;
}

std::optional<std::size_t> find_action(const std::vector<Action>& known, const Action& a,
                                       const Tolerances& tol) {
  for (std::size_t k = 0; k < known.size(); ++k) {
    if (action_distance(known[k], a, tol) < tol.group_tol) return k;
  }
  return std::nullopt;
}

}  // namespace

AutomorphismGroup::AutomorphismGroup(std::vector<BallAutomorphism> elements,
                                     std::optional<GroupTable> table,
                                     std::vector<std::size_t> generated_from)
    : elements_(std::move(elements)), table_(std::move(table)), generated_from_(std::move(generated_from)) {
  if (elements_.empty()) throw Error(ErrorKind::InvalidArgument, "automorphism group is empty");
  for (const auto& e : elements_) {
    if (e.n_h() != n_h() || e.n_k() != n_k()) {
      throw Error(ErrorKind::ShapeMismatch, "group elements act on different balls");
    }
  }
  if (table_) {
    const std::size_t n = elements_.size();
    bool ok = table_->size() == n;
    for (const auto& row : *table_) {
      ok = ok && row.size() == n && std::all_of(row.begin(), row.end(), [n](std::size_t k) { return k < n; });
    }
    if (!ok) throw Error(ErrorKind::ShapeMismatch, "multiplication table does not match the element list");
  }
}

double AutomorphismGroup::closure_defect(const Tolerances& tol) const {
  const auto probes = probe_points(n_h(), n_k());
  std::vector<Action> actions;
  for (const auto& e : elements_) actions.push_back(act(e, probes, tol));
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      Action prod;
      for (const auto& p : actions[j]) prod.push_back(automorphism_apply(elements_[i], p, tol));
      if (table_) {
        const std::size_t k = (*table_)[i][j];
        double d = 0.0;
        for (std::size_t q = 0; q < probes.size(); ++q) d = std::max(d, distance(prod[q], actions[k][q], tol));
        worst = std::max(worst, d);
      } else {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < size(); ++k) {
          double d = 0.0;
          for (std::size_t q = 0; q < probes.size(); ++q) d = std::max(d, distance(prod[q], actions[k][q], tol));
          best = std::min(best, d);
        }
        worst = std::max(worst, best);
      }
    }
  }
  return worst;
}

AutomorphismGroup group_closure(const std::vector<BallAutomorphism>& generators,
                                std::size_t max_elements, const Tolerances& tol) {
  if (generators.empty()) throw Error(ErrorKind::InvalidArgument, "no generators");
  const Index n_h = generators.front().n_h();
  const Index n_k = generators.front().n_k();
  for (const auto& g : generators) {
    if (g.n_h() != n_h || g.n_k() != n_k) throw Error(ErrorKind::ShapeMismatch, "generators differ in shape");
  }
  const auto probes = probe_points(n_h, n_k);
  std::vector<BallAutomorphism> elements{BallAutomorphism::identity(n_h, n_k)};
  std::vector<Action> actions{probes};
  std::vector<std::size_t> generator_index;

  auto exceeded = [&](const std::string& why) {
    std::ostringstream msg;
    msg << "closure exceeded max_elements = " << max_elements << " (" << why << ")";
    return Error(ErrorKind::ClosureExceeded, msg.str());
  };

  try {
    for (const auto& g : generators) {
      const Action a = act(g, probes, tol);
      if (const auto k = find_action(actions, a, tol)) {
        generator_index.push_back(*k);
      } else {
        elements.push_back(g);
        actions.push_back(a);
        generator_index.push_back(elements.size() - 1);
      }
    }
    // breadth-first: right-multiply every known element by every generator
    for (std::size_t i = 0; i < elements.size(); ++i) {
      for (const auto& g : generators) {
        BallAutomorphism prod = automorphism_compose(elements[i], g, tol);
        Action a;
        for (const auto& p : act(g, probes, tol)) a.push_back(automorphism_apply(elements[i], p, tol));
        if (find_action(actions, a, tol)) continue;
        if (elements.size() >= max_elements) throw exceeded("too many distinct actions");
        elements.push_back(std::move(prod));
        actions.push_back(std::move(a));
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::BoundaryProximity) throw exceeded("an orbit escaped toward the boundary");
    throw;
  }

  const std::size_t n = elements.size();
  GroupTable table(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Action a;
      for (const auto& p : actions[j]) a.push_back(automorphism_apply(elements[i], p, tol));
      const auto k = find_action(actions, a, tol);
      if (!k) throw exceeded("product outside the generated set");
      table[i][j] = *k;
    }
  }
  return AutomorphismGroup(std::move(elements), std::move(table), std::move(generator_index));
}

MetricSample orbit(const AutomorphismGroup& group, const BallPoint& x0, const Tolerances& tol) {
  std::vector<BallPoint> points;
  points.reserve(group.size());
  for (const auto& g : group.elements()) points.push_back(automorphism_apply(g, x0, tol));
  return MetricSample(std::move(points), tol);
}

EllipticityReport is_elliptic(const AutomorphismGroup& group, const BallPoint& x0,
                              double elliptic_margin, const Tolerances& tol) {
  EllipticityReport out;
  for (const auto& g : group.elements()) {
    try {
      out.sup_norm = std::max(out.sup_norm, automorphism_apply(g, x0, tol).norm());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BoundaryProximity && e.kind() != ErrorKind::SingularDenominator) throw;
      out.sup_norm = 1.0;
    }
  }
  out.elliptic = out.sup_norm <= 1.0 - elliptic_margin;
  return out;
}

Displacement displacement_detail(const AutomorphismGroup& group, const BallPoint& x, const Tolerances& tol) {
  Displacement out;
  for (std::size_t k = 0; k < group.size(); ++k) {
    const double d = distance(x, automorphism_apply(group.elements()[k], x, tol), tol);
    if (d > out.value) {
      out.value = d;
      out.argmax = k;
    }
  }
  return out;
}

double displacement(const AutomorphismGroup& group, const BallPoint& x, const Tolerances& tol) {
  return displacement_detail(group, x, tol).value;
}

// ---------------------------------------------------------------------------
// Chebyshev center

namespace {

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& y) {
  std::vector<double> s(y.data(), y.data() + y.size());
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cumulative += s[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (s[k] - candidate > 0.0) theta = candidate;
  }
  return (y.array() - theta).max(0.0).matrix();
}

// Dual of min_V max_i (r_i + <g_i, V>) + mu/2 ||V||^2 over the simplex,
// solved by accelerated projected gradient.
Eigen::VectorXd prox_dual_weights(const Eigen::MatrixXd& gram, const Eigen::VectorXd& r, double mu) {
  const Index n = r.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const double lipschitz = std::max(es.eigenvalues().maxCoeff(), 1e-12) / mu;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Index top = 0;
  r.maxCoeff(&top);
  w(top) = 1.0;
  Eigen::VectorXd y = w;
  double momentum = 1.0;
  for (int it = 0; it < 400; ++it) {
    const Eigen::VectorXd grad = gram * y / mu - r;
    const Eigen::VectorXd next = project_simplex(y - grad / lipschitz);
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = next + ((momentum - 1.0) / next_momentum) * (next - w);
    const double change = (next - w).lpNorm<1>();
    w = next;
    momentum = next_momentum;
    if (change < 1e-14) break;
  }
  return w;
}

struct Linearization {
  Eigen::VectorXd r;            // rho(X, p_i)
  std::vector<Matrix> grads;    // subgradients at the recentered origin
  double radius = 0.0;
};

Linearization linearize(const BallPoint& x, const std::vector<BallPoint>& points, const Tolerances& tol) {
  Linearization lin;
  const Index n = static_cast<Index>(points.size());
  lin.r.resize(n);
  for (Index i = 0; i < n; ++i) {
    const Matrix q = mobius_matrix(-x, points[static_cast<std::size_t>(i)], tol);
    Eigen::JacobiSVD<Matrix> svd(q, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double u = svd.singularValues()(0);
    if (!(u < 1.0)) throw Error(ErrorKind::BoundaryProximity, "sample point at the boundary");
    lin.r(i) = std::atanh(u);
    // d/dV rho(V, q) at V = 0 is -u1 v1^* (top singular pair of q)
    if (u > 0.0) {
      lin.grads.push_back(-svd.matrixU().col(0) * svd.matrixV().col(0).adjoint());
    } else {
      lin.grads.push_back(Matrix::Zero(q.rows(), q.cols()));
    }
  }
  lin.radius = lin.r.maxCoeff();
  return lin;
}

double enclosing_radius(const BallPoint& x, const std::vector<BallPoint>& points, const Tolerances& tol) {
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, distance(x, p, tol));
  return r;
}

ChebyshevResult chebyshev_solve(const std::vector<BallPoint>& points, const BallPoint& start,
                                const ChebyshevParams& params, const Tolerances& tol) {
  ChebyshevResult out{start, 0.0, 0, false};
  if (points.size() == 1) {
    out.center = points.front();
    out.converged = true;
    return out;
  }
  const Index n = static_cast<Index>(points.size());
  BallPoint x = start;
  Linearization lin = linearize(x, points, tol);
  double mu = 1.0 / std::max(lin.radius, 1e-12);

  for (int iter = 0; iter < params.max_iter; ++iter) {
    out.iterations = iter + 1;
    Eigen::MatrixXd gram(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        gram(i, j) = (lin.grads[static_cast<std::size_t>(i)].adjoint() * lin.grads[static_cast<std::size_t>(j)])
                         .trace().real();
    const Eigen::VectorXd w = prox_dual_weights(gram, lin.r, mu);
    Matrix step = Matrix::Zero(x.rows(), x.cols());
    for (Index i = 0; i < n; ++i) step -= (w(i) / mu) * lin.grads[static_cast<std::size_t>(i)];

    const double step_norm = spectral_norm(step);
    if (step_norm <= params.cheb_tol * (1.0 + lin.radius)) {
      out.converged = true;
      break;
    }
    if (step_norm > lin.radius) step *= lin.radius / step_norm;
    double model = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      model = std::max(model, lin.r(i) + (lin.grads[static_cast<std::size_t>(i)].adjoint() * step).trace().real());
    }
    const double predicted = lin.radius - model;

    bool accepted = false;
    try {
      const BallPoint trial = mobius_apply(x, BallPoint(th_map(step, tol), tol.boundary_tol), tol);
      const double trial_radius = enclosing_radius(trial, points, tol);
      const double actual = lin.radius - trial_radius;
      if (predicted > 0.0 && actual >= 0.1 * predicted) {
        x = trial;
        lin = linearize(x, points, tol);
        accepted = true;
        if (actual >= 0.75 * predicted) mu = std::max(mu / 2.0, 1e-3 / std::max(lin.radius, 1e-12));
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BoundaryProximity) throw;
    }
    if (!accepted) mu *= 4.0;
  }
  out.center = x;
  out.radius = lin.radius;
  return out;
}

}  // namespace

ChebyshevResult chebyshev_center(const MetricSample& sample, const ChebyshevParams& params,
                                 const Tolerances& tol) {
  const auto& pts = sample.points();
  ChebyshevResult out = chebyshev_solve(pts, barycenter_sequence(pts, tol), params, tol);
  if (!out.converged) {
    std::ostringstream msg;
    msg << "no convergence after " << params.max_iter << " iterations (radius " << out.radius << ")";
    throw Error(ErrorKind::MaxIterations, msg.str());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixed point solver

FixedPointResult find_fixed_point(const AutomorphismGroup& group, const BallPoint& x0,
                                  const FixedPointParams& params, const Tolerances& tol) {
  if (x0.rows() != group.n_h() || x0.cols() != group.n_k()) {
    throw Error(ErrorKind::ShapeMismatch, "start point does not match the group's ball");
  }
  const EllipticityReport report = is_elliptic(group, x0, params.elliptic_margin, tol);
  if (!report.elliptic) {
    std::ostringstream msg;
    msg << "orbit reaches norm " << report.sup_norm << " > 1 - " << params.elliptic_margin;
    throw Error(ErrorKind::NotElliptic, msg.str());
  }

  const MetricSample start_orbit = orbit(group, x0, tol);
  BallPoint x = barycenter_sequence(start_orbit.points(), tol);
  Displacement current = displacement_detail(group, x, tol);
  FixedPointResult result{x, current.value, 0, false, {current.value}};

  for (int iter = 0; iter < params.max_iter; ++iter) {
    if (current.value <= params.fp_tol) break;
    result.iterations = iter + 1;

    std::optional<BallPoint> next;
    Displacement next_disp;
    if (params.mode == SolverMode::ChebyshevIterate) {
      ChebyshevParams inner = params.chebyshev;
      inner.cheb_tol = std::min(inner.cheb_tol, 1e-2 * params.fp_tol);
      const MetricSample orb = orbit(group, x, tol);
      BallPoint trial = chebyshev_solve(orb.points(), x, inner, tol).center;
      const Displacement d = displacement_detail(group, trial, tol);
      if (d.value < current.value) {
        next = std::move(trial);
        next_disp = d;
      }
    }
    // midpoint descent, also the fallback when a Chebyshev step stalls
    if (!next) {
      const BallPoint target = automorphism_apply(group.elements()[current.argmax], x, tol);
      double alpha = 1.0;
      for (int k = 0; k <= params.max_backtracks; ++k, alpha *= 0.5) {
        BallPoint trial = convex_combination(x, target, 0.5 * alpha, tol);
        const Displacement d = displacement_detail(group, trial, tol);
        if (d.value <= (1.0 - params.armijo_c * alpha) * current.value) {
          next = std::move(trial);
          next_disp = d;
          break;
        }
      }
    }
    if (!next) break;  // stalled: no admissible decrease
    x = std::move(*next);
    current = next_disp;
    result.history.push_back(current.value);
  }

  result.point = x;
  result.displacement = current.value;
  result.converged = current.value <= params.fp_tol;
  return result;
}

// ---------------------------------------------------------------------------

std::optional<EquicontinuityWitness> equicontinuity_witness(const BallAutomorphism& g, double delta,
                                                            const Tolerances& tol) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorKind::PreconditionUnmet, "delta must lie in (0, 1/2)");
  }
  const BallPoint zero = BallPoint::zero(g.n_h(), g.n_k());
  const BallPoint a = automorphism_apply(g, zero, tol);
  if (!(a.norm() > 1.0 - delta)) {
    std::ostringstream msg;
    msg << "||g(0)|| = " << a.norm() << " is not above 1 - delta = " << 1.0 - delta;
    throw Error(ErrorKind::PreconditionUnmet, msg.str());
  }
  // g = M_A o h with h = M_{-A} o g fixing the origin
  const BallAutomorphism h = automorphism_compose(mobius_as_block(-a, tol), g, tol);
  const HermitianEig eig = hermitian_eig(a.matrix().adjoint() * a.matrix(), tol);
  const double top = eig.values.maxCoeff();
  Matrix projection = Matrix::Zero(a.cols(), a.cols());
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) >= top * (1.0 - 1e-10)) {
      projection += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    }
  }
  const BallPoint half(0.5 * a.matrix() * projection, tol.boundary_tol);
  const BallPoint x2 = automorphism_apply(h.inverse(tol), half, tol);
  const BallPoint image2 = automorphism_apply(g, x2, tol);

  EquicontinuityWitness w{zero, x2, a, image2, 0.0, 0.0};
  w.input_gap = spectral_norm(x2.matrix() - zero.matrix());
  w.image_gap = spectral_norm(image2.matrix() - a.matrix());
  if (w.input_gap > 0.25 && w.image_gap < delta) return w;
  return std::nullopt;
}

}  // namespace opball
