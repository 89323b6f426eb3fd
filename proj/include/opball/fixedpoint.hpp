#pragma once

// Finite groups of ball automorphisms: closure, orbits, ellipticity, and a
// solver for a common fixed point.

#include <cstdint>
#include <optional>
#include <vector>

#include "opball/hyperbolic.hpp"

namespace opball {

using GroupTable = std::vector<std::vector<std::size_t>>;

inline constexpr std::uint64_t kProbeSeed = 0x5eedf00dULL;

/// Three seeded points of norm 1/2 used to identify automorphisms by action.
std::vector<BallPoint> probe_points(Index n_h, Index n_k, std::uint64_t seed = kProbeSeed);

class AutomorphismGroup {
 public:
  /// Elements are stored as given. Use group_closure for a checked group;
  /// this constructor also serves truncated, non-closed element lists.
  explicit AutomorphismGroup(std::vector<BallAutomorphism> elements,
                             std::optional<GroupTable> table = std::nullopt,
                             std::vector<std::size_t> generated_from = {});

  const std::vector<BallAutomorphism>& elements() const noexcept { return elements_; }
  const std::optional<GroupTable>& table() const noexcept { return table_; }
  const std::vector<std::size_t>& generated_from() const noexcept { return generated_from_; }
  std::size_t size() const noexcept { return elements_.size(); }
  Index n_h() const noexcept { return elements_.front().n_h(); }
  Index n_k() const noexcept { return elements_.front().n_k(); }

  /// Largest probe distance between w_{g h}(p) and the element the closure
  /// (or the table, when present) assigns to g h; +inf if some product has
  /// no matching element.
  double closure_defect(const Tolerances& tol = kDefaultTolerances) const;

 private:
  std::vector<BallAutomorphism> elements_;
  std::optional<GroupTable> table_;
  std::vector<std::size_t> generated_from_;
};

/// Closure of the generators under composition, deduplicated by action on
/// probe_points. Throws ClosureExceeded once more than max_elements distinct
/// actions appear or a probe image leaves the ball.
AutomorphismGroup group_closure(const std::vector<BallAutomorphism>& generators,
                                std::size_t max_elements = 120,
                                const Tolerances& tol = kDefaultTolerances);

MetricSample orbit(const AutomorphismGroup& group, const BallPoint& x0,
                   const Tolerances& tol = kDefaultTolerances);

struct EllipticityReport {
  bool elliptic = false;
  double sup_norm = 0.0;  // max_g ||g(x0)||, 1 if an image left the ball
};

EllipticityReport is_elliptic(const AutomorphismGroup& group, const BallPoint& x0,
                              double elliptic_margin = 1e-6,
                              const Tolerances& tol = kDefaultTolerances);

struct Displacement {
  double value = 0.0;         // max_g rho(X, g X)
  std::size_t argmax = 0;     // element attaining it (first in element order)
};

Displacement displacement_detail(const AutomorphismGroup& group, const BallPoint& x,
                                 const Tolerances& tol = kDefaultTolerances);

double displacement(const AutomorphismGroup& group, const BallPoint& x,
                    const Tolerances& tol = kDefaultTolerances);

struct ChebyshevParams {
  double cheb_tol = 1e-9;   // stop when the predicted decrease is below cheb_tol * (1 + R)
  int max_iter = 500;
};

struct ChebyshevResult {
  BallPoint center;
  double radius = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Center of the smallest rho-ball enclosing the sample. Proximal
/// linearization of R(X) = max_i rho(X, p_i) in Mobius-recentered
/// coordinates; throws MaxIterations if not converged.
ChebyshevResult chebyshev_center(const MetricSample& sample, const ChebyshevParams& params = {},
                                 const Tolerances& tol = kDefaultTolerances);

enum class SolverMode { MidpointDescent, ChebyshevIterate };

struct FixedPointParams {
  SolverMode mode = SolverMode::MidpointDescent;
  double fp_tol = 1e-9;
  int max_iter = 5000;
  double elliptic_margin = 1e-6;
  double armijo_c = 1e-4;
  int max_backtracks = 40;
  ChebyshevParams chebyshev{};
};

struct FixedPointResult {
  BallPoint point;
  double displacement = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // displacement after each accepted iterate
};

/// Common fixed point of an elliptic group. Starts from the barycenter
/// sequence of the orbit of x0. Throws NotElliptic if that orbit comes
/// within elliptic_margin of the boundary; on hitting max_iter the best
/// iterate is returned with converged = false.
FixedPointResult find_fixed_point(const AutomorphismGroup& group, const BallPoint& x0,
                                  const FixedPointParams& params = {},
                                  const Tolerances& tol = kDefaultTolerances);

struct EquicontinuityWitness {
  BallPoint x1;
  BallPoint x2;
  BallPoint image1;
  BallPoint image2;
  double input_gap = 0.0;  // ||x2 - x1||, > 1/4
  double image_gap = 0.0;  // ||g(x2) - g(x1)||, < delta
};

/// For ||g(0)|| > 1 - delta (delta < 1/2), builds X1 = 0 and X2 = h^{-1}(A P / 2)
/// where g = M_A o h, A = g(0) and P is the top spectral projection of A*A.
/// Throws PreconditionUnmet when the hypotheses fail; returns nullopt if the
/// constructed pair does not verify numerically.
std::optional<EquicontinuityWitness> equicontinuity_witness(
    const BallAutomorphism& g, double delta, const Tolerances& tol = kDefaultTolerances);

}  // namespace opball
