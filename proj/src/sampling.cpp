#include "opball/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace opball {

Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

Matrix random_unit_direction(Rng& rng, Index rows, Index cols) {
  const Index max_rank = std::min(rows, cols);
  std::uniform_int_distribution<Index> pick_rank(1, max_rank);
  const Index rank = pick_rank(rng);
  Matrix d = random_matrix(rng, rows, rank) * random_matrix(rng, rank, cols);
  return d / spectral_norm(d);
}

BallPoint random_ball_point(Rng& rng, Index rows, Index cols, double max_norm) {
  std::uniform_real_distribution<double> unif(0.0, max_norm);
  const double r = unif(rng);
  return BallPoint(r * random_unit_direction(rng, rows, cols));
}

Matrix random_unitary(Rng& rng, Index n) {
  const Matrix g = random_matrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix column phases so the distribution is Haar
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix random_block_unitary(Rng& rng, Index n_h, Index n_k) {
  Matrix w = Matrix::Zero(n_h + n_k, n_h + n_k);
  w.topLeftCorner(n_h, n_h) = random_unitary(rng, n_h);
  w.bottomRightCorner(n_k, n_k) = random_unitary(rng, n_k);
  return w;
}

Matrix hyperbolic_rotation(Index n_h, Index n_k, const std::vector<double>& rapidities) {
  Matrix v = Matrix::Identity(n_h + n_k, n_h + n_k);
  const Index pairs = std::min<Index>(std::min(n_h, n_k), static_cast<Index>(rapidities.size()));
  for (Index i = 0; i < pairs; ++i) {
    const double s = rapidities[static_cast<std::size_t>(i)];
    v(i, i) = std::cosh(s);
    v(n_h + i, n_h + i) = std::cosh(s);
    v(i, n_h + i) = std::sinh(s);
    v(n_h + i, i) = std::sinh(s);
  }
  return v;
}

Matrix random_eta_preserving(Rng& rng, Index n_h, Index n_k, double max_rapidity) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> rapidities(static_cast<std::size_t>(std::min(n_h, n_k)));
  for (std::size_t i = 0; i < rapidities.size(); ++i) {
    rapidities[i] = i == 0 ? max_rapidity : max_rapidity * unif(rng);
  }
  const Matrix w1 = random_block_unitary(rng, n_h, n_k);
  const Matrix w2 = random_block_unitary(rng, n_h, n_k);
  return w1 * hyperbolic_rotation(n_h, n_k, rapidities) * w2;
}

}  // namespace opball
