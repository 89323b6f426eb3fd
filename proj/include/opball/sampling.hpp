#pragma once

// Seeded random generators for ball points, directions, unitaries and
// eta-preserving matrices. Deterministic for a given seed on a given
// standard library.

#include <random>

#include "opball/mobius.hpp"

namespace opball {

using Rng = std::mt19937_64;

/// Complex Gaussian entries.
Matrix random_matrix(Rng& rng, Index rows, Index cols);

/// Spectral norm exactly 1. Rank is random between 1 and min(rows, cols).
Matrix random_unit_direction(Rng& rng, Index rows, Index cols);

/// ||A|| drawn uniformly from [0, max_norm].
BallPoint random_ball_point(Rng& rng, Index rows, Index cols, double max_norm = 0.9);

/// Haar-distributed unitary.
Matrix random_unitary(Rng& rng, Index n);

/// diag(U_H, U_K) with Haar-random blocks.
Matrix random_block_unitary(Rng& rng, Index n_h, Index n_k);

/// Hyperbolic rotation mixing the i-th basis vector of H with the i-th of K
/// by cosh/sinh of rapidities[i]; exactly J-unitary.
Matrix hyperbolic_rotation(Index n_h, Index n_k, const std::vector<double>& rapidities);

/// W1 * hyperbolic_rotation * W2 with random block unitaries W1, W2; the first
/// rapidity is `max_rapidity`, the others uniform in [0, max_rapidity].
/// ||V|| = ||V^{-1}|| = exp(max_rapidity).
Matrix random_eta_preserving(Rng& rng, Index n_h, Index n_k, double max_rapidity);

}  // namespace opball
