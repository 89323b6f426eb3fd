#pragma once

// Small finite groups and seeded test representations pi = V tau0 V^{-1}
// with tau0 block-diagonal unitary and V eta-preserving.

#include <string>

#include "opball/pontryagin.hpp"

namespace opball {

/// Cayley table of a named group: "C<n>" (cyclic, 1 <= n <= 120), "S3", "Q8".
/// Throws UnknownGroup otherwise.
GroupTable group_table(const std::string& name);

struct TestRepresentation {
  Representation rep;
  Matrix conjugator;            // V
  std::vector<Matrix> unitary;  // tau0
  BallPoint expected_fixed_point;  // w_V(0)
};

/// tau0 = W (rho_H (+) rho_K) W* for random block unitary W; rho_H and rho_K
/// are sums of irreducibles chosen without a common summand when the
/// dimensions allow it, so w_V(0) is the only common fixed point.
/// V = random_eta_preserving with ||V|| ||V^{-1}|| = conditioning.
TestRepresentation make_test_representation(const std::string& group,
                                            const PontryaginSignature& sig,
                                            double conditioning, std::uint64_t seed,
                                            const Tolerances& tol = kDefaultTolerances);

}  // namespace opball
