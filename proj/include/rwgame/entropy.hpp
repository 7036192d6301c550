#pragma once

namespace rwgame {

/// Slack allowed outside [0, 1] before a probability is rejected. Inputs
/// inside the slack are clamped.
inline constexpr double kProbabilitySlack = 1e-12;

/// Absolute tolerance of inverse_binary_entropy.
inline constexpr double kInverseEntropyTol = 1e-12;

/// Binary entropy in bits, with 0*log2(0) = 0.
/// Throws std::domain_error if p is outside [0, 1] by more than the slack.
double binary_entropy(double p);

/// Lower branch of the binary entropy inverse: the p in [0, 1/2] with
/// binary_entropy(p) == h.
///
/// Plain bisection on [0, 1/2]. The returned value is the lower end of the
/// final bracket, so binary_entropy(result) <= h always holds and the
/// distance to the exact root is at most `tol`. A tolerance of 0 bisects
/// until the bracket stops shrinking in double precision.
double inverse_binary_entropy(double h, double tol = kInverseEntropyTol);

}  // namespace rwgame
