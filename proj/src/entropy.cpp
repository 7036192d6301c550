#include "rwgame/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rwgame {

namespace {

double clamp_unit(double x, const char* what) {
  if (!(x >= -kProbabilitySlack && x <= 1.0 + kProbabilitySlack)) {
    throw std::domain_error(std::string(what) + " outside [0, 1]: " + std::to_string(x));
  }
  if (x < 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  return x;
}

}  // namespace

double binary_entropy(double p) {
  p = clamp_unit(p, "probability");
  if (p == 0.0 || p == 1.0) return 0.0;
  const double q = 1.0 - p;
  return -p * std::log2(p) - q * std::log2(q);
}

double inverse_binary_entropy(double h, double tol) {
  h = clamp_unit(h, "entropy");
  if (h == 0.0) return 0.0;
  if (h == 1.0) return 0.5;

  double lo = 0.0;
  double hi = 0.5;
  // 0.5 / 2^40 < 1e-12; the hard cap only matters for tol == 0.
  for (int iter = 0; iter < 1100 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (binary_entropy(mid) <= h) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace rwgame
