#include "scalim/common.hpp"

#include <cmath>

namespace scalim {

double upper_gamma_regularized_half(int two_a, double x) {
  if (two_a < 1) throw DomainError("upper_gamma_regularized_half: a must be >= 1/2");
  if (x < 0) throw DomainError("upper_gamma_regularized_half: x must be >= 0");
  // Start from Q(1/2,x) or Q(1,x) and climb with
  // Q(a+1,x) = Q(a,x) + x^a e^{-x} / Gamma(a+1).
  double q, a;
  if (two_a % 2 == 1) {
    q = std::erfc(std::sqrt(x));
    a = 0.5;
  } else {
    q = std::exp(-x);
    a = 1.0;
  }
  while (2 * a + 0.5 < two_a) {
    double term = 0.0;
    if (x > 0) term = std::exp(a * std::log(x) - x - std::lgamma(a + 1.0));
    q += term;
    a += 1.0;
  }
  return std::min(1.0, q);
}

}  // namespace scalim
