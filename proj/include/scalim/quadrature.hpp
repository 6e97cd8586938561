#ifndef SCALIM_QUADRATURE_HPP_
#define SCALIM_QUADRATURE_HPP_

#include <functional>
#include <vector>

#include "scalim/common.hpp"

namespace scalim {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; nodes via Newton iteration, cached per n.
const QuadRule& gauss_legendre(int n);

// Gauss-Legendre rule mapped to [a, b].
QuadRule gauss_legendre_on(int n, double a, double b);

// Half-line rule for Gaussian-decaying integrands: r = s * atanh(t) with
// Gauss-Legendre nodes t in (0, 1). No node lands at r = 0.
QuadRule tanh_halfline(int n, double scale);

// Full-line rule: p = s * atanh(t), t in (-1, 1).
QuadRule tanh_fullline(int n, double scale);

struct AdaptiveResult {
  cplx value{};
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

// Adaptive panel quadrature on [a, b] with a nested Gauss 7/15 pair
// (Gauss-Kronrod style error control via the embedded coarse rule).
AdaptiveResult adaptive_gauss(const std::function<cplx(double)>& f, double a, double b,
                              double abs_tol, double rel_tol, int max_depth = 18);

}  // namespace scalim

#endif  // SCALIM_QUADRATURE_HPP_
